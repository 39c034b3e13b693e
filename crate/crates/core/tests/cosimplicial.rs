//! Cosimplicial identities for the matrices of doubling and forgetting maps.

mod common;

use common::Maps;
use gw_tower::braid::{PiKey, StructureMap};

#[test]
fn coface_identities_on_normalized_lattices() {
    let mut maps = Maps::default();
    let mut checked = 0;
    for n in 1..=4usize {
        for length in [n + 1, n + 2] {
            if length > 5 {
                continue;
            }
            checked += maps.coface_identities(PiKey::normalized(n, length)).unwrap();
        }
    }
    assert!(checked > 0);
}

#[test]
fn coface_identities_on_full_lattices() {
    let mut maps = Maps::default();
    for n in 1..=3usize {
        for length in [2, 3] {
            maps.coface_identities(PiKey::full(n, length)).unwrap();
        }
    }
}

#[test]
fn codegeneracy_identities_on_full_lattices() {
    let mut maps = Maps::default();
    for n in 1..=4usize {
        for length in [2, 3] {
            maps.codegeneracy_identities(PiKey::full(n, length)).unwrap();
        }
    }
}

#[test]
fn forgetting_kills_normalized_lattices() {
    let mut maps = Maps::default();
    for (n, length) in [(2, 1), (3, 2), (3, 3), (4, 3), (4, 4)] {
        let key = PiKey::normalized(n, length);
        for k in 1..=n {
            let m = maps.matrix(StructureMap::Forget(k), key).unwrap();
            assert!(m.is_zero(), "forgetting {k} on {key}");
        }
    }
}
