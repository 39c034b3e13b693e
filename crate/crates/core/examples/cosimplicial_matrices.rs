//! Matrices of the doubling and forgetting maps between normalized homotopy
//! lattices, and the alternating sum of the doublings.
//!
//! cargo run --example cosimplicial_matrices -- 3 3

use gw_tower::braid::{InducedMap, MemoryPresentations, PiKey, PresentationSource, StructureMap};
use gw_tower::tower::{alternating_coface_sum, TowerOptions};

fn main() {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<usize>().expect("number"));
    let n = args.next().unwrap_or(3);
    let length = args.next().unwrap_or(3);
    let mut src = MemoryPresentations::default();
    let from = PiKey::normalized(n, length);
    let a = src.presentation(from);
    let b = src.presentation(from.on(n + 1));
    println!("ranks {} -> {}", a.rank(), b.rank());
    for i in 0..=n + 1 {
        let m = InducedMap::compute(StructureMap::Coface(i), &a, &b).unwrap();
        println!("d^{i}:\n{}", m.matrix);
    }
    let d = alternating_coface_sum(&mut src, TowerOptions::default(), n, length).unwrap();
    println!("sum of (-1)^i d^i:\n{d}");
}
