//! Chord diagram enumeration and the 4T/separation quotient.

use std::collections::BTreeSet;

use num_bigint::BigInt;

use gw_tower::chords::{
    a_i_presentation, chord_report_with, enumerate, four_t_relators, reflection_preserves_relations, sep_relators,
    ChordOptions, FourTSigns,
};
use gw_tower::linalg::cokernel_sparse;

fn double_factorial(m: usize) -> usize {
    // (2m - 1)!! via T(m) = (2m - 1) T(m - 1), T(0) = 1.
    (1..=m).fold(1, |t, k| t * (2 * k - 1))
}

/// All perfect matchings of `points`, pairing the first point each time.
fn matchings(points: &[u8]) -> Vec<Vec<(u8, u8)>> {
    if points.is_empty() {
        return vec![vec![]];
    }
    let first = points[0];
    let mut out = Vec::new();
    for k in 1..points.len() {
        let rest: Vec<u8> = points[1..].iter().copied().filter(|&p| p != points[k]).collect();
        for mut m in matchings(&rest) {
            m.push((first, points[k]));
            m.sort_unstable();
            out.push(m);
        }
    }
    out
}

#[test]
fn counts_are_double_factorials() {
    for m in 1..=6 {
        assert_eq!(enumerate(m).len(), double_factorial(m), "m={m}");
    }
    assert_eq!((1..=6).map(double_factorial).collect::<Vec<_>>(), [1, 3, 15, 105, 945, 10395]);
}

#[test]
fn enumeration_matches_brute_force() {
    for m in 1..=5u8 {
        let points: Vec<u8> = (1..=2 * m).collect();
        let brute: BTreeSet<Vec<(u8, u8)>> = matchings(&points).into_iter().collect();
        let ours: Vec<Vec<(u8, u8)>> = enumerate(m as usize).iter().map(|d| d.chords().to_vec()).collect();
        let sorted: BTreeSet<Vec<(u8, u8)>> = ours.iter().cloned().collect();
        assert_eq!(sorted.len(), ours.len(), "duplicates at m={m}");
        assert_eq!(sorted, brute, "m={m}");
        // Canonical order is the sorted order.
        assert!(ours.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn relators_are_well_formed() {
    for m in 2..=4 {
        let n = enumerate(m).len();
        for r in sep_relators(m) {
            assert_eq!(r.terms.len(), 1);
            assert_eq!(r.terms[0].1, 1);
        }
        for r in four_t_relators(m, FourTSigns::Standard) {
            assert!(r.terms.iter().all(|&(i, c)| i < n && c != 0));
            // Four terms with coefficients ±1, or fewer after cancellation.
            assert!(r.terms.len() <= 4);
            assert!(r.terms.iter().map(|t| t.1.abs()).sum::<i64>() <= 4);
        }
    }
}

#[test]
fn known_ranks_without_torsion() {
    let ranks: Vec<usize> = (1..=5).map(|m| a_i_presentation(m).free_rank).collect();
    assert_eq!(ranks, [1, 1, 1, 2, 3]);
    for m in 1..=5 {
        assert!(a_i_presentation(m).torsion.is_empty());
    }
}

#[test]
fn dense_and_sparse_elimination_agree() {
    for m in 1..=4 {
        for signs in [FourTSigns::Standard, FourTSigns::Paired] {
            assert_eq!(chord_report_with(m, signs, true), chord_report_with(m, signs, false), "m={m}");
        }
    }
}

#[test]
fn global_negation_changes_nothing() {
    for m in 2..=4 {
        let n = enumerate(m).len();
        let rels: Vec<Vec<(usize, BigInt)>> = sep_relators(m)
            .iter()
            .chain(four_t_relators(m, FourTSigns::Standard).iter())
            .map(|r| r.terms.iter().map(|&(i, c)| (i, BigInt::from(c))).collect())
            .collect();
        let negated: Vec<Vec<(usize, BigInt)>> = rels
            .iter()
            .map(|r| r.iter().map(|(i, c)| (*i, -c)).collect())
            .collect();
        assert_eq!(cokernel_sparse(n, &rels), cokernel_sparse(n, &negated));
        assert_eq!(cokernel_sparse(n, &rels), a_i_presentation(m));
    }
}

#[test]
fn reflection_is_a_symmetry() {
    for m in 1..=4 {
        assert!(reflection_preserves_relations(m, ChordOptions::default()), "m={m}");
    }
}
