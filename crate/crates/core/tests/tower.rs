use gw_tower::braid::{Convention, GenOrder, MemoryPresentations};
use gw_tower::chords::ChordOptions;
use gw_tower::tower::{alternating_coface_sum, e1_with, e2_zero_line_with, verify_e2comp_with, MatchKind, TowerOptions};

fn options() -> Vec<TowerOptions> {
    let mut out = Vec::new();
    for convention in [Convention::GradedSymmetric, Convention::Classical] {
        for order in [GenOrder::Lex, GenOrder::Reverse, GenOrder::Scrambled(7)] {
            out.push(TowerOptions { convention, order });
        }
    }
    out
}

#[test]
fn d1_squares_to_zero() {
    let mut src = MemoryPresentations::default();
    for convention in [Convention::GradedSymmetric, Convention::Classical] {
        let opts = TowerOptions {
            convention,
            ..TowerOptions::default()
        };
        let mut pairs = 0;
        for n in 1..=3usize {
            for length in n.saturating_sub(1).max(1)..=5 {
                let first = alternating_coface_sum(&mut src, opts, n, length).unwrap();
                let second = alternating_coface_sum(&mut src, opts, n + 1, length).unwrap();
                let d2 = second.mul(&first).unwrap();
                assert!(d2.is_zero(), "{convention} n={n} length={length}");
                pairs += usize::from(first.cols() > 0 && second.rows() > 0);
            }
        }
        assert!(pairs >= 2);
    }
}

#[test]
fn e2_ignores_generator_order() {
    let mut src = MemoryPresentations::default();
    for m in 2..=5 {
        let mut seen = Vec::new();
        for opts in options() {
            let e2 = e2_zero_line_with(&mut src, opts, m).unwrap().presentation;
            seen.push((opts.convention, e2));
        }
        for w in seen.windows(2) {
            if w[0].0 == w[1].0 {
                assert_eq!(w[0].1, w[1].1, "m={m}");
            }
        }
    }
}

#[test]
fn e1_ranks_ignore_generator_order() {
    let mut src = MemoryPresentations::default();
    for m in 2..=5 {
        let base = e1_with(&mut src, TowerOptions::default(), m, 0).unwrap().free_rank;
        for opts in options() {
            assert_eq!(e1_with(&mut src, opts, m, 0).unwrap().free_rank, base, "m={m} {opts:?}");
        }
    }
}

#[test]
fn graded_e2_matches_chords_integrally() {
    let mut src = MemoryPresentations::default();
    for m in 2..=5 {
        let r = verify_e2comp_with(&mut src, TowerOptions::default(), ChordOptions::default(), m).unwrap();
        assert_eq!(r.matches, MatchKind::Integral, "m={m}");
        assert!(!r.gating_failure());
    }
}

#[test]
fn classical_convention_is_experimental_and_fails_at_five() {
    let mut src = MemoryPresentations::default();
    let opts = TowerOptions {
        convention: Convention::Classical,
        ..TowerOptions::default()
    };
    let r = verify_e2comp_with(&mut src, opts, ChordOptions::default(), 5).unwrap();
    assert!(r.experimental);
    assert_eq!(r.matches, MatchKind::None);
    assert_eq!((r.e2.free, r.e2.torsion.len()), (0, 2));
    assert!(!r.gating_failure());
}
