//! Homotopy of configuration spaces of points in `R^3` through the classes
//! `b_ij`: infinitesimal braid relations, normalized parts, and the matrices
//! of point-doubling and point-forgetting maps.

mod gens;
mod maps;
mod presentation;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use thiserror::Error;

pub use gens::{BraidGen, Convention, GenOrder};
pub use maps::{codegeneracy_matrix, coface_matrix, InducedMap, StructureMap, Substitution};
pub use presentation::{
    base_relators, ib_relators, is_connected, npi_free, MemoryPresentations, PiKey, PiPresentation,
    PresentationSource, Scope,
};

use crate::lie::{lyndon_words_with_multidegree, Letter};
use crate::linalg::{kernel_basis, IntMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BraidError {
    #[error("{map:?} is not defined on {n} points")]
    IndexOutOfRange { map: StructureMap, n: usize },
    #[error("presentations {from} and {to} do not fit the requested map")]
    Mismatch { from: PiKey, to: PiKey },
}

/// Rank predicted by the splitting of the cube of wedges of 2-spheres: Lyndon
/// words of length `length` in `n - 1` letters using every letter.
pub fn hilton_rank(n: usize, length: usize) -> usize {
    if n < 2 || length < n - 1 {
        return 0;
    }
    let q = n - 1;
    // Distribute the surplus letters over the q letters, each used at least once.
    let mut total = 0;
    let mut counts = vec![1usize; q];
    fn rec(k: usize, left: usize, counts: &mut [usize], total: &mut usize) {
        if k + 1 == counts.len() {
            counts[k] += left;
            let md: BTreeMap<Letter, usize> = counts.iter().enumerate().map(|(i, &c)| (i as Letter, c)).collect();
            *total += lyndon_words_with_multidegree(&md).len();
            counts[k] -= left;
            return;
        }
        for extra in 0..=left {
            counts[k] += extra;
            rec(k + 1, left - extra, counts, total);
            counts[k] -= extra;
        }
    }
    rec(0, length - q, &mut counts, &mut total);
    total
}

/// Rank of the part of the full free lattice killed by every
/// point-forgetting map. Equals the normalized rank; meant for small `n`.
pub fn normalized_rank_via_codegeneracies(src: &mut dyn PresentationSource, key: PiKey) -> Result<usize, BraidError> {
    let full = src.presentation(PiKey { scope: Scope::Full, ..key });
    if key.n < 2 {
        return Ok(full.rank());
    }
    let lower = src.presentation(PiKey {
        scope: Scope::Full,
        n: key.n - 1,
        ..key
    });
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for k in 1..=key.n {
        let m = codegeneracy_matrix(k, &full, &lower)?;
        for r in 0..m.matrix.rows() {
            rows.push(m.matrix.row(r).to_vec());
        }
    }
    let stacked = if rows.is_empty() {
        IntMatrix::zeros(0, full.rank())
    } else {
        IntMatrix::from_rows(&rows)
    };
    Ok(kernel_basis(&stacked).len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{LieElement, Word};

    #[test]
    fn hilton_values() {
        assert_eq!(hilton_rank(2, 1), 1);
        assert_eq!(hilton_rank(3, 2), 1);
        assert_eq!(hilton_rank(4, 3), 2);
        assert_eq!(hilton_rank(5, 4), 6);
        assert_eq!(hilton_rank(3, 3), 2);
        assert_eq!(hilton_rank(4, 4), 9);
    }

    #[test]
    fn small_normalized_ranks() {
        assert_eq!(npi_free(2, 1).rank(), 1);
        assert_eq!(npi_free(3, 2).rank(), 1);
        assert_eq!(npi_free(4, 3).rank(), 2);
        assert_eq!(npi_free(3, 3).rank(), 2);
    }

    #[test]
    fn three_point_relators() {
        let o = GenOrder::Lex;
        let rels = base_relators(3, Convention::Classical, o);
        // [b12, b13 + b23] up to sign
        let l = |i, j| Word::letter(o.letter(BraidGen::new(i, j)));
        let mut r = LieElement::zero();
        r.add_term(l(1, 2).concat(&l(1, 3)), 1).unwrap();
        r.add_term(l(1, 2).concat(&l(2, 3)), 1).unwrap();
        assert!(rels.contains(&r) || rels.contains(&r.scaled(-1).unwrap()));
        // and the quotient of the three monomials has rank one
        let p = npi_free(3, 2);
        assert_eq!(p.ambient.len(), 3);
        assert!(p.presentation().isomorphic(&crate::linalg::CokerPresentation::free(1)));
    }

    #[test]
    fn graded_self_bracket() {
        let p = npi_free(2, 2);
        assert_eq!(p.key.convention, Convention::GradedSymmetric);
        assert_eq!(p.ambient_text, vec!["[b12,b12]".to_string()]);
        assert_eq!(p.rank(), 1);
        let c = PiPresentation::build(PiKey::normalized(2, 2).with_convention(Convention::Classical));
        assert_eq!(c.rank(), 0);
    }

    #[test]
    fn conventions_agree_on_small_ranks() {
        for (n, l) in [(3, 2), (3, 3), (4, 3), (4, 4)] {
            let c = PiPresentation::build(PiKey::normalized(n, l).with_convention(Convention::Classical));
            assert_eq!(c.rank(), npi_free(n, l).rank(), "n={n} l={l}");
            assert_eq!(c.rank(), hilton_rank(n, l));
        }
    }

    #[test]
    fn disjoint_pair_relator() {
        let o = GenOrder::Lex;
        let rels = base_relators(4, Convention::Classical, o);
        let l = |i, j| Word::letter(o.letter(BraidGen::new(i, j)));
        assert!(rels.contains(&LieElement::basis(l(1, 2).concat(&l(3, 4)))));
    }

    #[test]
    fn codegeneracy_cross_check() {
        let mut src = MemoryPresentations::default();
        for (n, l) in [(2, 1), (3, 2), (3, 3), (4, 3)] {
            let via = normalized_rank_via_codegeneracies(&mut src, PiKey::normalized(n, l)).unwrap();
            assert_eq!(via, npi_free(n, l).rank(), "n={n} l={l}");
        }
    }
}
