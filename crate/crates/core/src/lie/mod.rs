//! Free Lie rings over `Z` in the Lyndon basis.
//!
//! Basis elements are standard bracketings `P(w)` of Lyndon words `w`; a
//! [`LieElement`] stores them keyed by `w`. Brackets are classical
//! (`[x, x] = 0`, `[x, y] = -[y, x]`) unless a [`Normalizer`] is built with
//! [`Grading::OddGenerators`].

mod element;
mod normalize;
mod words;

use std::collections::BTreeMap;

use thiserror::Error;

pub use element::{BracketMonomial, LieElement};
pub use normalize::{normalize, Grading, Normalizer, DEFAULT_FUEL};
pub use words::{graded_basis_words, is_lyndon, lyndon_words, lyndon_words_with_multidegree, square_root, Letter, Word};
pub(crate) use words::standard_split;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("unknown generator {0}")]
    UnknownGenerator(Letter),
    #[error("rewriting did not terminate within {0} steps")]
    FuelExhausted(u64),
    #[error("coefficient overflow")]
    Overflow,
    #[error("malformed bracket expression: {0}")]
    Parse(String),
}

/// Basis monomials of the given length over `alphabet`, ordered by their
/// Lyndon words.
pub fn hall_words(alphabet: &[Letter], length: usize) -> Vec<BracketMonomial> {
    let mut a = alphabet.to_vec();
    a.sort_unstable();
    a.dedup();
    lyndon_words(&a, length).iter().map(BracketMonomial::from_lyndon).collect()
}

/// Basis monomials with exactly the given leaf multiset.
pub fn multidegree_basis(multidegree: &BTreeMap<Letter, usize>) -> Vec<BracketMonomial> {
    lyndon_words_with_multidegree(multidegree)
        .iter()
        .map(BracketMonomial::from_lyndon)
        .collect()
}

/// Rank of the multilinear part `Lie(k)` of the free Lie ring on `k`
/// letters, by enumeration.
pub fn multilinear_rank(k: usize) -> usize {
    let md: BTreeMap<Letter, usize> = (1..=k as Letter).map(|l| (l, 1)).collect();
    lyndon_words_with_multidegree(&md).len()
}

/// Number of Lyndon words of length `length` over `q` letters:
/// `(1/length) Σ_{d | length} μ(d) q^{length/d}`.
pub fn lyndon_count(q: u64, length: u32) -> u64 {
    if length == 0 {
        return 0;
    }
    let mut total: i128 = 0;
    for d in 1..=length {
        if length.is_multiple_of(d) {
            total += mobius(d) as i128 * (q as i128).pow(length / d);
        }
    }
    (total / length as i128) as u64
}

fn mobius(mut n: u32) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}
