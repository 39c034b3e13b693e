use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::lie::{Grading, Letter, Word};

/// The class `b_ij`, `1 <= i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BraidGen {
    pub i: u8,
    pub j: u8,
}

impl BraidGen {
    pub fn new(i: u8, j: u8) -> Self {
        assert!(1 <= i && i < j && j < 32, "bad braid generator b_{i}{j}");
        BraidGen { i, j }
    }

    /// All generators on `n` points in lexicographic order.
    pub fn all(n: usize) -> Vec<BraidGen> {
        let n = n as u8;
        (1..=n)
            .flat_map(|i| (i + 1..=n).map(move |j| BraidGen { i, j }))
            .collect()
    }

    pub fn disjoint(&self, other: &BraidGen) -> bool {
        self.i != other.i && self.i != other.j && self.j != other.i && self.j != other.j
    }

    fn code(&self) -> u32 {
        self.i as u32 * 32 + self.j as u32
    }

    fn from_code(c: u32) -> Self {
        BraidGen {
            i: (c / 32) as u8,
            j: (c % 32) as u8,
        }
    }
}

impl fmt::Display for BraidGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.i < 10 && self.j < 10 {
            write!(f, "b{}{}", self.i, self.j)
        } else {
            write!(f, "b{}_{}", self.i, self.j)
        }
    }
}

/// How generators are ordered as Lie letters. The Lyndon basis, and with it
/// every matrix, depends on this order; the groups do not.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenOrder {
    #[default]
    Lex,
    Reverse,
    Scrambled(u64),
}

impl FromStr for GenOrder {
    type Err = String;

    /// `lex`, `reverse` or `scrambled:SEED`.
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "lex" => Ok(GenOrder::Lex),
            "reverse" => Ok(GenOrder::Reverse),
            _ => s
                .strip_prefix("scrambled:")
                .and_then(|seed| seed.parse().ok())
                .map(GenOrder::Scrambled)
                .ok_or_else(|| format!("unknown generator order {s:?} (expected lex, reverse or scrambled:SEED)")),
        }
    }
}

const CODE_BITS: u32 = 10;

impl GenOrder {
    /// The letter of `g`. The low bits always hold `32 i + j`, so letters are
    /// distinct and decodable for every order, consistently across `n`.
    pub fn letter(&self, g: BraidGen) -> Letter {
        let c = g.code();
        let high = match self {
            GenOrder::Lex => 0,
            GenOrder::Reverse => (1 << CODE_BITS) - 1 - c,
            GenOrder::Scrambled(seed) => mix(*seed ^ c as u64) & ((1 << 20) - 1),
        };
        (high << CODE_BITS) | c
    }

    pub fn gen(&self, l: Letter) -> BraidGen {
        BraidGen::from_code(l & ((1 << CODE_BITS) - 1))
    }

    /// Letters of all generators on `n` points, sorted as letters.
    pub fn letters(&self, n: usize) -> Vec<Letter> {
        let mut v: Vec<Letter> = BraidGen::all(n).into_iter().map(|g| self.letter(g)).collect();
        v.sort_unstable();
        v
    }

    /// Set of point indices a word touches.
    pub fn support(&self, w: &Word) -> BTreeSet<u8> {
        let mut s = BTreeSet::new();
        for &l in w.letters() {
            let g = self.gen(l);
            s.insert(g.i);
            s.insert(g.j);
        }
        s
    }

    pub fn support_mask(&self, w: &[Letter]) -> u32 {
        w.iter().fold(0, |m, &l| {
            let g = self.gen(l);
            m | (1 << g.i) | (1 << g.j)
        })
    }

    pub fn render(&self, l: Letter) -> String {
        self.gen(l).to_string()
    }
}

fn mix(mut x: u64) -> u32 {
    // splitmix64 finalizer
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    (x ^ (x >> 31)) as u32
}

/// Sign convention for `b_ji` with `i < j`, and the symmetry of the bracket.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    /// `b_ji = b_ij` with the ordinary antisymmetric bracket.
    Classical,
    /// `b_ji = -b_ij`, generators odd, graded bracket (Samelson products
    /// of classes of odd degree in the loop space).
    #[default]
    GradedSymmetric,
}

impl Convention {
    pub fn grading(&self) -> Grading {
        match self {
            Convention::Classical => Grading::Classical,
            Convention::GradedSymmetric => Grading::OddGenerators,
        }
    }

    /// Sign of `b_ab` relative to `b_{min,max}`.
    pub fn sign(&self, a: u8, b: u8) -> i64 {
        match self {
            Convention::GradedSymmetric if a > b => -1,
            _ => 1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Convention::Classical => "classical",
            Convention::GradedSymmetric => "graded-symmetric",
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Convention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "classical" => Ok(Convention::Classical),
            "graded-symmetric" => Ok(Convention::GradedSymmetric),
            _ => Err(format!("unknown convention {s:?} (expected classical or graded-symmetric)")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn letters_roundtrip() {
        for order in [GenOrder::Lex, GenOrder::Reverse, GenOrder::Scrambled(7)] {
            for g in BraidGen::all(6) {
                assert_eq!(order.gen(order.letter(g)), g);
            }
            let ls = order.letters(6);
            let mut d = ls.clone();
            d.dedup();
            assert_eq!(d.len(), 15);
        }
    }

    #[test]
    fn lex_matches_pairs() {
        let o = GenOrder::Lex;
        let gs = BraidGen::all(4);
        assert!(gs.windows(2).all(|p| o.letter(p[0]) < o.letter(p[1])));
        let o = GenOrder::Reverse;
        assert!(gs.windows(2).all(|p| o.letter(p[0]) > o.letter(p[1])));
    }

    #[test]
    fn rendering() {
        assert_eq!(BraidGen::new(1, 2).to_string(), "b12");
        assert_eq!(BraidGen::new(3, 11).to_string(), "b3_11");
    }
}
