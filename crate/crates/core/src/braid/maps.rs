use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::gens::{BraidGen, Convention};
use super::presentation::{with_normalizer, PiKey, PiPresentation};
use super::BraidError;
use crate::lie::{standard_split, Letter, LieElement, Word};
use crate::linalg::{IntMatrix, SparseVec};

/// A structure map between configuration spaces of `n` and `n ± 1` points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StructureMap {
    /// `d^k`, `0 <= k <= n + 1`: doubles point `k` (adds a point at either
    /// end for `k = 0` and `k = n + 1`).
    Coface(usize),
    /// Forgets point `k`, `1 <= k <= n`.
    Forget(usize),
}

impl StructureMap {
    /// The cosimplicial codegeneracy `s^j`, which forgets point `j + 1`.
    pub fn codegeneracy(j: usize) -> Self {
        StructureMap::Forget(j + 1)
    }

    pub fn target_points(&self, n: usize) -> usize {
        match self {
            StructureMap::Coface(_) => n + 1,
            StructureMap::Forget(_) => n - 1,
        }
    }

    pub fn check(&self, n: usize) -> Result<(), BraidError> {
        let ok = match *self {
            StructureMap::Coface(k) => k <= n + 1,
            StructureMap::Forget(k) => (1..=n).contains(&k),
        };
        if ok {
            Ok(())
        } else {
            Err(BraidError::IndexOutOfRange { map: *self, n })
        }
    }

    /// Image of one generator as a sum of generators.
    pub fn gen_image(&self, n: usize, g: BraidGen) -> Vec<BraidGen> {
        let (i, j) = (g.i as usize, g.j as usize);
        let b = |a: usize, c: usize| BraidGen::new(a as u8, c as u8);
        match *self {
            StructureMap::Coface(0) => vec![b(i + 1, j + 1)],
            StructureMap::Coface(k) if k == n + 1 => vec![g],
            StructureMap::Coface(k) => {
                let up = |a: usize| if a < k { a } else { a + 1 };
                if j == k {
                    vec![b(i, k), b(i, k + 1)]
                } else if i == k {
                    vec![b(k, j + 1), b(k + 1, j + 1)]
                } else {
                    vec![b(up(i), up(j))]
                }
            }
            StructureMap::Forget(k) => {
                if i == k || j == k {
                    vec![]
                } else {
                    let down = |a: usize| if a < k { a } else { a - 1 };
                    vec![b(down(i), down(j))]
                }
            }
        }
    }
}

/// Applies a structure map to Lie elements by substituting generators and
/// bracketing along standard factorizations.
pub struct Substitution {
    convention: Convention,
    images: HashMap<Letter, LieElement>,
    memo: HashMap<Word, LieElement>,
}

impl Substitution {
    pub fn new(map: StructureMap, source: &PiKey) -> Self {
        let order = source.order;
        let images = BraidGen::all(source.n)
            .into_iter()
            .map(|g| {
                let mut e = LieElement::zero();
                for h in map.gen_image(source.n, g) {
                    e.add_term(Word::letter(order.letter(h)), 1).unwrap();
                }
                (order.letter(g), e)
            })
            .collect();
        Substitution {
            convention: source.convention,
            images,
            memo: HashMap::new(),
        }
    }

    /// Image of the basis element `P(w)`.
    pub fn word(&mut self, w: &Word) -> LieElement {
        if w.len() == 1 {
            return self.images[&w.letters()[0]].clone();
        }
        if let Some(e) = self.memo.get(w) {
            return e.clone();
        }
        let s = standard_split(w.letters());
        let u = self.word(&Word(w.letters()[..s].to_vec()));
        let v = self.word(&Word(w.letters()[s..].to_vec()));
        let e = with_normalizer(self.convention, |nz| nz.bracket(&u, &v)).expect("substitution bracket");
        self.memo.insert(w.clone(), e.clone());
        e
    }

    pub fn element(&mut self, e: &LieElement) -> LieElement {
        let mut out = LieElement::zero();
        for (w, c) in e.terms() {
            let img = self.word(w);
            out.add_scaled(&img, c).unwrap();
        }
        out
    }

    /// Image of a source ambient vector in target ambient coordinates.
    pub fn vector(&mut self, source: &PiPresentation, target: &PiPresentation, v: &[(usize, BigInt)]) -> SparseVec<BigInt> {
        let mut acc: HashMap<usize, BigInt> = HashMap::new();
        for (i, c) in v {
            let img = self.word(&source.ambient[*i]);
            for (t, x) in target.project(&img) {
                *acc.entry(t).or_insert_with(BigInt::zero) += c * x;
            }
        }
        let mut out: SparseVec<BigInt> = acc.into_iter().filter(|(_, x)| !x.is_zero()).collect();
        out.sort_by_key(|e| e.0);
        out
    }
}

/// The matrix of a structure map between free parts of two presentations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InducedMap {
    pub map: StructureMap,
    pub source: PiKey,
    pub target: PiKey,
    /// `target.rank() x source.rank()`.
    pub matrix: IntMatrix,
}

fn check_pair(map: StructureMap, source: &PiPresentation, target: &PiPresentation) -> Result<(), BraidError> {
    map.check(source.key.n)?;
    let expect = PiKey {
        n: map.target_points(source.key.n),
        scope: target.key.scope,
        ..source.key
    };
    if target.key != expect {
        return Err(BraidError::Mismatch {
            from: source.key,
            to: target.key,
        });
    }
    Ok(())
}

impl InducedMap {
    pub fn compute(map: StructureMap, source: &PiPresentation, target: &PiPresentation) -> Result<Self, BraidError> {
        check_pair(map, source, target)?;
        let mut sub = Substitution::new(map, &source.key);
        let mut matrix = IntMatrix::zeros(target.rank(), source.rank());
        for (f, lift) in source.quotient.section.iter().enumerate() {
            let img = sub.vector(source, target, lift);
            for (r, x) in target.quotient.reduce(&img).into_iter().enumerate() {
                matrix[(r, f)] = x;
            }
        }
        Ok(InducedMap {
            map,
            source: source.key,
            target: target.key,
            matrix,
        })
    }

    /// Whether every source relator maps into the target relator span.
    pub fn well_defined(map: StructureMap, source: &PiPresentation, target: &PiPresentation) -> Result<bool, BraidError> {
        check_pair(map, source, target)?;
        let mut sub = Substitution::new(map, &source.key);
        Ok(source
            .relators
            .iter()
            .all(|r| target.quotient.is_zero_class(&sub.vector(source, target, r))))
    }
}

/// Matrix of `d^k` on normalized free parts (or any scope, via the keys of
/// `source` and `target`).
pub fn coface_matrix(k: usize, source: &PiPresentation, target: &PiPresentation) -> Result<InducedMap, BraidError> {
    InducedMap::compute(StructureMap::Coface(k), source, target)
}

/// Matrix of the map forgetting point `k`.
pub fn codegeneracy_matrix(k: usize, source: &PiPresentation, target: &PiPresentation) -> Result<InducedMap, BraidError> {
    InducedMap::compute(StructureMap::Forget(k), source, target)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(i: u8, j: u8) -> BraidGen {
        BraidGen::new(i, j)
    }

    #[test]
    fn doubling_rules() {
        assert_eq!(StructureMap::Coface(1).gen_image(2, g(1, 2)), vec![g(1, 3), g(2, 3)]);
        assert_eq!(StructureMap::Coface(2).gen_image(2, g(1, 2)), vec![g(1, 2), g(1, 3)]);
        assert_eq!(StructureMap::Coface(0).gen_image(2, g(1, 2)), vec![g(2, 3)]);
        assert_eq!(StructureMap::Coface(3).gen_image(2, g(1, 2)), vec![g(1, 2)]);
        assert_eq!(StructureMap::Coface(2).gen_image(3, g(1, 3)), vec![g(1, 4)]);
    }

    #[test]
    fn forgetting_rules() {
        assert_eq!(StructureMap::Forget(3).gen_image(3, g(1, 2)), vec![g(1, 2)]);
        assert!(StructureMap::Forget(3).gen_image(3, g(1, 3)).is_empty());
        assert_eq!(StructureMap::Forget(1).gen_image(3, g(2, 3)), vec![g(1, 2)]);
    }

    #[test]
    fn range_checks() {
        assert!(StructureMap::Coface(4).check(3).is_ok());
        assert!(StructureMap::Coface(5).check(3).is_err());
        assert!(StructureMap::Forget(0).check(3).is_err());
        assert!(StructureMap::Forget(4).check(3).is_err());
    }
}
