use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::element::{BracketMonomial, LieElement};
use super::words::{square_root, standard_split, Word};
use super::{Letter, LieError};

pub const DEFAULT_FUEL: u64 = 50_000_000;

/// Symmetry of the bracket.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Grading {
    /// `[x, x] = 0`, `[x, y] = -[y, x]`.
    #[default]
    Classical,
    /// Generators are odd: `[a, b] = -(-1)^{|a||b|} [b, a]` with `|a|` the
    /// length, and `[a, [a, a]] = 0`. Squares `[P(w), P(w)]` of odd-length
    /// Lyndon words join the basis; they are keyed by the word `ww`.
    OddGenerators,
}

/// Rewrites brackets into the Lyndon basis.
///
/// `[P(u), P(v)]` for Lyndon `u < v` is `P(uv)` when `u` is a letter or the
/// right standard factor of `u` is at least `v`; otherwise, with
/// `P(u) = [P(u1), P(u2)]`, Jacobi gives
/// `[P(u1), [P(u2), P(v)]] - ε [P(u2), [P(u1), P(v)]]`, and both inner
/// brackets are rewritten first. `ε` is the Koszul sign, 1 in the classical
/// case. A square bracketed with anything is `2 [P(w), [P(w), -]]`.
/// Results of basis brackets are memoized.
pub struct Normalizer {
    grading: Grading,
    alphabet: Option<BTreeSet<Letter>>,
    fuel_limit: u64,
    fuel: u64,
    memo: HashMap<(Word, Word), LieElement>,
}

impl Default for Normalizer {
    fn default() -> Self {
        Normalizer::new()
    }
}

impl Normalizer {
    /// A normalizer accepting any generator id.
    pub fn new() -> Self {
        Normalizer {
            grading: Grading::Classical,
            alphabet: None,
            fuel_limit: DEFAULT_FUEL,
            fuel: 0,
            memo: HashMap::new(),
        }
    }

    /// A normalizer that rejects generators outside `alphabet`.
    pub fn with_alphabet(alphabet: &[Letter]) -> Self {
        Normalizer {
            alphabet: Some(alphabet.iter().copied().collect()),
            ..Normalizer::new()
        }
    }

    pub fn with_grading(mut self, grading: Grading) -> Self {
        self.grading = grading;
        self.memo.clear();
        self
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    /// `(-1)^{|a||b|}` for odd generators, 1 otherwise.
    fn koszul(&self, a: usize, b: usize) -> i64 {
        if self.grading == Grading::OddGenerators && a % 2 == 1 && b % 2 == 1 {
            -1
        } else {
            1
        }
    }

    pub fn with_fuel(mut self, fuel: u64) -> Self {
        self.fuel_limit = fuel;
        self
    }

    fn check(&self, l: Letter) -> Result<(), LieError> {
        match &self.alphabet {
            Some(a) if !a.contains(&l) => Err(LieError::UnknownGenerator(l)),
            _ => Ok(()),
        }
    }

    pub fn normalize(&mut self, expr: &BracketMonomial) -> Result<LieElement, LieError> {
        self.fuel = 0;
        self.normalize_inner(expr)
    }

    fn normalize_inner(&mut self, expr: &BracketMonomial) -> Result<LieElement, LieError> {
        match expr {
            BracketMonomial::Gen(l) => {
                self.check(*l)?;
                Ok(LieElement::generator(*l))
            }
            BracketMonomial::Bracket(a, b) => {
                let a = self.normalize_inner(a)?;
                let b = self.normalize_inner(b)?;
                self.bracket_inner(&a, &b)
            }
        }
    }

    /// `[a, b]` in the Lyndon basis.
    pub fn bracket(&mut self, a: &LieElement, b: &LieElement) -> Result<LieElement, LieError> {
        self.fuel = 0;
        for (w, _) in a.terms().chain(b.terms()) {
            for &l in w.letters() {
                self.check(l)?;
            }
        }
        self.bracket_inner(a, b)
    }

    fn bracket_inner(&mut self, a: &LieElement, b: &LieElement) -> Result<LieElement, LieError> {
        let mut out = LieElement::zero();
        for (u, x) in a.terms() {
            for (v, y) in b.terms() {
                let c = x.checked_mul(y).ok_or(LieError::Overflow)?;
                let t = self.bracket_words(u, v)?;
                out.add_scaled(&t, c)?;
            }
        }
        Ok(out)
    }

    /// `[P(u), P(v)]` for Lyndon words `u`, `v`.
    pub fn bracket_basis(&mut self, u: &Word, v: &Word) -> Result<LieElement, LieError> {
        self.fuel = 0;
        self.bracket_words(u, v)
    }

    fn bracket_words(&mut self, u: &Word, v: &Word) -> Result<LieElement, LieError> {
        self.fuel += 1;
        if self.fuel > self.fuel_limit {
            return Err(LieError::FuelExhausted(self.fuel_limit));
        }
        if let Some(x) = square_root(u) {
            if x == *v {
                return Ok(LieElement::zero());
            }
            let key = (u.clone(), v.clone());
            if let Some(r) = self.memo.get(&key) {
                return Ok(r.clone());
            }
            let x = x.clone();
            let mut out = LieElement::zero();
            let inner = self.bracket_words(&x, v)?;
            for (w, c) in inner.terms() {
                let t = self.bracket_words(&x, w)?;
                out.add_scaled(&t, c.checked_mul(2).ok_or(LieError::Overflow)?)?;
            }
            self.memo.insert(key, out.clone());
            return Ok(out);
        }
        if let Some(y) = square_root(v) {
            if y == *u {
                return Ok(LieElement::zero());
            }
            return self.bracket_words(v, u)?.scaled(-1);
        }
        match u.cmp(v) {
            std::cmp::Ordering::Equal => {
                return Ok(if self.koszul(u.len(), u.len()) == -1 {
                    LieElement::basis(u.concat(u))
                } else {
                    LieElement::zero()
                });
            }
            std::cmp::Ordering::Greater => {
                let sign = -self.koszul(u.len(), v.len());
                return self.bracket_words(v, u)?.scaled(sign);
            }
            std::cmp::Ordering::Less => {}
        }
        if u.len() == 1 {
            return Ok(LieElement::basis(u.concat(v)));
        }
        let split = standard_split(u.letters());
        if u.letters()[split..] >= *v.letters() {
            return Ok(LieElement::basis(u.concat(v)));
        }
        let key = (u.clone(), v.clone());
        if let Some(r) = self.memo.get(&key) {
            return Ok(r.clone());
        }
        let u1 = Word(u.letters()[..split].to_vec());
        let u2 = Word(u.letters()[split..].to_vec());
        let mut out = LieElement::zero();
        let inner = self.bracket_words(&u2, v)?;
        for (w, c) in inner.terms() {
            let t = self.bracket_words(&u1, w)?;
            out.add_scaled(&t, c)?;
        }
        let sign = -self.koszul(u1.len(), u2.len());
        let inner = self.bracket_words(&u1, v)?;
        for (w, c) in inner.terms() {
            let t = self.bracket_words(&u2, w)?;
            out.add_scaled(&t, c.checked_mul(sign).ok_or(LieError::Overflow)?)?;
        }
        self.memo.insert(key, out.clone());
        Ok(out)
    }
}

/// Normalizes `expr` into the Lyndon basis, rejecting generators outside
/// `alphabet`.
pub fn normalize(expr: &BracketMonomial, alphabet: &[Letter]) -> Result<LieElement, LieError> {
    Normalizer::with_alphabet(alphabet).normalize(expr)
}
