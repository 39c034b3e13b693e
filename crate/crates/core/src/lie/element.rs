use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::words::{Letter, Word};
use super::LieError;

/// A bracket tree over generator ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BracketMonomial {
    Gen(Letter),
    Bracket(Box<BracketMonomial>, Box<BracketMonomial>),
}

impl BracketMonomial {
    pub fn gen(l: Letter) -> Self {
        BracketMonomial::Gen(l)
    }

    pub fn bracket(a: BracketMonomial, b: BracketMonomial) -> Self {
        BracketMonomial::Bracket(Box::new(a), Box::new(b))
    }

    pub fn length(&self) -> usize {
        match self {
            BracketMonomial::Gen(_) => 1,
            BracketMonomial::Bracket(a, b) => a.length() + b.length(),
        }
    }

    /// Leaves left to right.
    pub fn leaves(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<Letter>) {
        match self {
            BracketMonomial::Gen(l) => out.push(*l),
            BracketMonomial::Bracket(a, b) => {
                a.collect_leaves(out);
                b.collect_leaves(out);
            }
        }
    }

    pub fn multidegree(&self) -> BTreeMap<Letter, usize> {
        Word(self.leaves()).multidegree()
    }

    /// Standard bracketing of a Lyndon word: `P(a) = a`,
    /// `P(w) = [P(u), P(v)]` for the standard factorization `w = uv`. A
    /// square `uu` of a Lyndon word gives `[P(u), P(u)]`.
    pub fn from_lyndon(w: &Word) -> Self {
        if w.len() == 1 {
            return BracketMonomial::Gen(w.0[0]);
        }
        let (u, v) = w.standard_factorization();
        BracketMonomial::bracket(Self::from_lyndon(&u), Self::from_lyndon(&v))
    }

    /// Canonical text with a custom leaf renderer.
    pub fn text_with(&self, leaf: &dyn Fn(Letter) -> String) -> String {
        match self {
            BracketMonomial::Gen(l) => leaf(*l),
            BracketMonomial::Bracket(a, b) => format!("[{},{}]", a.text_with(leaf), b.text_with(leaf)),
        }
    }

    /// Parses the canonical text form, e.g. `[[1,2],3]`.
    pub fn parse(s: &str) -> Result<Self, LieError> {
        let bytes: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let m = parse_at(&bytes, &mut pos)?;
        if pos != bytes.len() {
            return Err(LieError::Parse(s.to_string()));
        }
        Ok(m)
    }
}

fn parse_at(s: &[char], pos: &mut usize) -> Result<BracketMonomial, LieError> {
    let err = || LieError::Parse(s.iter().collect());
    if s.get(*pos) == Some(&'[') {
        *pos += 1;
        let a = parse_at(s, pos)?;
        if s.get(*pos) != Some(&',') {
            return Err(err());
        }
        *pos += 1;
        let b = parse_at(s, pos)?;
        if s.get(*pos) != Some(&']') {
            return Err(err());
        }
        *pos += 1;
        Ok(BracketMonomial::bracket(a, b))
    } else {
        let start = *pos;
        while s.get(*pos).is_some_and(char::is_ascii_digit) {
            *pos += 1;
        }
        let digits: String = s[start..*pos].iter().collect();
        digits.parse().map(BracketMonomial::Gen).map_err(|_| err())
    }
}

impl fmt::Display for BracketMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text_with(&|l| l.to_string()))
    }
}

/// An integer combination of Lyndon-basis elements, keyed by their Lyndon
/// words. Coefficients are nonzero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LieElement {
    terms: BTreeMap<Word, i64>,
}

impl LieElement {
    pub fn zero() -> Self {
        LieElement::default()
    }

    /// The basis element keyed by `w`: `P(w)` for a Lyndon word, and
    /// `[P(u), P(u)]` for a square `w = uu`.
    pub fn basis(w: Word) -> Self {
        debug_assert!(w.is_lyndon() || super::words::square_root(&w).is_some());
        LieElement {
            terms: BTreeMap::from([(w, 1)]),
        }
    }

    pub fn generator(l: Letter) -> Self {
        Self::basis(Word::letter(l))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, i64)> {
        self.terms.iter().map(|(w, c)| (w, *c))
    }

    pub fn coefficient(&self, w: &Word) -> i64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    /// `self += c * w`.
    pub fn add_term(&mut self, w: Word, c: i64) -> Result<(), LieError> {
        if c == 0 {
            return Ok(());
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get().checked_add(c).ok_or(LieError::Overflow)?;
                if v == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
        Ok(())
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &LieElement, c: i64) -> Result<(), LieError> {
        for (w, x) in &other.terms {
            let y = x.checked_mul(c).ok_or(LieError::Overflow)?;
            self.add_term(w.clone(), y)?;
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &LieElement) -> Result<LieElement, LieError> {
        let mut out = self.clone();
        out.add_scaled(other, 1)?;
        Ok(out)
    }

    pub fn checked_sub(&self, other: &LieElement) -> Result<LieElement, LieError> {
        let mut out = self.clone();
        out.add_scaled(other, -1)?;
        Ok(out)
    }

    pub fn scaled(&self, c: i64) -> Result<LieElement, LieError> {
        let mut out = LieElement::zero();
        out.add_scaled(self, c)?;
        Ok(out)
    }

    /// The common multidegree of all terms, if there is one.
    pub fn multidegree(&self) -> Option<BTreeMap<Letter, usize>> {
        let mut it = self.terms.keys().map(Word::multidegree);
        let first = it.next()?;
        it.all(|m| m == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.multidegree().is_some()
    }

    /// Keeps only the terms whose word satisfies `keep`.
    pub fn retain(&mut self, mut keep: impl FnMut(&Word) -> bool) {
        self.terms.retain(|w, _| keep(w));
    }

    /// Text form like `2*[1,2] - [[1,2],3]`, with a custom leaf renderer.
    pub fn text_with(&self, leaf: &dyn Fn(Letter) -> String) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let m = BracketMonomial::from_lyndon(w).text_with(leaf);
            let (sign, a) = if *c < 0 { ("-", c.unsigned_abs()) } else { ("+", *c as u64) };
            if i == 0 {
                if sign == "-" {
                    s.push('-');
                }
            } else {
                s.push_str(&format!(" {sign} "));
            }
            if a != 1 {
                s.push_str(&format!("{a}*"));
            }
            s.push_str(&m);
        }
        s
    }
}

impl fmt::Display for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text_with(&|l| l.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_roundtrip() {
        let m = BracketMonomial::parse("[[1,2],3]").unwrap();
        assert_eq!(m.to_string(), "[[1,2],3]");
        assert_eq!(m.length(), 3);
        assert!(BracketMonomial::parse("[1,2").is_err());
        assert!(BracketMonomial::parse("[1,2]]").is_err());
    }

    #[test]
    fn standard_bracketing() {
        let w = Word(vec![1, 1, 2]);
        assert_eq!(BracketMonomial::from_lyndon(&w).to_string(), "[1,[1,2]]");
        let w = Word(vec![1, 2, 2]);
        assert_eq!(BracketMonomial::from_lyndon(&w).to_string(), "[[1,2],2]");
    }

    #[test]
    fn cancellation_removes_terms() {
        let mut e = LieElement::generator(1);
        e.add_term(Word::letter(1), -1).unwrap();
        assert!(e.is_zero());
        assert_eq!(e.to_string(), "0");
    }

    #[test]
    fn overflow_is_reported() {
        let mut e = LieElement::zero();
        e.add_term(Word::letter(1), i64::MAX).unwrap();
        assert_eq!(e.add_term(Word::letter(1), 1), Err(LieError::Overflow));
    }
}
