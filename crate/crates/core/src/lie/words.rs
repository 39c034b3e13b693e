//! Lyndon words: enumeration, standard factorization, standard bracketing.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub type Letter = u32;

/// A word over [`Letter`]s, ordered lexicographically with proper prefixes
/// first (the order `Vec` already implements).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn is_lyndon(&self) -> bool {
        is_lyndon(&self.0)
    }

    /// Letter multiplicities.
    pub fn multidegree(&self) -> BTreeMap<Letter, usize> {
        let mut m = BTreeMap::new();
        for &l in &self.0 {
            *m.entry(l).or_insert(0) += 1;
        }
        m
    }

    /// Standard factorization `w = u v` with `v` the longest proper Lyndon
    /// suffix. Only meaningful for Lyndon words of length at least 2.
    pub fn standard_factorization(&self) -> (Word, Word) {
        let split = standard_split(&self.0);
        (Word(self.0[..split].to_vec()), Word(self.0[split..].to_vec()))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A word is Lyndon when it is strictly smaller than all of its proper
/// rotations.
pub fn is_lyndon(w: &[Letter]) -> bool {
    if w.is_empty() {
        return false;
    }
    // Duval: w is Lyndon iff the factorization loop consumes it in one block.
    let n = w.len();
    let (mut i, mut j) = (0, 1);
    while j < n {
        match w[i].cmp(&w[j]) {
            std::cmp::Ordering::Less => {
                i = 0;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
            }
            std::cmp::Ordering::Greater => return false,
        }
        j += 1;
    }
    i == 0
}

/// `Some(u)` when `w = uu`.
pub fn square_root(w: &Word) -> Option<Word> {
    let n = w.len();
    (n.is_multiple_of(2) && n > 0 && w.0[..n / 2] == w.0[n / 2..]).then(|| Word(w.0[..n / 2].to_vec()))
}

/// Basis keys of the free Lie ring on odd generators in one length: Lyndon
/// words, and squares `ww` of odd-length Lyndon words `w`.
pub fn graded_basis_words(alphabet: &[Letter], length: usize) -> Vec<Word> {
    let mut out = lyndon_words(alphabet, length);
    if length.is_multiple_of(2) && (length / 2) % 2 == 1 {
        out.extend(lyndon_words(alphabet, length / 2).iter().map(|w| w.concat(w)));
    }
    out.sort();
    out
}

pub(crate) fn standard_split(w: &[Letter]) -> usize {
    (1..w.len())
        .find(|&i| is_lyndon(&w[i..]))
        .expect("a word of length >= 2 has a Lyndon suffix")
}

/// All Lyndon words of exactly `length` over `alphabet` (sorted, distinct
/// letters), in lexicographic order.
pub fn lyndon_words(alphabet: &[Letter], length: usize) -> Vec<Word> {
    let q = alphabet.len();
    let mut out = Vec::new();
    if q == 0 || length == 0 {
        return out;
    }
    // Duval's generation over index words 0..q.
    let mut w: Vec<usize> = vec![0];
    loop {
        if w.len() == length {
            out.push(Word(w.iter().map(|&i| alphabet[i]).collect()));
        }
        let m = w.len();
        while w.len() < length {
            let x = w[w.len() - m];
            w.push(x);
        }
        while let Some(&last) = w.last() {
            if last == q - 1 {
                w.pop();
            } else {
                break;
            }
        }
        match w.last_mut() {
            Some(last) => *last += 1,
            None => break,
        }
    }
    out
}

/// Lyndon words with exactly the given letter multiplicities, in
/// lexicographic order.
pub fn lyndon_words_with_multidegree(multidegree: &BTreeMap<Letter, usize>) -> Vec<Word> {
    let letters: Vec<Letter> = multidegree.keys().copied().collect();
    let mut counts: Vec<usize> = multidegree.values().copied().collect();
    let total: usize = counts.iter().sum();
    let mut out = Vec::new();
    if total == 0 {
        return out;
    }
    let mut current = Vec::with_capacity(total);
    // A Lyndon word starts with its smallest letter.
    let first = counts.iter().position(|&c| c > 0).unwrap();
    counts[first] -= 1;
    current.push(letters[first]);
    fill(&letters, &mut counts, &mut current, total, &mut out);
    out
}

fn fill(letters: &[Letter], counts: &mut [usize], current: &mut Vec<Letter>, total: usize, out: &mut Vec<Word>) {
    if current.len() == total {
        if is_lyndon(current) {
            out.push(Word(current.clone()));
        }
        return;
    }
    for k in 0..letters.len() {
        if counts[k] == 0 {
            continue;
        }
        counts[k] -= 1;
        current.push(letters[k]);
        fill(letters, counts, current, total, out);
        current.pop();
        counts[k] += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lyndon_predicate() {
        assert!(is_lyndon(&[1]));
        assert!(is_lyndon(&[1, 2]));
        assert!(!is_lyndon(&[2, 1]));
        assert!(!is_lyndon(&[1, 1]));
        assert!(is_lyndon(&[1, 1, 2]));
        assert!(is_lyndon(&[1, 2, 2]));
        assert!(!is_lyndon(&[1, 2, 1, 2]));
        assert!(is_lyndon(&[1, 1, 2, 1, 2]));
    }

    #[test]
    fn standard_factorizations() {
        let w = Word(vec![1, 1, 2]);
        assert_eq!(w.standard_factorization(), (Word(vec![1]), Word(vec![1, 2])));
        let w = Word(vec![1, 2, 2]);
        assert_eq!(w.standard_factorization(), (Word(vec![1, 2]), Word(vec![2])));
        let w = Word(vec![1, 1, 2, 1, 2]);
        assert_eq!(w.standard_factorization(), (Word(vec![1, 1, 2]), Word(vec![1, 2])));
    }

    #[test]
    fn enumeration_is_sorted_and_lyndon() {
        let ws = lyndon_words(&[1, 2, 3], 4);
        assert!(ws.windows(2).all(|p| p[0] < p[1]));
        assert!(ws.iter().all(|w| w.is_lyndon() && w.len() == 4));
        assert_eq!(ws.len(), 18);
    }

    #[test]
    fn multidegree_filter_agrees() {
        let md: BTreeMap<Letter, usize> = [(1, 2), (2, 1), (5, 2)].into_iter().collect();
        let direct = lyndon_words_with_multidegree(&md);
        let filtered: Vec<Word> = lyndon_words(&[1, 2, 5], 5)
            .into_iter()
            .filter(|w| w.multidegree() == md)
            .collect();
        assert_eq!(direct, filtered);
    }
}
