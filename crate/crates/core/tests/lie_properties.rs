//! Lie normal forms checked against expansion into the tensor algebra.

use std::collections::{BTreeMap, HashMap};

use gw_tower::lie::{
    graded_basis_words, hall_words, lyndon_count, lyndon_words, multilinear_rank, BracketMonomial, Grading, LieElement,
    Normalizer, Word,
};
use gw_tower::linalg::{smith_normal_form, IntMatrix};
use num_bigint::BigInt;
use proptest::prelude::*;

type Tensor = HashMap<Vec<u32>, i64>;

fn mul(a: &Tensor, b: &Tensor) -> Tensor {
    let mut out = Tensor::new();
    for (u, x) in a {
        for (v, y) in b {
            let mut w = u.clone();
            w.extend(v);
            *out.entry(w).or_default() += x * y;
        }
    }
    out
}

fn axpy(acc: &mut Tensor, c: i64, t: &Tensor) {
    for (w, x) in t {
        *acc.entry(w.clone()).or_default() += c * x;
    }
    acc.retain(|_, x| *x != 0);
}

/// `ab - (-1)^{|a||b|} ba`, degrees being lengths.
fn commutator(g: Grading, a: &Tensor, la: usize, b: &Tensor, lb: usize) -> Tensor {
    let sign = if g == Grading::OddGenerators && la % 2 == 1 && lb % 2 == 1 { -1 } else { 1 };
    let mut out = mul(a, b);
    axpy(&mut out, -sign, &mul(b, a));
    out
}

fn expand_monomial(g: Grading, m: &BracketMonomial) -> Tensor {
    match m {
        BracketMonomial::Gen(l) => Tensor::from([(vec![*l], 1)]),
        BracketMonomial::Bracket(a, b) => {
            commutator(g, &expand_monomial(g, a), a.length(), &expand_monomial(g, b), b.length())
        }
    }
}

fn expand(g: Grading, e: &LieElement) -> Tensor {
    let mut out = Tensor::new();
    for (w, c) in e.terms() {
        axpy(&mut out, c, &expand_monomial(g, &BracketMonomial::from_lyndon(w)));
    }
    out
}

fn monomial(depth: u32) -> impl Strategy<Value = BracketMonomial> {
    let leaf = (1u32..=3).prop_map(BracketMonomial::Gen);
    leaf.prop_recursive(depth, 8, 2, |inner| {
        (inner.clone(), inner).prop_map(|(a, b)| BracketMonomial::bracket(a, b))
    })
}

fn element() -> impl Strategy<Value = LieElement> {
    prop::collection::vec((monomial(3), -3i64..=3), 1..4).prop_map(|terms| {
        let mut nz = Normalizer::new().with_grading(Grading::OddGenerators);
        let mut e = LieElement::zero();
        for (m, c) in terms {
            e.add_scaled(&nz.normalize(&m).unwrap(), c).unwrap();
        }
        e
    })
}

fn gradings() -> [Grading; 2] {
    [Grading::Classical, Grading::OddGenerators]
}

/// `(1/n) Σ_{d | n} μ(d) (-1)^{n + n/d} q^{n/d}`: dimension of the length-`n`
/// part of the free Lie superalgebra on `q` odd generators.
fn super_dimension(q: i64, n: u32) -> i64 {
    let mu = |mut d: u32| {
        let mut r = 1;
        let mut p = 2;
        while p * p <= d {
            if d.is_multiple_of(p) {
                d /= p;
                if d.is_multiple_of(p) {
                    return 0;
                }
                r = -r;
            }
            p += 1;
        }
        if d > 1 {
            -r
        } else {
            r
        }
    };
    let mut s = 0;
    for d in (1..=n).filter(|d| n.is_multiple_of(*d)) {
        let sign = if (n + n / d).is_multiple_of(2) { 1 } else { -1 };
        s += mu(d) * sign * q.pow(n / d);
    }
    s / n as i64
}

#[test]
fn graded_basis_counts() {
    for q in 1..=3u32 {
        let alphabet: Vec<u32> = (1..=q).collect();
        for n in 1..=7u32 {
            let count = graded_basis_words(&alphabet, n as usize).len() as i64;
            assert_eq!(count, super_dimension(q as i64, n), "q={q} n={n}");
        }
    }
}

#[test]
fn basis_expansions_are_independent() {
    for g in gradings() {
        for n in 1..=6usize {
            let words = match g {
                Grading::Classical => lyndon_words(&[1, 2, 3], n),
                Grading::OddGenerators => graded_basis_words(&[1, 2, 3], n),
            };
            let mut index: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
            let rows: Vec<Tensor> = words
                .iter()
                .map(|w| expand_monomial(g, &BracketMonomial::from_lyndon(w)))
                .collect();
            for t in &rows {
                for k in t.keys() {
                    let next = index.len();
                    index.entry(k.clone()).or_insert(next);
                }
            }
            let dense: Vec<Vec<BigInt>> = rows
                .iter()
                .map(|t| {
                    let mut r = vec![BigInt::from(0); index.len()];
                    for (k, x) in t {
                        r[index[k]] = BigInt::from(*x);
                    }
                    r
                })
                .collect();
            let rank = smith_normal_form(&IntMatrix::from_rows(&dense)).rank();
            assert_eq!(rank, words.len(), "{g:?} length {n}");
        }
    }
}

#[test]
fn basis_words_normalize_to_themselves() {
    for g in gradings() {
        let mut nz = Normalizer::new().with_grading(g);
        for n in 1..=6 {
            let words = match g {
                Grading::Classical => lyndon_words(&[1, 2, 3], n),
                Grading::OddGenerators => graded_basis_words(&[1, 2, 3], n),
            };
            for w in words {
                let e = nz.normalize(&BracketMonomial::from_lyndon(&w)).unwrap();
                assert_eq!(e, LieElement::basis(w.clone()), "{g:?} {w:?}");
            }
        }
    }
}

#[test]
fn graded_squares() {
    let mut nz = Normalizer::new().with_grading(Grading::OddGenerators);
    let x = BracketMonomial::parse("[1,1]").unwrap();
    assert_eq!(nz.normalize(&x).unwrap(), LieElement::basis(Word(vec![1, 1])));
    // [x, [x, x]] = 0 and [[1,2],[1,2]] = 0 for even elements
    assert!(nz.normalize(&BracketMonomial::parse("[1,[1,1]]").unwrap()).unwrap().is_zero());
    assert!(nz.normalize(&BracketMonomial::parse("[[1,2],[1,2]]").unwrap()).unwrap().is_zero());
    // odd generators commute up to sign +1
    let a = nz.normalize(&BracketMonomial::parse("[2,1]").unwrap()).unwrap();
    let b = nz.normalize(&BracketMonomial::parse("[1,2]").unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn hall_enumeration_matches_counts() {
    for k in 2..=7usize {
        let fact: usize = (1..k).product();
        assert_eq!(multilinear_rank(k), fact);
    }
    for q in 1..=3u32 {
        let alphabet: Vec<u32> = (1..=q).collect();
        for n in 1..=7 {
            assert_eq!(hall_words(&alphabet, n).len() as u64, lyndon_count(q as u64, n as u32));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn normal_form_expands_like_the_bracket(m in monomial(4)) {
        for g in gradings() {
            let mut nz = Normalizer::new().with_grading(g);
            let e = nz.normalize(&m).unwrap();
            prop_assert_eq!(expand(g, &e), expand_monomial(g, &m));
        }
    }

    #[test]
    fn normalization_is_idempotent(m in monomial(4)) {
        for g in gradings() {
            let mut nz = Normalizer::new().with_grading(g);
            let e = nz.normalize(&m).unwrap();
            let mut again = LieElement::zero();
            for (w, c) in e.terms() {
                again.add_scaled(&nz.normalize(&BracketMonomial::from_lyndon(w)).unwrap(), c).unwrap();
            }
            prop_assert_eq!(again, e);
        }
    }

    #[test]
    fn bracket_is_bilinear(a in element(), b in element(), c in element()) {
        let mut nz = Normalizer::new().with_grading(Grading::OddGenerators);
        let lhs = nz.bracket(&a.checked_add(&b).unwrap(), &c).unwrap();
        let rhs = nz.bracket(&a, &c).unwrap().checked_add(&nz.bracket(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn graded_jacobi(x in monomial(2), y in monomial(2), z in monomial(2)) {
        let mut nz = Normalizer::new().with_grading(Grading::OddGenerators);
        let (a, b, c) = (nz.normalize(&x).unwrap(), nz.normalize(&y).unwrap(), nz.normalize(&z).unwrap());
        let (la, lb) = (x.length(), y.length());
        let eps = if la % 2 == 1 && lb % 2 == 1 { -1 } else { 1 };
        // [a, [b, c]] = [[a, b], c] + ε [b, [a, c]]
        let bc = nz.bracket(&b, &c).unwrap();
        let lhs = nz.bracket(&a, &bc).unwrap();
        let ab = nz.bracket(&a, &b).unwrap();
        let ac = nz.bracket(&a, &c).unwrap();
        let mut rhs = nz.bracket(&ab, &c).unwrap();
        rhs.add_scaled(&nz.bracket(&b, &ac).unwrap(), eps).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
