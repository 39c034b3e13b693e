use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gens::{BraidGen, Convention, GenOrder};
use crate::lie::{
    graded_basis_words, lyndon_words, standard_split, BracketMonomial, Grading, Letter, LieElement, Normalizer, Word,
};
use crate::linalg::{CokerPresentation, QuotientLattice, SparseIntMatrix, SparseVec};

/// Which part of the homotopy Lie ring a presentation covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scope {
    /// Monomials touching every point, with overlapping supports at every
    /// bracket: the normalized part.
    Normalized,
    /// All monomials of the given length.
    Full,
}

/// Everything a presentation depends on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PiKey {
    pub n: usize,
    pub length: usize,
    pub convention: Convention,
    pub order: GenOrder,
    pub scope: Scope,
}

impl PartialOrd for GenOrder {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GenOrder {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let rank = |o: &GenOrder| match o {
            GenOrder::Lex => (0, 0),
            GenOrder::Reverse => (1, 0),
            GenOrder::Scrambled(s) => (2, *s),
        };
        rank(self).cmp(&rank(other))
    }
}

impl PiKey {
    pub fn normalized(n: usize, length: usize) -> Self {
        PiKey {
            n,
            length,
            convention: Convention::default(),
            order: GenOrder::Lex,
            scope: Scope::Normalized,
        }
    }

    pub fn full(n: usize, length: usize) -> Self {
        PiKey {
            scope: Scope::Full,
            ..PiKey::normalized(n, length)
        }
    }

    pub fn with_convention(self, convention: Convention) -> Self {
        PiKey { convention, ..self }
    }

    pub fn with_order(self, order: GenOrder) -> Self {
        PiKey { order, ..self }
    }

    /// Same parameters on a different number of points.
    pub fn on(self, n: usize) -> Self {
        PiKey { n, ..self }
    }

    fn full_mask(&self) -> u32 {
        ((1u32 << (self.n + 1)) - 1) & !1
    }

    /// Stable file-name fragment.
    pub fn slug(&self) -> String {
        let order = match self.order {
            GenOrder::Lex => "lex".to_string(),
            GenOrder::Reverse => "rev".to_string(),
            GenOrder::Scrambled(s) => format!("scr{s}"),
        };
        let scope = match self.scope {
            Scope::Normalized => "norm",
            Scope::Full => "full",
        };
        format!("pi-n{}-l{}-{}-{}-{}", self.n, self.length, self.convention, order, scope)
    }
}

impl fmt::Display for PiKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.slug())
    }
}

thread_local! {
    static CLASSICAL: RefCell<Normalizer> = RefCell::new(Normalizer::new());
    static ODD: RefCell<Normalizer> = RefCell::new(Normalizer::new().with_grading(Grading::OddGenerators));
}

pub(crate) fn with_normalizer<R>(convention: Convention, f: impl FnOnce(&mut Normalizer) -> R) -> R {
    match convention.grading() {
        Grading::Classical => CLASSICAL.with(|n| f(&mut n.borrow_mut())),
        Grading::OddGenerators => ODD.with(|n| f(&mut n.borrow_mut())),
    }
}

fn canonical_sign(e: LieElement) -> LieElement {
    let negative = e.terms().next().is_some_and(|(_, c)| c < 0);
    if negative {
        e.scaled(-1).expect("negating small coefficients")
    } else {
        e
    }
}

fn gen_element(order: GenOrder, convention: Convention, a: u8, b: u8) -> LieElement {
    let g = BraidGen::new(a.min(b), a.max(b));
    LieElement::generator(order.letter(g))
        .scaled(convention.sign(a, b))
        .unwrap()
}

/// The defining relators in length 2: `[b_ij, b_kl]` for disjoint pairs and
/// `[b_ij, b_ik + b_jk]` for all ordered triples of distinct points.
pub fn base_relators(n: usize, convention: Convention, order: GenOrder) -> Vec<LieElement> {
    let gens = BraidGen::all(n);
    let mut out = Vec::new();
    with_normalizer(convention, |nz| {
        for (x, a) in gens.iter().enumerate() {
            for b in &gens[x + 1..] {
                if a.disjoint(b) {
                    let r = nz
                        .bracket(&LieElement::generator(order.letter(*a)), &LieElement::generator(order.letter(*b)))
                        .unwrap();
                    out.push(r);
                }
            }
        }
        let pts = 1..=n as u8;
        for i in pts.clone() {
            for j in pts.clone() {
                for k in pts.clone() {
                    if i == j || j == k || i == k {
                        continue;
                    }
                    let lhs = gen_element(order, convention, i, j);
                    let rhs = gen_element(order, convention, i, k)
                        .checked_add(&gen_element(order, convention, j, k))
                        .unwrap();
                    out.push(nz.bracket(&lhs, &rhs).unwrap());
                }
            }
        }
    });
    finish(out)
}

fn finish(v: Vec<LieElement>) -> Vec<LieElement> {
    let mut v: Vec<LieElement> = v.into_iter().filter(|e| !e.is_zero()).map(canonical_sign).collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn element_mask(order: GenOrder, e: &LieElement) -> u32 {
    e.terms().next().map_or(0, |(w, _)| order.support_mask(w.letters()))
}

/// Spanning set of the length-`length` part of the ideal generated by the
/// base relators, restricted to monomials whose point support is exactly
/// `support` (all supports when `None`). Elements are sign-normalized,
/// sorted and distinct.
pub fn ib_relators(
    n: usize,
    length: usize,
    convention: Convention,
    order: GenOrder,
    support: Option<&BTreeSet<u8>>,
) -> Vec<LieElement> {
    if length < 2 {
        return Vec::new();
    }
    let target = support.map(|s| s.iter().fold(0u32, |m, &p| m | (1 << p)));
    let steps = length - 2;
    let feasible = |mask: u32, remaining: usize| match target {
        None => true,
        Some(t) => mask & !t == 0 && ((t & !mask).count_ones() as usize) <= 2 * remaining,
    };
    let letters: Vec<(Letter, u32)> = order
        .letters(n)
        .into_iter()
        .map(|l| (l, order.support_mask(&[l])))
        .collect();
    let mut level: Vec<LieElement> = base_relators(n, convention, order)
        .into_iter()
        .filter(|r| feasible(element_mask(order, r), steps))
        .collect();
    for step in 0..steps {
        let remaining = steps - step - 1;
        let next: Vec<LieElement> = level
            .par_iter()
            .flat_map_iter(|x| {
                let mx = element_mask(order, x);
                let mut out = Vec::new();
                with_normalizer(convention, |nz| {
                    for &(l, ml) in &letters {
                        if !feasible(mx | ml, remaining) {
                            continue;
                        }
                        let y = nz.bracket(&LieElement::generator(l), x).expect("relator bracket");
                        if !y.is_zero() {
                            out.push(y);
                        }
                    }
                });
                out
            })
            .collect();
        level = finish(next);
        log::debug!("relators n={n} length={length}: level {} has {}", step + 3, level.len());
    }
    if let Some(t) = target {
        level.retain(|r| element_mask(order, r) == t);
    }
    level
}

/// Whether every bracket in the standard bracketing of `w` joins two parts
/// with a common point.
pub fn is_connected(order: GenOrder, w: &[Letter]) -> bool {
    if w.len() <= 1 {
        return true;
    }
    let s = standard_split(w);
    let (u, v) = w.split_at(s);
    order.support_mask(u) & order.support_mask(v) != 0 && is_connected(order, u) && is_connected(order, v)
}

/// A presentation of (the free part of) one homotopy group of a
/// configuration space as a quotient of a lattice of Lyndon monomials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiPresentation {
    pub key: PiKey,
    /// Sorted basis words spanning the ambient lattice (Lyndon words, plus
    /// squares under the graded convention).
    pub ambient: Vec<Word>,
    pub ambient_text: Vec<String>,
    /// Relator vectors over the ambient lattice.
    #[serde(with = "crate::linalg::sparse_columns")]
    pub relators: Vec<SparseVec<BigInt>>,
    pub quotient: QuotientLattice,
}

impl PiPresentation {
    pub fn build(key: PiKey) -> Self {
        let order = key.order;
        let letters = order.letters(key.n);
        let full = key.full_mask();
        let words = match key.convention.grading() {
            Grading::Classical => lyndon_words(&letters, key.length),
            Grading::OddGenerators => graded_basis_words(&letters, key.length),
        };
        let ambient: Vec<Word> = match key.scope {
            Scope::Full => words,
            Scope::Normalized => words
                .into_iter()
                .filter(|w| order.support_mask(w.letters()) == full && is_connected(order, w.letters()))
                .collect(),
        };
        let support: Option<BTreeSet<u8>> = match key.scope {
            Scope::Full => None,
            Scope::Normalized => Some((1..=key.n as u8).collect()),
        };
        let elements = ib_relators(key.n, key.length, key.convention, order, support.as_ref());
        let mut relators: Vec<SparseVec<BigInt>> = elements
            .iter()
            .map(|e| project_onto(&ambient, e))
            .filter(|v| !v.is_empty())
            .map(|mut v| {
                if v[0].1 < BigInt::from(0) {
                    for (_, x) in v.iter_mut() {
                        *x = -&*x;
                    }
                }
                v
            })
            .collect();
        relators.sort();
        relators.dedup();
        log::debug!("{key}: {} ambient monomials, {} relators", ambient.len(), relators.len());
        let quotient = QuotientLattice::build(ambient.len(), &relators);
        let ambient_text = ambient
            .iter()
            .map(|w| BracketMonomial::from_lyndon(w).text_with(&|l| order.render(l)))
            .collect();
        PiPresentation {
            key,
            ambient,
            ambient_text,
            relators,
            quotient,
        }
    }

    pub fn rank(&self) -> usize {
        self.quotient.free_rank
    }

    pub fn presentation(&self) -> CokerPresentation {
        self.quotient.presentation()
    }

    pub fn position(&self, w: &Word) -> Option<usize> {
        self.ambient.binary_search(w).ok()
    }

    /// Coordinates of `e` in the ambient lattice, dropping monomials outside
    /// the scope (other supports, or disconnected ones, which lie in the
    /// relator ideal).
    pub fn project(&self, e: &LieElement) -> SparseVec<BigInt> {
        project_onto(&self.ambient, e)
    }

    /// Relator matrix with one column per relator.
    pub fn relator_matrix(&self) -> SparseIntMatrix {
        SparseIntMatrix::from_sparse_columns(self.ambient.len(), &self.relators)
    }

    /// The Lie element of an ambient vector.
    pub fn element(&self, v: &[(usize, BigInt)]) -> LieElement {
        let mut e = LieElement::zero();
        for (i, c) in v {
            let c: i64 = c.try_into().expect("coefficient fits in i64");
            e.add_term(self.ambient[*i].clone(), c).unwrap();
        }
        e
    }

    pub fn text(&self, e: &LieElement) -> String {
        e.text_with(&|l| self.key.order.render(l))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

fn project_onto(ambient: &[Word], e: &LieElement) -> SparseVec<BigInt> {
    let mut v: SparseVec<BigInt> = e
        .terms()
        .filter_map(|(w, c)| ambient.binary_search(w).ok().map(|i| (i, BigInt::from(c))))
        .collect();
    v.sort_by_key(|e| e.0);
    v
}

/// `npi_free(n, length)`: the normalized presentation.
pub fn npi_free(n: usize, length: usize) -> PiPresentation {
    PiPresentation::build(PiKey::normalized(n, length))
}

/// Somewhere to get presentations from; lets callers share or persist them.
pub trait PresentationSource {
    fn presentation(&mut self, key: PiKey) -> Arc<PiPresentation>;
}

/// Builds each presentation once and keeps it in memory.
#[derive(Default)]
pub struct MemoryPresentations {
    map: HashMap<PiKey, Arc<PiPresentation>>,
}

impl PresentationSource for MemoryPresentations {
    fn presentation(&mut self, key: PiKey) -> Arc<PiPresentation> {
        self.map
            .entry(key)
            .or_insert_with(|| Arc::new(PiPresentation::build(key)))
            .clone()
    }
}
