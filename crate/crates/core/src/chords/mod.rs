//! Chord diagrams on an interval and the group of diagrams modulo the
//! four-term relation and separated diagrams.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::linalg::{cokernel, cokernel_sparse, CokerPresentation, SparseIntMatrix, SparseVec};

/// A perfect matching of the positions `1..=2m`, stored as chords `(a, b)`
/// with `a < b`, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChordDiagram {
    chords: Vec<(u8, u8)>,
}

impl ChordDiagram {
    /// Builds a diagram from chords in any order; `None` unless they form a
    /// perfect matching of `1..=2m`.
    pub fn new(chords: &[(u8, u8)]) -> Option<Self> {
        let m = chords.len();
        let mut seen = vec![false; 2 * m + 1];
        let mut v = Vec::with_capacity(m);
        for &(a, b) in chords {
            let (a, b) = (a.min(b), a.max(b));
            if a == 0 || a == b || b as usize > 2 * m || seen[a as usize] || seen[b as usize] {
                return None;
            }
            seen[a as usize] = true;
            seen[b as usize] = true;
            v.push((a, b));
        }
        v.sort_unstable();
        Some(ChordDiagram { chords: v })
    }

    /// From a partner array: `partner[p - 1]` is the other end of the chord
    /// at position `p`.
    fn from_partners(partner: &[u8]) -> Self {
        let chords = partner
            .iter()
            .enumerate()
            .filter_map(|(i, &q)| {
                let p = i as u8 + 1;
                (p < q).then_some((p, q))
            })
            .collect();
        ChordDiagram { chords }
    }

    pub fn m(&self) -> usize {
        self.chords.len()
    }

    pub fn chords(&self) -> &[(u8, u8)] {
        &self.chords
    }

    /// Whether some gap between consecutive positions is crossed by no chord.
    pub fn is_separated(&self) -> bool {
        let n = 2 * self.m() as u8;
        (1..n).any(|k| self.chords.iter().all(|&(a, b)| !(a <= k && k < b)))
    }

    /// Image under `p ↦ 2m + 1 - p`.
    pub fn reflect(&self) -> Self {
        let n = 2 * self.m() as u8 + 1;
        ChordDiagram::new(&self.chords.iter().map(|&(a, b)| (n - b, n - a)).collect::<Vec<_>>()).unwrap()
    }
}

impl fmt::Display for ChordDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.chords.iter().map(|(a, b)| format!("({a},{b})")).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl FromStr for ChordDiagram {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = cleaned
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| format!("not a chord list: {s:?}"))?;
        let mut chords = Vec::new();
        if !inner.is_empty() {
            for part in inner.split("),") {
                let part = part.trim_start_matches('(').trim_end_matches(')');
                let (a, b) = part.split_once(',').ok_or_else(|| format!("bad chord {part:?}"))?;
                let a: u8 = a.parse().map_err(|_| format!("bad position {a:?}"))?;
                let b: u8 = b.parse().map_err(|_| format!("bad position {b:?}"))?;
                chords.push((a, b));
            }
        }
        ChordDiagram::new(&chords).ok_or_else(|| format!("not a perfect matching: {s:?}"))
    }
}

/// All diagrams with `m` chords, in canonical (sorted chord list) order.
pub fn enumerate(m: usize) -> Vec<ChordDiagram> {
    let mut out = Vec::new();
    let mut partner = vec![0u8; 2 * m];
    fill(&mut partner, &mut out);
    out
}

fn fill(partner: &mut [u8], out: &mut Vec<ChordDiagram>) {
    let Some(first) = partner.iter().position(|&p| p == 0) else {
        out.push(ChordDiagram::from_partners(partner));
        return;
    };
    for second in first + 1..partner.len() {
        if partner[second] != 0 {
            continue;
        }
        partner[first] = second as u8 + 1;
        partner[second] = first as u8 + 1;
        fill(partner, out);
        partner[first] = 0;
        partner[second] = 0;
    }
}

/// Integer combination of diagrams, by index into [`enumerate`]`(m)`,
/// sorted by index, no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DiagramRelator {
    pub terms: Vec<(usize, i64)>,
}

impl DiagramRelator {
    fn from_terms(mut raw: Vec<(usize, i64)>) -> Option<Self> {
        raw.sort_unstable();
        let mut terms: Vec<(usize, i64)> = Vec::with_capacity(raw.len());
        for (i, c) in raw {
            match terms.last_mut() {
                Some(last) if last.0 == i => last.1 += c,
                _ => terms.push((i, c)),
            }
        }
        terms.retain(|t| t.1 != 0);
        if terms.is_empty() {
            return None;
        }
        if terms[0].1 < 0 {
            for t in terms.iter_mut() {
                t.1 = -t.1;
            }
        }
        Some(DiagramRelator { terms })
    }

    fn to_sparse(&self) -> SparseVec<BigInt> {
        self.terms.iter().map(|&(i, c)| (i, BigInt::from(c))).collect()
    }
}

/// Coefficients of the four diagrams in a 4T relator, in the order: new
/// endpoint just left of `p`, just right of `p`, just left of `q`, just
/// right of `q`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FourTSigns {
    /// `+ - + -`: sliding the endpoint across `p` and across `q` contribute
    /// with the same sign.
    #[default]
    Standard,
    /// `+ - - +`; experimental.
    Paired,
}

impl FourTSigns {
    pub fn coefficients(&self) -> [i64; 4] {
        match self {
            FourTSigns::Standard => [1, -1, 1, -1],
            FourTSigns::Paired => [1, -1, -1, 1],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FourTSigns::Standard => "standard",
            FourTSigns::Paired => "paired",
        }
    }
}

impl FromStr for FourTSigns {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "standard" => Ok(FourTSigns::Standard),
            "paired" => Ok(FourTSigns::Paired),
            _ => Err(format!("unknown 4T sign pattern {s:?} (expected standard or paired)")),
        }
    }
}

fn index_of(all: &[ChordDiagram], d: &ChordDiagram) -> usize {
    all.binary_search(d).expect("diagram in canonical list")
}

/// One relator per separated diagram.
pub fn sep_relators(m: usize) -> Vec<DiagramRelator> {
    enumerate(m)
        .iter()
        .enumerate()
        .filter(|(_, d)| d.is_separated())
        .map(|(i, _)| DiagramRelator { terms: vec![(i, 1)] })
        .collect()
}

/// Inserts a new chord into `template`: its near end goes into gap `near`
/// right next to position `anchor`, its far end into gap `far`. Gap `g` lies
/// between template positions `g` and `g + 1`.
fn insert_chord(template: &ChordDiagram, anchor: u8, near: u8, far: u8) -> ChordDiagram {
    let n = 2 * template.m() as u8;
    let mut partner = vec![0u8; n as usize];
    for &(a, b) in template.chords() {
        partner[a as usize - 1] = b;
        partner[b as usize - 1] = a;
    }
    // Sequence of old positions (1..=n) and the two new ends (0 = near, 255 = far).
    const NEAR: u8 = 0;
    const FAR: u8 = 255;
    let mut seq: Vec<u8> = Vec::with_capacity(n as usize + 2);
    for g in 0..=n {
        if g > 0 {
            seq.push(g);
        }
        let has_near = g == near;
        let has_far = g == far;
        match (has_near, has_far) {
            (true, true) => {
                // the near end sits next to the anchor
                if anchor == g {
                    seq.extend([NEAR, FAR]);
                } else {
                    seq.extend([FAR, NEAR]);
                }
            }
            (true, false) => seq.push(NEAR),
            (false, true) => seq.push(FAR),
            (false, false) => {}
        }
    }
    let mut new_pos = vec![0u8; 256];
    for (k, &t) in seq.iter().enumerate() {
        new_pos[t as usize] = k as u8 + 1;
    }
    let mut chords: Vec<(u8, u8)> = template
        .chords()
        .iter()
        .map(|&(a, b)| (new_pos[a as usize], new_pos[b as usize]))
        .collect();
    chords.push((new_pos[NEAR as usize], new_pos[FAR as usize]));
    ChordDiagram::new(&chords).unwrap()
}

/// 4T relators: for every diagram with `m - 1` chords, each chord `(p, q)`
/// in it and each gap for the far end of a new chord, the signed sum of the
/// four diagrams with the near end placed next to `p` or `q`.
pub fn four_t_relators(m: usize, signs: FourTSigns) -> Vec<DiagramRelator> {
    if m < 2 {
        return Vec::new();
    }
    let all = enumerate(m);
    let templates = enumerate(m - 1);
    let coeff = signs.coefficients();
    let n = 2 * (m as u8 - 1);
    let mut out: Vec<DiagramRelator> = templates
        .par_iter()
        .flat_map_iter(|t| {
            let mut rels = Vec::new();
            for &(p, q) in t.chords() {
                for far in 0..=n {
                    let places = [(p, p - 1), (p, p), (q, q - 1), (q, q)];
                    let terms = places
                        .iter()
                        .zip(coeff)
                        .map(|(&(anchor, near), c)| (index_of(&all, &insert_chord(t, anchor, near, far)), c))
                        .collect();
                    rels.extend(DiagramRelator::from_terms(terms));
                }
            }
            rels
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Options for [`a_i_presentation_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChordOptions {
    pub signs: FourTSigns,
    /// Whether to kill separated diagrams.
    pub sep: bool,
}

impl Default for ChordOptions {
    fn default() -> Self {
        ChordOptions {
            signs: FourTSigns::Standard,
            sep: true,
        }
    }
}

/// Diagrams with `m` chords modulo 4T and separated diagrams.
pub fn a_i_presentation(m: usize) -> CokerPresentation {
    a_i_presentation_with(m, ChordOptions::default())
}

pub fn a_i_presentation_with(m: usize, opts: ChordOptions) -> CokerPresentation {
    let n = enumerate(m).len();
    let rels = relator_vectors(m, opts);
    cokernel_sparse(n, &rels)
}

fn relator_vectors(m: usize, opts: ChordOptions) -> Vec<SparseVec<BigInt>> {
    let mut rels: Vec<SparseVec<BigInt>> = Vec::new();
    if opts.sep {
        rels.extend(sep_relators(m).iter().map(DiagramRelator::to_sparse));
    }
    rels.extend(four_t_relators(m, opts.signs).iter().map(DiagramRelator::to_sparse));
    rels
}

/// Report for one chord count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChordReport {
    pub m: usize,
    pub diagrams: usize,
    pub sep_count: usize,
    pub fourt_count: usize,
    pub free_rank: usize,
    #[serde(with = "crate::linalg::bigint_strings")]
    pub torsion: Vec<BigInt>,
    pub signs: FourTSigns,
}

pub fn chord_report(m: usize, signs: FourTSigns) -> ChordReport {
    chord_report_with(m, signs, true)
}

/// [`chord_report`] with a choice of elimination: sparse, or a dense Smith
/// form of the whole relator matrix.
pub fn chord_report_with(m: usize, signs: FourTSigns, sparse: bool) -> ChordReport {
    let diagrams = enumerate(m).len();
    let sep = sep_relators(m);
    let four = four_t_relators(m, signs);
    let rels: Vec<SparseVec<BigInt>> = sep
        .iter()
        .chain(four.iter())
        .map(DiagramRelator::to_sparse)
        .collect();
    let p = if sparse {
        cokernel_sparse(diagrams, &rels)
    } else {
        cokernel(&SparseIntMatrix::from_sparse_columns(diagrams, &rels).to_dense())
    };
    ChordReport {
        m,
        diagrams,
        sep_count: sep.len(),
        fourt_count: four.len(),
        free_rank: p.free_rank,
        torsion: p.torsion,
        signs,
    }
}

/// Whether reflecting the interval maps the relator span into itself.
pub fn reflection_preserves_relations(m: usize, opts: ChordOptions) -> bool {
    let all = enumerate(m);
    let rels = relator_vectors(m, opts);
    let perm: Vec<usize> = all.iter().map(|d| index_of(&all, &d.reflect())).collect();
    let q = crate::linalg::QuotientLattice::build(all.len(), &rels);
    rels.iter().all(|r| {
        let mut img: SparseVec<BigInt> = r.iter().map(|(i, c)| (perm[*i], c.clone())).collect();
        img.sort_by_key(|e| e.0);
        q.is_zero_class(&img)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> ChordDiagram {
        s.parse().unwrap()
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate(1), vec![d("[(1,2)]")]);
        let two: Vec<String> = enumerate(2).iter().map(ToString::to_string).collect();
        assert_eq!(two, vec!["[(1,2),(3,4)]", "[(1,3),(2,4)]", "[(1,4),(2,3)]"]);
        assert_eq!(enumerate(5).len(), 945);
    }

    #[test]
    fn separation() {
        assert!(d("[(1,2),(3,4)]").is_separated());
        assert!(!d("[(1,3),(2,4)]").is_separated());
        assert!(!d("[(1,4),(2,3)]").is_separated());
        assert!(!d("[(1,2)]").is_separated());
    }

    #[test]
    fn parse_rejects_non_matchings() {
        assert!("[(1,2),(2,3)]".parse::<ChordDiagram>().is_err());
        assert!("[(1,5),(2,3)]".parse::<ChordDiagram>().is_err());
        assert!("(1,2)".parse::<ChordDiagram>().is_err());
    }

    #[test]
    fn insertion_keeps_near_end_adjacent() {
        let t = d("[(1,2)]");
        // near end left of p = 1, far end in the same gap: far, near, p
        assert_eq!(insert_chord(&t, 1, 0, 0), d("[(1,2),(3,4)]"));
        // near end right of q = 2, far end before everything
        assert_eq!(insert_chord(&t, 2, 2, 0), d("[(1,4),(2,3)]"));
    }

    #[test]
    fn two_chords() {
        let four_only = a_i_presentation_with(
            2,
            ChordOptions {
                sep: false,
                ..Default::default()
            },
        );
        assert_eq!(four_only.free_rank, 2);
        assert!(four_only.torsion.is_empty());
        assert!(a_i_presentation(2).isomorphic(&CokerPresentation::free(1)));
        assert!(four_t_relators(1, FourTSigns::Standard).is_empty());
        assert!(a_i_presentation(1).isomorphic(&CokerPresentation::free(1)));
    }

    #[test]
    fn reflection() {
        assert_eq!(d("[(1,2),(3,5),(4,6)]").reflect(), d("[(1,3),(2,4),(5,6)]"));
        for m in 1..=4 {
            assert!(reflection_preserves_relations(m, ChordOptions::default()));
        }
    }
}
