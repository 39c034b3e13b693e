use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::coeff::Coeff;
use super::matrix::IntMatrix;
use super::smith::{smith_normal_form_with, SnfOptions};
use super::sparse::{eliminate, Elimination, SparseVec};
use crate::counters;

/// `Z^ambient_rank / (relator span) ≅ Z^free_rank ⊕ ⊕ Z/torsion[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CokerPresentation {
    pub ambient_rank: usize,
    pub free_rank: usize,
    #[serde(with = "bigint_strings")]
    pub torsion: Vec<BigInt>,
}

impl CokerPresentation {
    pub fn free(rank: usize) -> Self {
        CokerPresentation {
            ambient_rank: rank,
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    /// Same abstract group (free rank and torsion list).
    pub fn isomorphic(&self, other: &CokerPresentation) -> bool {
        self.free_rank == other.free_rank && self.torsion == other.torsion
    }

    fn from_divisors(ambient_rank: usize, divisors: &[BigInt]) -> Self {
        CokerPresentation {
            ambient_rank,
            free_rank: ambient_rank - divisors.len(),
            torsion: divisors.iter().filter(|d| !d.is_one()).cloned().collect(),
        }
    }
}

impl std::fmt::Display for CokerPresentation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 {
                "Z".to_string()
            } else {
                format!("Z^{}", self.free_rank)
            });
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

pub(crate) mod bigint_strings {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(ToString::to_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        raw.iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Cokernel of the map whose columns are relator vectors in `Z^rows`.
pub fn cokernel(relators: &IntMatrix) -> CokerPresentation {
    let sf = smith_normal_form_with(relators, SnfOptions::default()).expect("uncapped");
    CokerPresentation::from_divisors(relators.rows(), &sf.divisors)
}

/// Cokernel of sparse relator columns; same answer as [`cokernel`] on the
/// densified matrix.
pub fn cokernel_sparse(ambient_rank: usize, relators: &[SparseVec<BigInt>]) -> CokerPresentation {
    QuotientLattice::build(ambient_rank, relators).presentation()
}

/// A quotient `Z^n / R` together with the projection onto its free part and
/// a section of that projection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientLattice {
    pub ambient_rank: usize,
    pub free_rank: usize,
    #[serde(with = "bigint_strings")]
    pub torsion: Vec<BigInt>,
    /// Image of each ambient basis vector in `Z^free_rank`.
    #[serde(with = "sparse_columns")]
    pub images: Vec<SparseVec<BigInt>>,
    /// Lift of each free basis vector to ambient coordinates.
    #[serde(with = "sparse_columns")]
    pub section: Vec<SparseVec<BigInt>>,
    /// Torsion coordinates of each ambient basis vector, reduced modulo the
    /// corresponding torsion coefficient.
    #[serde(with = "sparse_columns")]
    pub torsion_images: Vec<SparseVec<BigInt>>,
}

impl QuotientLattice {
    pub fn build(ambient_rank: usize, relators: &[SparseVec<BigInt>]) -> Self {
        counters::record_elimination();
        let small: Option<Vec<SparseVec<i64>>> = relators
            .iter()
            .map(|r| r.iter().map(|(c, v)| i64::from_bigint(v).map(|v| (*c, v))).collect())
            .collect();
        if let Some(rows) = small {
            if let Some(q) = Self::build_with::<i64>(ambient_rank, rows) {
                return q;
            }
            log::debug!("quotient lattice: i64 overflow, replaying with bigints");
        }
        Self::build_with::<BigInt>(ambient_rank, relators.to_vec()).expect("bigint cannot overflow")
    }

    fn build_with<T: Coeff>(ambient_rank: usize, rows: Vec<SparseVec<T>>) -> Option<Self> {
        let el: Elimination<T> = eliminate(ambient_rank, rows).ok()?;
        let survivors = el.survivors();
        let nf = el.normal_forms().ok()?;
        log::debug!(
            "quotient lattice: {} ambient, {} pivots, {} survivors, {} residual rows",
            ambient_rank,
            el.pivots.len(),
            survivors.len(),
            el.residual.len()
        );
        // Residual relators live on the survivors; diagonalize them densely.
        let ns = survivors.len();
        let mut slot = vec![usize::MAX; ambient_rank];
        for (k, &c) in survivors.iter().enumerate() {
            slot[c] = k;
        }
        let mut res = IntMatrix::zeros(ns, el.residual.len());
        for (j, row) in el.residual.iter().enumerate() {
            for (c, v) in row {
                res[(slot[*c], j)] = v.to_bigint();
            }
        }
        let sf = smith_normal_form_with(
            &res,
            SnfOptions {
                track_inverses: true,
                ..Default::default()
            },
        )
        .expect("uncapped");
        let s = sf.divisors.len();
        let free_rank = ns - s;
        let u = &sf.u;
        let u_inv = sf.u_inv.as_ref().unwrap();
        let torsion_slots: Vec<usize> = (0..s).filter(|&i| !sf.divisors[i].is_one()).collect();

        let images = nf
            .iter()
            .map(|v| {
                let mut out = Vec::new();
                for f in 0..free_rank {
                    let row = s + f;
                    let x: BigInt = v.iter().map(|(k, c)| &u[(row, *k)] * c.to_bigint()).sum();
                    if !Zero::is_zero(&x) {
                        out.push((f, x));
                    }
                }
                out
            })
            .collect();
        let torsion_images = nf
            .iter()
            .map(|v| {
                let mut out = Vec::new();
                for (t, &i) in torsion_slots.iter().enumerate() {
                    let x: BigInt = v.iter().map(|(k, c)| &u[(i, *k)] * c.to_bigint()).sum();
                    let x = x.modulo(&sf.divisors[i]).unwrap();
                    if !Zero::is_zero(&x) {
                        out.push((t, x));
                    }
                }
                out
            })
            .collect();
        let section = (0..free_rank)
            .map(|f| {
                (0..ns)
                    .filter_map(|k| {
                        let x = &u_inv[(k, s + f)];
                        (!Zero::is_zero(x)).then(|| (survivors[k], x.clone()))
                    })
                    .collect()
            })
            .collect();
        Some(QuotientLattice {
            ambient_rank,
            free_rank,
            torsion: torsion_slots.iter().map(|&i| sf.divisors[i].clone()).collect(),
            images,
            section,
            torsion_images,
        })
    }

    pub fn presentation(&self) -> CokerPresentation {
        CokerPresentation {
            ambient_rank: self.ambient_rank,
            free_rank: self.free_rank,
            torsion: self.torsion.clone(),
        }
    }

    /// Free-part coordinates of an ambient vector.
    pub fn reduce(&self, v: &[(usize, BigInt)]) -> Vec<BigInt> {
        let mut out = vec![<BigInt as Zero>::zero(); self.free_rank];
        for (c, x) in v {
            for (f, y) in &self.images[*c] {
                out[*f] += x * y;
            }
        }
        out
    }

    /// Torsion coordinates of an ambient vector.
    pub fn reduce_torsion(&self, v: &[(usize, BigInt)]) -> Vec<BigInt> {
        let mut out = vec![<BigInt as Zero>::zero(); self.torsion.len()];
        for (c, x) in v {
            for (t, y) in &self.torsion_images[*c] {
                out[*t] += x * y;
            }
        }
        out.iter()
            .zip(&self.torsion)
            .map(|(x, d)| x.modulo(d).unwrap())
            .collect()
    }

    /// Whether `v` lies in the relator span (its class is zero).
    pub fn is_zero_class(&self, v: &[(usize, BigInt)]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero) && self.reduce_torsion(v).iter().all(Zero::is_zero)
    }
}

pub(crate) mod sparse_columns {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    type Col = Vec<(usize, BigInt)>;

    pub fn serialize<S: Serializer>(v: &[Col], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|col| {
            col.iter()
                .map(|(i, x)| (*i, x.to_string()))
                .collect::<Vec<_>>()
        }))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Col>, D::Error> {
        let raw: Vec<Vec<(usize, String)>> = Vec::deserialize(d)?;
        raw.into_iter()
            .map(|col| {
                col.into_iter()
                    .map(|(i, s)| s.parse().map(|x| (i, x)).map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}
