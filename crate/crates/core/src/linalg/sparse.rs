//! Unit-pivot elimination for large sparse relator systems.
//!
//! Relators are rows over `ncols` ambient coordinates. Rows are pivoted on
//! `±1` entries, lightest row first, choosing among its unit entries the
//! column that currently occurs in the fewest rows. Every pivot column is
//! removed from all remaining rows, so what is left (the residual) only
//! involves surviving columns and has no unit entries.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::coeff::Coeff;
use super::smith::Overflow;

pub type SparseVec<T> = Vec<(usize, T)>;

pub(crate) struct Elimination<T: Coeff> {
    pub ncols: usize,
    /// `(pivot column, pivot row)` in pivot order; the row still contains
    /// its pivot entry (a unit) and possibly columns pivoted later.
    pub pivots: Vec<(usize, SparseVec<T>)>,
    /// Rows left without unit entries, over surviving columns only.
    pub residual: Vec<SparseVec<T>>,
    pub is_pivot: Vec<bool>,
}

/// `acc + factor * row`, both sorted by column.
pub(crate) fn axpy<T: Coeff>(acc: &[(usize, T)], factor: &T, row: &[(usize, T)]) -> Result<SparseVec<T>, Overflow> {
    let mut out = Vec::with_capacity(acc.len() + row.len());
    let (mut i, mut j) = (0, 0);
    while i < acc.len() || j < row.len() {
        let take_acc = j >= row.len() || (i < acc.len() && acc[i].0 < row[j].0);
        let take_row = i >= acc.len() || (j < row.len() && row[j].0 < acc[i].0);
        if take_acc {
            out.push(acc[i].clone());
            i += 1;
        } else if take_row {
            let v = factor.mul(&row[j].1).ok_or(Overflow)?;
            out.push((row[j].0, v));
            j += 1;
        } else {
            let v = acc[i].1.add(&factor.mul(&row[j].1).ok_or(Overflow)?).ok_or(Overflow)?;
            if !v.is_zero() {
                out.push((acc[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Ok(out)
}

pub(crate) fn eliminate<T: Coeff>(ncols: usize, rows: Vec<SparseVec<T>>) -> Result<Elimination<T>, Overflow> {
    let mut rows: Vec<Option<SparseVec<T>>> = rows.into_iter().map(Some).collect();
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); ncols];
    let mut heap = BinaryHeap::new();
    for (r, row) in rows.iter().enumerate() {
        let row = row.as_ref().unwrap();
        for (c, _) in row {
            col_rows[*c].push(r as u32);
        }
        heap.push(Reverse((row.len(), r)));
    }
    let mut is_pivot = vec![false; ncols];
    let mut pivots = Vec::new();
    let mut parked = vec![false; rows.len()];

    while let Some(Reverse((w, r))) = heap.pop() {
        let Some(row) = rows[r].as_ref() else { continue };
        if row.len() != w {
            continue;
        }
        if row.is_empty() {
            rows[r] = None;
            continue;
        }
        let pick = row
            .iter()
            .filter(|(_, v)| v.is_unit())
            .min_by_key(|(c, _)| (col_rows[*c].len(), *c))
            .map(|(c, v)| (*c, v.clone()));
        let Some((pc, pv)) = pick else {
            parked[r] = true;
            continue;
        };
        let prow = rows[r].take().unwrap();
        parked[r] = false;
        let mut touched = std::mem::take(&mut col_rows[pc]);
        touched.sort_unstable();
        touched.dedup();
        for &r2 in &touched {
            let r2 = r2 as usize;
            if r2 == r {
                continue;
            }
            let Some(other) = rows[r2].as_ref() else { continue };
            let Ok(pos) = other.binary_search_by_key(&pc, |e| e.0) else { continue };
            // other - (other[pc] / pv) * prow, with pv = ±1 so 1/pv = pv.
            let factor = other[pos].1.mul(&pv).ok_or(Overflow)?.neg().ok_or(Overflow)?;
            let new_row = axpy(other, &factor, &prow)?;
            for (c, _) in &new_row {
                if other.binary_search_by_key(c, |e| e.0).is_err() {
                    col_rows[*c].push(r2 as u32);
                }
            }
            heap.push(Reverse((new_row.len(), r2)));
            parked[r2] = false;
            rows[r2] = Some(new_row);
        }
        is_pivot[pc] = true;
        pivots.push((pc, prow));
    }

    let residual = rows
        .into_iter()
        .enumerate()
        .filter_map(|(r, row)| row.filter(|row| !row.is_empty()).map(|row| (r, row)))
        .map(|(r, row)| {
            debug_assert!(parked[r]);
            row
        })
        .collect();
    Ok(Elimination {
        ncols,
        pivots,
        residual,
        is_pivot,
    })
}

impl<T: Coeff> Elimination<T> {
    pub fn survivors(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&c| !self.is_pivot[c]).collect()
    }

    /// Normal form of every ambient coordinate over the surviving columns
    /// (indexed by position in `survivors()`), modulo the pivot rows.
    pub fn normal_forms(&self) -> Result<Vec<SparseVec<T>>, Overflow> {
        let mut slot = vec![usize::MAX; self.ncols];
        for (k, c) in self.survivors().into_iter().enumerate() {
            slot[c] = k;
        }
        let mut nf: Vec<Option<SparseVec<T>>> = vec![None; self.ncols];
        for c in 0..self.ncols {
            if !self.is_pivot[c] {
                nf[c] = Some(vec![(slot[c], T::one())]);
            }
        }
        // A pivot row only mentions columns pivoted later, so go backwards.
        for (pc, row) in self.pivots.iter().rev() {
            let pv = &row.iter().find(|e| e.0 == *pc).unwrap().1;
            // x_pc = -pv * sum_{c != pc} row[c] x_c
            let mut acc: SparseVec<T> = Vec::new();
            for (c, v) in row {
                if c == pc {
                    continue;
                }
                let factor = v.mul(pv).ok_or(Overflow)?.neg().ok_or(Overflow)?;
                let sub = nf[*c].as_ref().expect("later pivot resolved first");
                acc = axpy(&acc, &factor, sub)?;
            }
            nf[*pc] = Some(acc);
        }
        Ok(nf.into_iter().map(Option::unwrap).collect())
    }
}
