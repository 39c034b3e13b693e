//! Smith normal form with unimodular transforms.
//!
//! Pivoting always picks the nonzero entry of smallest absolute value in the
//! active block, ties broken by `(row, col)` order, so the transforms are a
//! deterministic function of the input.

use std::cmp::Ordering;

use num_bigint::BigInt;

use super::coeff::Coeff;
use super::matrix::IntMatrix;
use super::LinalgError;

/// `u * a * v == d`, with `d` diagonal (rectangular padding) and
/// `divisors` the nonzero diagonal entries, each dividing the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    /// Inverses of `u` and `v`; present when requested.
    pub u_inv: Option<IntMatrix>,
    pub v_inv: Option<IntMatrix>,
    pub divisors: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.divisors.len()
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SnfOptions {
    /// Abort when an entry of the working matrix exceeds this many bits.
    pub max_bits: Option<u64>,
    pub track_inverses: bool,
}

/// Smith normal form of `a`. Total: never fails without a bit cap.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    smith_normal_form_with(a, SnfOptions::default()).expect("uncapped SNF cannot abort")
}

pub fn smith_normal_form_with(a: &IntMatrix, opts: SnfOptions) -> Result<SmithForm, LinalgError> {
    crate::counters::record_elimination();
    let small: Option<Vec<Vec<i64>>> = (0..a.rows())
        .map(|r| a.row(r).iter().map(i64::from_bigint).collect())
        .collect();
    if let Some(rows) = small {
        match SnfCalc::<i64>::new(rows, a.rows(), a.cols(), opts).run() {
            Ok(calc) => return Ok(calc.finish()),
            Err(Abort::Cap(bits)) => return Err(cap_error(bits, opts)),
            Err(Abort::Overflow) => log::debug!("snf: i64 overflow, replaying with bigints"),
        }
    }
    let rows: Vec<Vec<BigInt>> = (0..a.rows()).map(|r| a.row(r).to_vec()).collect();
    match SnfCalc::<BigInt>::new(rows, a.rows(), a.cols(), opts).run() {
        Ok(calc) => Ok(calc.finish()),
        Err(Abort::Cap(bits)) => Err(cap_error(bits, opts)),
        Err(Abort::Overflow) => unreachable!("bigint arithmetic cannot overflow"),
    }
}

fn cap_error(bits: u64, opts: SnfOptions) -> LinalgError {
    LinalgError::ResourceLimit {
        bits,
        cap: opts.max_bits.unwrap_or(u64::MAX),
    }
}

pub(crate) enum Abort {
    Overflow,
    Cap(u64),
}

impl From<Overflow> for Abort {
    fn from(_: Overflow) -> Self {
        Abort::Overflow
    }
}

pub(crate) struct Overflow;

trait OrOverflow<T> {
    fn ov(self) -> Result<T, Overflow>;
}

impl<T> OrOverflow<T> for Option<T> {
    fn ov(self) -> Result<T, Overflow> {
        self.ok_or(Overflow)
    }
}

struct SnfCalc<T: Coeff> {
    rows: usize,
    cols: usize,
    d: Vec<Vec<T>>,
    u: Vec<Vec<T>>,
    v: Vec<Vec<T>>,
    u_inv: Option<Vec<Vec<T>>>,
    v_inv: Option<Vec<Vec<T>>>,
    opts: SnfOptions,
}

fn identity<T: Coeff>(n: usize) -> Vec<Vec<T>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect()
}

impl<T: Coeff> SnfCalc<T> {
    fn new(d: Vec<Vec<T>>, rows: usize, cols: usize, opts: SnfOptions) -> Self {
        SnfCalc {
            rows,
            cols,
            d,
            u: identity(rows),
            v: identity(cols),
            u_inv: opts.track_inverses.then(|| identity(rows)),
            v_inv: opts.track_inverses.then(|| identity(cols)),
            opts,
        }
    }

    fn check_bits(&self, x: &T) -> Result<(), Abort> {
        match self.opts.max_bits {
            Some(cap) if x.bits() > cap => Err(Abort::Cap(x.bits())),
            _ => Ok(()),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        self.d.swap(a, b);
        self.u.swap(a, b);
        if let Some(ui) = &mut self.u_inv {
            for row in ui.iter_mut() {
                row.swap(a, b);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for row in self.d.iter_mut().chain(self.v.iter_mut()) {
            row.swap(a, b);
        }
        if let Some(vi) = &mut self.v_inv {
            vi.swap(a, b);
        }
    }

    /// row[i] -= q * row[t]
    fn row_sub(&mut self, i: usize, t: usize, q: &T) -> Result<(), Abort> {
        for c in 0..self.cols {
            if !self.d[t][c].is_zero() {
                let x = self.d[i][c].sub_mul(q, &self.d[t][c]).ov()?;
                self.check_bits(&x)?;
                self.d[i][c] = x;
            }
        }
        for c in 0..self.rows {
            if !self.u[t][c].is_zero() {
                self.u[i][c] = self.u[i][c].sub_mul(q, &self.u[t][c]).ov()?;
            }
        }
        if let Some(ui) = &mut self.u_inv {
            for row in ui.iter_mut() {
                if !row[i].is_zero() {
                    row[t] = row[t].add(&q.mul(&row[i]).ov()?).ov()?;
                }
            }
        }
        Ok(())
    }

    /// col[j] -= q * col[t]
    fn col_sub(&mut self, j: usize, t: usize, q: &T) -> Result<(), Abort> {
        for r in 0..self.rows {
            if !self.d[r][t].is_zero() {
                let x = self.d[r][j].sub_mul(q, &self.d[r][t]).ov()?;
                self.check_bits(&x)?;
                self.d[r][j] = x;
            }
        }
        for r in 0..self.cols {
            if !self.v[r][t].is_zero() {
                self.v[r][j] = self.v[r][j].sub_mul(q, &self.v[r][t]).ov()?;
            }
        }
        if let Some(vi) = &mut self.v_inv {
            for c in 0..self.cols {
                if !vi[j][c].is_zero() {
                    let x = vi[t][c].add(&q.mul(&vi[j][c]).ov()?).ov()?;
                    vi[t][c] = x;
                }
            }
        }
        Ok(())
    }

    /// row[t] += row[i]
    fn row_add(&mut self, t: usize, i: usize) -> Result<(), Abort> {
        let minus_one = T::from_i64(-1);
        self.row_sub(t, i, &minus_one)
    }

    fn negate_row(&mut self, t: usize) -> Result<(), Abort> {
        for x in self.d[t].iter_mut().chain(self.u[t].iter_mut()) {
            *x = x.neg().ov()?;
        }
        if let Some(ui) = &mut self.u_inv {
            for row in ui.iter_mut() {
                row[t] = row[t].neg().ov()?;
            }
        }
        Ok(())
    }

    fn smallest_in_block(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for r in t..self.rows {
            for c in t..self.cols {
                let x = &self.d[r][c];
                if x.is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((br, bc)) => x.abs_cmp(&self.d[br][bc]) == Ordering::Less,
                };
                if better {
                    best = Some((r, c));
                }
            }
        }
        best
    }

    fn run(mut self) -> Result<Self, Abort> {
        let n = self.rows.min(self.cols);
        for t in 0..n {
            let Some((r, c)) = self.smallest_in_block(t) else {
                break;
            };
            self.swap_rows(t, r);
            self.swap_cols(t, c);
            loop {
                let mut clear = true;
                for i in t + 1..self.rows {
                    if !self.d[i][t].is_zero() {
                        let q = self.d[i][t].nearest_quotient(&self.d[t][t]).ov()?;
                        self.row_sub(i, t, &q)?;
                        clear &= self.d[i][t].is_zero();
                    }
                }
                for j in t + 1..self.cols {
                    if !self.d[t][j].is_zero() {
                        let q = self.d[t][j].nearest_quotient(&self.d[t][t]).ov()?;
                        self.col_sub(j, t, &q)?;
                        clear &= self.d[t][j].is_zero();
                    }
                }
                if !clear {
                    // Remainders left: move the smallest of them into the pivot.
                    let mut best = (t, t);
                    for i in t + 1..self.rows {
                        let x = &self.d[i][t];
                        if !x.is_zero() && x.abs_cmp(&self.d[best.0][best.1]) == Ordering::Less {
                            best = (i, t);
                        }
                    }
                    for j in t + 1..self.cols {
                        let x = &self.d[t][j];
                        if !x.is_zero() && x.abs_cmp(&self.d[best.0][best.1]) == Ordering::Less {
                            best = (t, j);
                        }
                    }
                    self.swap_rows(t, best.0);
                    self.swap_cols(t, best.1);
                    continue;
                }
                let offender = (t + 1..self.rows)
                    .flat_map(|i| (t + 1..self.cols).map(move |j| (i, j)))
                    .find(|&(i, j)| !self.d[t][t].divides(&self.d[i][j]));
                match offender {
                    Some((i, _)) => self.row_add(t, i)?,
                    None => break,
                }
            }
            if self.d[t][t].is_negative() {
                self.negate_row(t)?;
            }
        }
        Ok(self)
    }

    fn finish(self) -> SmithForm {
        let to_mat = |m: &Vec<Vec<T>>, r: usize, c: usize| {
            let mut out = IntMatrix::zeros(r, c);
            for (i, row) in m.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    if !x.is_zero() {
                        out[(i, j)] = x.to_bigint();
                    }
                }
            }
            out
        };
        let divisors = (0..self.rows.min(self.cols))
            .map(|t| &self.d[t][t])
            .take_while(|x| !x.is_zero())
            .map(Coeff::to_bigint)
            .collect();
        SmithForm {
            u: to_mat(&self.u, self.rows, self.rows),
            d: to_mat(&self.d, self.rows, self.cols),
            v: to_mat(&self.v, self.cols, self.cols),
            u_inv: self.u_inv.as_ref().map(|m| to_mat(m, self.rows, self.rows)),
            v_inv: self.v_inv.as_ref().map(|m| to_mat(m, self.cols, self.cols)),
            divisors,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn check(a: &IntMatrix, sf: &SmithForm) {
        assert_eq!(sf.u.mul(a).unwrap().mul(&sf.v).unwrap(), sf.d);
        assert!(sf.u.determinant().unwrap().magnitude().is_one());
        assert!(sf.v.determinant().unwrap().magnitude().is_one());
        for w in sf.divisors.windows(2) {
            assert!((&w[1] % &w[0]).sign() == num_bigint::Sign::NoSign);
        }
    }

    #[test]
    fn identity_case() {
        let a = IntMatrix::identity(2);
        let sf = smith_normal_form(&a);
        check(&a, &sf);
        assert_eq!(sf.d, IntMatrix::identity(2));
        assert_eq!(sf.divisors, vec![BigInt::from(1), BigInt::from(1)]);
    }

    #[test]
    fn two_by_two() {
        let a = IntMatrix::from_i64(2, 2, &[2, 4, 6, 8]);
        let sf = smith_normal_form(&a);
        check(&a, &sf);
        assert_eq!(sf.divisors, vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn zero_matrix() {
        let a = IntMatrix::zeros(2, 3);
        let sf = smith_normal_form(&a);
        check(&a, &sf);
        assert!(sf.divisors.is_empty());
    }

    #[test]
    fn inverses_are_tracked() {
        let a = IntMatrix::from_i64(3, 4, &[3, 5, 7, 11, 2, -4, 6, 0, 9, 9, 1, -3]);
        let sf = smith_normal_form_with(
            &a,
            SnfOptions {
                track_inverses: true,
                ..Default::default()
            },
        )
        .unwrap();
        check(&a, &sf);
        let ui = sf.u_inv.as_ref().unwrap();
        let vi = sf.v_inv.as_ref().unwrap();
        assert_eq!(sf.u.mul(ui).unwrap(), IntMatrix::identity(3));
        assert_eq!(sf.v.mul(vi).unwrap(), IntMatrix::identity(4));
    }

    #[test]
    fn bit_cap_aborts() {
        let a = IntMatrix::from_i64(2, 2, &[1 << 20, 3, 5, 1 << 21]);
        let err = smith_normal_form_with(
            &a,
            SnfOptions {
                max_bits: Some(8),
                ..Default::default()
            },
        )
        .unwrap_err();
        assert!(matches!(err, LinalgError::ResourceLimit { .. }));
    }

    #[test]
    fn bigint_replay_matches_on_overflow() {
        // Large entries force the i64 path to overflow partway through.
        let big = i64::MAX / 3;
        let a = IntMatrix::from_i64(3, 3, &[big, big - 1, 7, big - 2, big, 5, 3, 11, big - 5]);
        let sf = smith_normal_form(&a);
        check(&a, &sf);
        let det = a.determinant().unwrap();
        let prod: BigInt = sf.divisors.iter().product();
        assert_eq!(prod, num_traits::Signed::abs(&det));
    }
}
