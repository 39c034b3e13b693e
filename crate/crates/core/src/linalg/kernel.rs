use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use super::smith::smith_normal_form;

/// Basis of the integer kernel lattice `{v ∈ Z^cols : A v = 0}`, returned in
/// row Hermite normal form so the answer does not depend on the pivoting.
pub fn kernel_basis(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let sf = smith_normal_form(a);
    let rank = sf.rank();
    // A = U⁻¹ D V⁻¹, so the trailing columns of V span ker A and are part of
    // a unimodular basis: the lattice they span is saturated.
    let vecs: Vec<Vec<BigInt>> = (rank..a.cols()).map(|j| sf.v.column(j)).collect();
    hermite_normal_form(&vecs)
}

/// Row-style Hermite normal form of the lattice spanned by `rows`: echelon,
/// positive pivots, entries above each pivot reduced into `0..pivot`.
/// Zero rows are dropped.
pub fn hermite_normal_form(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let Some(width) = rows.first().map(Vec::len) else {
        return Vec::new();
    };
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let mut pivot_row = 0;
    for col in 0..width {
        if pivot_row == m.len() {
            break;
        }
        // gcd-combine every row below into the pivot row.
        for r in pivot_row + 1..m.len() {
            if m[r][col].is_zero() {
                continue;
            }
            if m[pivot_row][col].is_zero() {
                m.swap(pivot_row, r);
                continue;
            }
            let a = m[pivot_row][col].clone();
            let b = m[r][col].clone();
            let eg = a.extended_gcd(&b);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let (a_g, b_g) = (&a / &g, &b / &g);
            // [x y; -b/g a/g] has determinant 1.
            let (top, bot): (Vec<BigInt>, Vec<BigInt>) = m[pivot_row]
                .iter()
                .zip(&m[r])
                .map(|(p, q)| (&x * p + &y * q, &a_g * q - &b_g * p))
                .unzip();
            m[pivot_row] = top;
            m[r] = bot;
        }
        if m[pivot_row][col].is_zero() {
            continue;
        }
        if m[pivot_row][col].is_negative() {
            for x in m[pivot_row].iter_mut() {
                *x = -&*x;
            }
        }
        let p = m[pivot_row][col].clone();
        for r in 0..pivot_row {
            let q = m[r][col].div_floor(&p);
            if !q.is_zero() {
                let sub: Vec<BigInt> = m[pivot_row].iter().map(|x| &q * x).collect();
                for (x, s) in m[r].iter_mut().zip(sub) {
                    *x -= s;
                }
            }
        }
        pivot_row += 1;
    }
    m.truncate(pivot_row);
    m.retain(|row| row.iter().any(|x| !x.is_zero()));
    m
}

/// Whether `v` is an integer combination of the rows of a Hermite basis.
pub fn in_lattice(hnf: &[Vec<BigInt>], v: &[BigInt]) -> bool {
    let mut rest = v.to_vec();
    for row in hnf {
        let Some(col) = row.iter().position(|x| !x.is_zero()) else { continue };
        if rest[col].is_zero() {
            continue;
        }
        let (q, r) = rest[col].div_rem(&row[col]);
        if !r.is_zero() {
            return false;
        }
        for (x, y) in rest.iter_mut().zip(row) {
            *x -= &q * y;
        }
    }
    rest.iter().all(Zero::is_zero)
}

pub fn is_unimodular(m: &IntMatrix) -> bool {
    m.rows() == m.cols() && m.determinant().is_ok_and(|d| d.abs().is_one())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn kernel_of_sum() {
        let a = IntMatrix::from_i64(1, 2, &[1, 1]);
        assert_eq!(kernel_basis(&a), vec![bv(&[1, -1])]);
    }

    #[test]
    fn kernel_of_identity() {
        assert!(kernel_basis(&IntMatrix::identity(3)).is_empty());
    }

    #[test]
    fn kernel_is_saturated() {
        let a = IntMatrix::from_i64(1, 2, &[2, 4]);
        assert_eq!(kernel_basis(&a), vec![bv(&[2, -1])]);
    }

    #[test]
    fn hnf_membership() {
        let h = hermite_normal_form(&[bv(&[2, 4, 0]), bv(&[0, 3, 3])]);
        assert!(in_lattice(&h, &bv(&[2, 7, 3])));
        assert!(!in_lattice(&h, &bv(&[1, 2, 0])));
        assert!(in_lattice(&h, &bv(&[0, 0, 0])));
    }
}
