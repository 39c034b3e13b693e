//! Coefficient arithmetic shared by the dense and sparse eliminators.
//!
//! Every algorithm in this module is written once against [`Coeff`]. It is
//! run first with checked `i64` arithmetic; any overflow aborts that run and
//! the identical sequence of operations is replayed over [`BigInt`]. Results
//! therefore never depend on the word size.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Integer coefficients with fallible (overflow-aware) arithmetic.
pub trait Coeff: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_bigint(v: &BigInt) -> Option<Self>;
    fn to_bigint(&self) -> BigInt;

    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn is_unit(&self) -> bool;
    /// Compare absolute values.
    fn abs_cmp(&self, other: &Self) -> Ordering;
    fn bits(&self) -> u64;

    fn neg(&self) -> Option<Self>;
    fn add(&self, other: &Self) -> Option<Self>;
    fn sub(&self, other: &Self) -> Option<Self>;
    fn mul(&self, other: &Self) -> Option<Self>;
    /// Quotient `q` such that `self - q * other` has absolute value at most
    /// `|other| / 2` (ties resolved towards the floor quotient).
    fn nearest_quotient(&self, other: &Self) -> Option<Self>;
    /// `self mod other`, in `0..|other|`.
    fn modulo(&self, other: &Self) -> Option<Self>;
    fn divides(&self, other: &Self) -> bool;

    /// `self - factor * other`.
    fn sub_mul(&self, factor: &Self, other: &Self) -> Option<Self> {
        self.sub(&factor.mul(other)?)
    }
}

impl Coeff for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_i64(v: i64) -> Self {
        v
    }
    fn from_bigint(v: &BigInt) -> Option<Self> {
        v.to_i64()
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn abs_cmp(&self, other: &Self) -> Ordering {
        self.unsigned_abs().cmp(&other.unsigned_abs())
    }
    fn bits(&self) -> u64 {
        64 - u64::from(self.unsigned_abs().leading_zeros())
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn add(&self, other: &Self) -> Option<Self> {
        self.checked_add(*other)
    }
    fn sub(&self, other: &Self) -> Option<Self> {
        self.checked_sub(*other)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)
    }
    fn nearest_quotient(&self, other: &Self) -> Option<Self> {
        let q = self.checked_div_euclid(*other)?;
        // Euclidean division leaves r in 0..|other|; shift to the symmetric range.
        let r = self.checked_sub(q.checked_mul(*other)?)?;
        if r.checked_mul(2)?.unsigned_abs() > other.unsigned_abs() {
            if *other > 0 {
                q.checked_add(1)
            } else {
                q.checked_sub(1)
            }
        } else {
            Some(q)
        }
    }
    fn modulo(&self, other: &Self) -> Option<Self> {
        self.checked_rem_euclid(*other)
    }
    fn divides(&self, other: &Self) -> bool {
        if *self == 0 {
            return *other == 0;
        }
        other.checked_rem(*self) == Some(0)
    }
}

impl Coeff for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn from_bigint(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn is_unit(&self) -> bool {
        self.magnitude().is_one()
    }
    fn abs_cmp(&self, other: &Self) -> Ordering {
        self.magnitude().cmp(other.magnitude())
    }
    fn bits(&self) -> u64 {
        self.magnitude().bits()
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn sub(&self, other: &Self) -> Option<Self> {
        Some(self - other)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn nearest_quotient(&self, other: &Self) -> Option<Self> {
        let (q, r) = self.div_mod_floor(other);
        // div_mod_floor gives r with the sign of `other`; match the i64 path,
        // which works from the Euclidean quotient.
        let (mut q, r) = if Signed::is_negative(&r) {
            (q + 1, r - other)
        } else {
            (q, r)
        };
        if (&r * 2u32).magnitude() > other.magnitude() {
            if Signed::is_positive(other) {
                q += 1;
            } else {
                q -= 1;
            }
        }
        Some(q)
    }
    fn modulo(&self, other: &Self) -> Option<Self> {
        let m = other.abs();
        Some(self.mod_floor(&m))
    }
    fn divides(&self, other: &Self) -> bool {
        if Zero::is_zero(self) {
            return Zero::is_zero(other);
        }
        Zero::is_zero(&(other % self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nearest_quotient_agrees_across_backends() {
        for a in -40i64..=40 {
            for b in [-7i64, -4, -3, -2, -1, 1, 2, 3, 4, 7] {
                let q_small = a.nearest_quotient(&b).unwrap();
                let q_big = BigInt::from(a)
                    .nearest_quotient(&BigInt::from(b))
                    .unwrap();
                assert_eq!(BigInt::from(q_small), q_big, "a={a} b={b}");
                let r = a - q_small * b;
                assert!(2 * r.abs() <= b.abs(), "a={a} b={b} r={r}");
            }
        }
    }

    #[test]
    fn overflow_is_reported() {
        assert!(i64::MAX.add(&1).is_none());
        assert!(i64::MIN.neg().is_none());
        assert!((1i64 << 40).mul(&(1i64 << 40)).is_none());
    }

    #[test]
    fn modulo_is_nonnegative() {
        assert_eq!((-7i64).modulo(&3), Some(2));
        assert_eq!(BigInt::from(-7).modulo(&BigInt::from(-3)), Some(BigInt::from(2)));
    }
}
