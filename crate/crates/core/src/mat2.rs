//! Exact 2x2 integer matrices and their fractional-linear action.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::cusp::Cusp;
use crate::error::{Error, Result};

/// A 2x2 matrix over the integers, entries (a b; c d).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}

impl Mat2 {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>, d: impl Into<BigInt>) -> Self {
        Mat2 { a: a.into(), b: b.into(), c: c.into(), d: d.into() }
    }

    pub fn identity() -> Self {
        Mat2::new(1, 0, 0, 1)
    }

    /// S = (0 -1; 1 0), order 2 in PSL2(Z).
    pub fn s() -> Self {
        Mat2::new(0, -1, 1, 0)
    }

    /// T = (1 1; 0 1), the unit translation.
    pub fn t() -> Self {
        Mat2::new(1, 1, 0, 1)
    }

    /// T^x = (1 x; 0 1) by direct formula.
    pub fn t_pow(x: impl Into<BigInt>) -> Self {
        Mat2::new(1, x, 0, 1)
    }

    /// U = S*T = (0 -1; 1 1), order 3 in PSL2(Z).
    pub fn u() -> Self {
        Mat2::s() * Mat2::t()
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    pub fn require_unimodular(&self) -> Result<()> {
        if self.is_unimodular() {
            Ok(())
        } else {
            Err(Error::NotUnimodular(self.det().to_string()))
        }
    }

    /// Inverse of a unimodular matrix, exact.
    pub fn inverse(&self) -> Result<Mat2> {
        let det = self.det();
        if det.is_one() {
            Ok(Mat2 { a: self.d.clone(), b: -self.b.clone(), c: -self.c.clone(), d: self.a.clone() })
        } else if (-&det).is_one() {
            Ok(Mat2 { a: -self.d.clone(), b: self.b.clone(), c: self.c.clone(), d: -self.a.clone() })
        } else {
            Err(Error::NotUnimodular(det.to_string()))
        }
    }

    pub fn neg(&self) -> Mat2 {
        Mat2 { a: -self.a.clone(), b: -self.b.clone(), c: -self.c.clone(), d: -self.d.clone() }
    }

    /// Canonical representative of {g, -g}: first nonzero entry in order
    /// (c, d, a, b) is made positive. Using the bottom row first keeps the
    /// form stable under the P^1 coset keys used elsewhere.
    pub fn psl_normalize(&self) -> Mat2 {
        for e in [&self.c, &self.d, &self.a, &self.b] {
            if e.is_positive() {
                return self.clone();
            }
            if e.is_negative() {
                return self.neg();
            }
        }
        self.clone()
    }

    /// Equality in PSL2 (up to overall sign).
    pub fn proj_eq(&self, other: &Mat2) -> bool {
        self.psl_normalize() == other.psl_normalize()
    }

    /// Fractional-linear action on a cusp (projective point of Q union infinity).
    pub fn moebius(&self, z: &Cusp) -> Cusp {
        let p = &self.a * z.num() + &self.b * z.den();
        let q = &self.c * z.num() + &self.d * z.den();
        Cusp::from_pair(p, q)
    }

    /// Fractional-linear action on a complex point; poles map to large values,
    /// callers on the upper half-plane never hit them.
    pub fn moebius_c(&self, z: num_complex::Complex64) -> num_complex::Complex64 {
        let a = bigint_to_f64(&self.a);
        let b = bigint_to_f64(&self.b);
        let c = bigint_to_f64(&self.c);
        let d = bigint_to_f64(&self.d);
        (a * z + b) / (c * z + d)
    }

    pub fn entries_i64(&self) -> Option<[i64; 4]> {
        use num_traits::ToPrimitive;
        Some([self.a.to_i64()?, self.b.to_i64()?, self.c.to_i64()?, self.d.to_i64()?])
    }
}

impl std::ops::Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        &self * &rhs
    }
}

impl std::ops::Mul for &Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: &Mat2) -> Mat2 {
        Mat2 {
            a: &self.a * &rhs.a + &self.b * &rhs.c,
            b: &self.a * &rhs.b + &self.b * &rhs.d,
            c: &self.c * &rhs.a + &self.d * &rhs.c,
            d: &self.c * &rhs.b + &self.d * &rhs.d,
        }
    }
}

/// BigInt -> f64 conversion that survives values beyond f64 range by
/// saturating; use `bigint_to_sci` when the scale matters.
pub fn bigint_to_f64(x: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(if x.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

/// Scaled conversion: returns (m, e) with x ~= m * 2^e and |m| in [0.5, 1).
pub fn bigint_to_sci(x: &BigInt) -> (f64, i64) {
    use num_traits::ToPrimitive;
    if x.is_zero() {
        return (0.0, 0);
    }
    let bits = x.bits() as i64;
    // take the top 64 bits exactly
    let shift = (bits - 64).max(0);
    let top = x >> shift;
    let m = top.to_f64().unwrap();
    let scale = (bits - shift) as f64; // bits of `top`
    (m / 2f64.powf(scale), shift + (scale as i64))
}

/// Natural log of |x| for a nonzero BigInt of any size.
pub fn ln_bigint(x: &BigInt) -> f64 {
    let (m, e) = bigint_to_sci(x);
    m.abs().ln() + (e as f64) * std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s_and_t_relations() {
        let s = Mat2::s();
        let t = Mat2::t();
        // S^2 = -I, (ST)^3 = -I in SL2(Z)
        let s2 = &s * &s;
        assert!(s2.proj_eq(&Mat2::identity()));
        let st = &s * &t;
        let st3 = &(&st * &st) * &st;
        assert!(st3.proj_eq(&Mat2::identity()));
        assert_eq!(st, Mat2::u());
    }

    #[test]
    fn moebius_basics() {
        let s = Mat2::s();
        assert_eq!(s.moebius(&Cusp::infinity()), Cusp::zero());
        assert_eq!(s.moebius(&Cusp::zero()), Cusp::infinity());
        let t = Mat2::t();
        assert_eq!(t.moebius(&Cusp::from_ints(1, 2)), Cusp::from_ints(3, 2));
    }

    #[test]
    fn inverse_roundtrip() {
        let g = Mat2::new(2, 5, 1, 3); // det 1
        let gi = g.inverse().unwrap();
        assert_eq!(&g * &gi, Mat2::identity());
        let h = Mat2::new(0, 1, 1, 0); // det -1
        let hi = h.inverse().unwrap();
        assert_eq!(&h * &hi, Mat2::identity());
    }

    #[test]
    fn ln_bigint_large() {
        let x = BigInt::from(10u32).pow(500);
        let want = 500.0 * 10f64.ln();
        assert!((ln_bigint(&x) - want).abs() < 1e-9 * want);
    }
}
