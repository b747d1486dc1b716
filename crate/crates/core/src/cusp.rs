//! Cusps: projective points of P^1(Q), with infinity as the pair (1, 0).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::fmt;

/// A point of P^1(Q) in lowest terms: num/den with gcd 1 and den >= 0;
/// infinity is (1, 0).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cusp {
    num: BigInt,
    den: BigInt,
}

impl fmt::Debug for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_zero() {
            write!(f, "oo")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl Cusp {
    /// Normalize a projective pair. (0, 0) is rejected.
    pub fn from_pair(num: BigInt, den: BigInt) -> Cusp {
        assert!(!(num.is_zero() && den.is_zero()), "projective point (0, 0)");
        if den.is_zero() {
            return Cusp { num: BigInt::from(1), den: BigInt::from(0) };
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = (num / &g, den / g);
        if d.is_negative() {
            n = -n;
            d = -d;
        }
        Cusp { num: n, den: d }
    }

    pub fn from_ints(num: i64, den: i64) -> Cusp {
        Cusp::from_pair(BigInt::from(num), BigInt::from(den))
    }

    pub fn from_rational(x: &BigRational) -> Cusp {
        Cusp::from_pair(x.numer().clone(), x.denom().clone())
    }

    pub fn infinity() -> Cusp {
        Cusp { num: BigInt::from(1), den: BigInt::from(0) }
    }

    pub fn zero() -> Cusp {
        Cusp { num: BigInt::from(0), den: BigInt::from(1) }
    }

    pub fn is_infinity(&self) -> bool {
        self.den.is_zero()
    }

    pub fn num(&self) -> &BigInt {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if self.is_infinity() {
            None
        } else {
            Some(BigRational::new(self.num.clone(), self.den.clone()))
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_infinity() {
            f64::INFINITY
        } else {
            crate::mat2::bigint_to_f64(&self.num) / crate::mat2::bigint_to_f64(&self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization() {
        assert_eq!(Cusp::from_ints(2, -4), Cusp::from_ints(-1, 2));
        assert_eq!(Cusp::from_ints(-3, 0), Cusp::infinity());
        assert_eq!(Cusp::from_ints(0, 7), Cusp::zero());
    }
}
