//! Exact arithmetic with real quadratic irrationals.
//!
//! Two layers: `QuadExt` is a general element a + b*sqrt(d) of a real
//! quadratic field with rational a, b, and `QuadIrr` is the normalized surd
//! presentation (p + sqrt(d))/q with q dividing d - p^2, which is the state
//! space of the continued-fraction algorithm.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::mat2::{bigint_to_sci, Mat2};

fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &(&r * &r) == n
}

/// a + b*sqrt(d) with a, b rational; d > 0 and not a perfect square.
#[derive(Clone, PartialEq, Eq)]
pub struct QuadExt {
    pub d: BigInt,
    pub a: BigRational,
    pub b: BigRational,
}

impl fmt::Debug for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
    }
}

impl QuadExt {
    pub fn new(d: BigInt, a: BigRational, b: BigRational) -> Result<QuadExt> {
        if is_square(&d) || !d.is_positive() {
            return Err(Error::SquareDiscriminant(d.to_string()));
        }
        Ok(QuadExt { d, a, b })
    }

    pub fn from_rational(d: BigInt, a: BigRational) -> Result<QuadExt> {
        QuadExt::new(d, a, BigRational::zero())
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conj(&self) -> QuadExt {
        QuadExt { d: self.d.clone(), a: self.a.clone(), b: -self.b.clone() }
    }

    /// Field norm a^2 - b^2 d.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * BigRational::from(self.d.clone())
    }

    pub fn add_rat(&self, r: &BigRational) -> QuadExt {
        QuadExt { d: self.d.clone(), a: &self.a + r, b: self.b.clone() }
    }

    pub fn neg(&self) -> QuadExt {
        QuadExt { d: self.d.clone(), a: -self.a.clone(), b: -self.b.clone() }
    }

    pub fn recip(&self) -> QuadExt {
        let n = self.norm();
        assert!(!n.is_zero(), "reciprocal of zero");
        QuadExt { d: self.d.clone(), a: &self.a / &n, b: -&self.b / &n }
    }

    pub fn mul(&self, other: &QuadExt) -> QuadExt {
        assert_eq!(self.d, other.d, "mixed discriminants");
        let d = BigRational::from(self.d.clone());
        QuadExt {
            d: self.d.clone(),
            a: &self.a * &other.a + &self.b * &other.b * &d,
            b: &self.a * &other.b + &self.b * &other.a,
        }
    }

    /// Sign of the real value, exact.
    pub fn signum(&self) -> i32 {
        let sa = rat_sign(&self.a);
        let sb = rat_sign(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        if sa == sb {
            return sa;
        }
        // mixed signs: compare a^2 with b^2 d
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * BigRational::from(self.d.clone());
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn is_zero_val(&self) -> bool {
        self.signum() == 0
    }

    pub fn cmp_rat(&self, r: &BigRational) -> Ordering {
        let diff = self.add_rat(&-r.clone());
        match diff.signum() {
            s if s > 0 => Ordering::Greater,
            s if s < 0 => Ordering::Less,
            _ => Ordering::Equal,
        }
    }

    pub fn abs(&self) -> QuadExt {
        if self.signum() < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Exact floor via f64 estimate plus exact adjustment.
    pub fn floor(&self) -> BigInt {
        let est = self.to_f64();
        let mut n = BigInt::from(est.floor() as i128);
        loop {
            let cn = self.cmp_rat(&BigRational::from(n.clone()));
            if cn == Ordering::Less {
                n -= 1;
                continue;
            }
            let cn1 = self.cmp_rat(&BigRational::from(&n + 1));
            if cn1 != Ordering::Less {
                n += 1;
                continue;
            }
            return n;
        }
    }

    /// Fractional-linear image (a*x + b)/(c*x + d), exact.
    pub fn moebius(&self, g: &Mat2) -> QuadExt {
        let num = self.scale_int(&g.a).add_rat(&BigRational::from(g.b.clone()));
        let den = self.scale_int(&g.c).add_rat(&BigRational::from(g.d.clone()));
        num.mul(&den.recip())
    }

    fn scale_int(&self, k: &BigInt) -> QuadExt {
        let kq = BigRational::from(k.clone());
        QuadExt { d: self.d.clone(), a: &self.a * &kq, b: &self.b * &kq }
    }

    /// Conversion to f64 with the conjugate trick when a and b*sqrt(d) nearly
    /// cancel, so the result keeps full relative precision even when the
    /// value is ~1e-30 and the inputs are ~1e30.
    pub fn to_f64(&self) -> f64 {
        let a = rat_to_f64(&self.a);
        let bsd = sci_mul_sqrt(&self.b, &self.d);
        if rat_sign(&self.a) * rat_sign(&self.b) >= 0 {
            return a + bsd;
        }
        // a and b*sqrt(d) have opposite signs: value = norm / conjugate
        let conj = a - bsd;
        if conj == 0.0 {
            return 0.0;
        }
        rat_to_f64(&self.norm()) / conj
    }
}

fn rat_sign(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Rational -> f64, safe for huge numerators/denominators.
pub fn rat_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let (mn, en) = bigint_to_sci(r.numer());
    let (md, ed) = bigint_to_sci(r.denom());
    (mn / md) * 2f64.powi((en - ed) as i32)
}

/// b * sqrt(d) as f64, scale-safe.
fn sci_mul_sqrt(b: &BigRational, d: &BigInt) -> f64 {
    if b.is_zero() {
        return 0.0;
    }
    // sqrt(d) = m^(1/2) * 2^(e/2); keep e even for exactness
    let (mut m, mut e) = bigint_to_sci(d);
    if e % 2 != 0 {
        m *= 2.0;
        e -= 1;
    }
    let sd = m.sqrt() * 2f64.powi((e / 2) as i32);
    rat_to_f64(b) * sd
}

/// Normalized surd (p + sqrt(d))/q with q | d - p^2; always irrational.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadIrr {
    pub p: BigInt,
    pub q: BigInt,
    pub d: BigInt,
}

impl fmt::Debug for QuadIrr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + sqrt({}))/{}", self.p, self.d, self.q)
    }
}

impl QuadIrr {
    /// Build (p + sqrt(d))/q, rescaling to restore the divisibility invariant
    /// q | d - p^2 when necessary. Rejects square d and q = 0.
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>, d: impl Into<BigInt>) -> Result<QuadIrr> {
        let (p, q, d) = (p.into(), q.into(), d.into());
        if q.is_zero() {
            return Err(Error::ZeroSurdDenominator);
        }
        if !d.is_positive() || is_square(&d) {
            return Err(Error::SquareDiscriminant(d.to_string()));
        }
        let rem = (&d - &p * &p) % &q;
        if rem.is_zero() {
            Ok(QuadIrr { p, q, d })
        } else {
            // scale by |q|: ((p|q|) + sqrt(d q^2)) / (q|q|)
            let s = q.abs();
            Ok(QuadIrr { p: &p * &s, q: &q * &s, d: &d * &s * &s })
        }
    }

    /// Golden-ratio fractional part (sqrt(5) - 1)/2 = [0; 1, 1, 1, ...].
    pub fn golden_minus_one() -> QuadIrr {
        QuadIrr::new(-1, 2, 5).unwrap()
    }

    /// sqrt(2) - 1 = [0; 2, 2, 2, ...].
    pub fn sqrt2_minus_one() -> QuadIrr {
        QuadIrr::new(-1, 1, 2).unwrap()
    }

    pub fn to_ext(&self) -> QuadExt {
        QuadExt {
            d: self.d.clone(),
            a: BigRational::new(self.p.clone(), self.q.clone()),
            b: BigRational::new(BigInt::one(), self.q.clone()),
        }
    }

    /// Convert a general field element (necessarily irrational) to surd form.
    pub fn from_ext(x: &QuadExt) -> Result<QuadIrr> {
        if x.is_rational() {
            return Err(Error::RationalPoint);
        }
        // common denominator: x = (A + B sqrt(d)) / C with integers A, B, C
        let den = x.a.denom().lcm(x.b.denom());
        let a_int = (&x.a * BigRational::from(den.clone())).to_integer();
        let b_int = (&x.b * BigRational::from(den.clone())).to_integer();
        // (A + B sqrt(d))/C = (A + sign(B) sqrt(B^2 d))/C
        let d2 = &b_int * &b_int * &x.d;
        if b_int.is_positive() {
            QuadIrr::new(a_int, den, d2)
        } else {
            QuadIrr::new(-a_int, -den, d2)
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_ext().to_f64()
    }

    pub fn signum(&self) -> i32 {
        self.to_ext().signum()
    }

    pub fn floor(&self) -> BigInt {
        self.to_ext().floor()
    }

    pub fn abs(&self) -> QuadIrr {
        if self.signum() < 0 {
            // negate: (p + sqrt d)/q -> (p + sqrt d)/(-q)
            QuadIrr { p: self.p.clone(), q: -self.q.clone(), d: self.d.clone() }
        } else {
            self.clone()
        }
    }

    pub fn neg(&self) -> QuadIrr {
        QuadIrr { p: self.p.clone(), q: -self.q.clone(), d: self.d.clone() }
    }
}

/// Parse "p,q,d" as (p + sqrt(d))/q.
impl std::str::FromStr for QuadIrr {
    type Err = Error;
    fn from_str(s: &str) -> Result<QuadIrr> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidInput(format!("expected p,q,d: {s}")));
        }
        let nums: Vec<BigInt> = parts
            .iter()
            .map(|t| t.trim().parse::<BigInt>().map_err(|e| Error::InvalidInput(e.to_string())))
            .collect::<Result<_>>()?;
        QuadIrr::new(nums[0].clone(), nums[1].clone(), nums[2].clone())
    }
}
