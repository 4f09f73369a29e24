//! Exact numbers of the form `a + b·√k` with a single square-free radicand.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{fmt_rational, serde_rational, to_f64, Rational};

/// `a + b·√k`. When `b == 0` the radicand is normalized to 1, so a purely
/// rational value always compares structurally equal to itself.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Surd {
    #[serde(with = "serde_rational")]
    pub a: Rational,
    #[serde(with = "serde_rational")]
    pub b: Rational,
    pub k: u64,
}

const TRIAL_LIMIT: u64 = 100_000;

impl Surd {
    pub fn new(a: Rational, b: Rational, k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("radicand must be positive".into()));
        }
        let (m, k_free) = square_free_split(&BigInt::from(k));
        let k_free = k_free
            .to_u64()
            .ok_or_else(|| Error::InvalidParameter("radicand too large".into()))?;
        Ok(Self::normalized(a, b * Rational::from_integer(m), k_free))
    }

    pub fn rational(a: Rational) -> Self {
        Self { a, b: Rational::zero(), k: 1 }
    }

    /// `b·√k` with `k` already square-free.
    pub fn radical(b: Rational, k: u64) -> Self {
        Self::normalized(Rational::zero(), b, k)
    }

    fn normalized(a: Rational, b: Rational, k: u64) -> Self {
        if b.is_zero() {
            Self { a, b, k: 1 }
        } else if k == 1 {
            Self { a: a + b, b: Rational::zero(), k: 1 }
        } else {
            Self { a, b, k }
        }
    }

    /// Exact square root of a nonnegative rational.
    pub fn sqrt(q: &Rational) -> Result<Self> {
        if q.is_negative() {
            return Err(Error::InvalidParameter(format!("sqrt of negative {q}")));
        }
        if q.is_zero() {
            return Ok(Self::rational(Rational::zero()));
        }
        // √(p/d) = √(p·d)/d
        let prod = q.numer() * q.denom();
        let (m, k) = square_free_split(&prod);
        let coeff = Rational::new(m, q.denom().clone());
        let k = k
            .to_u64()
            .ok_or_else(|| Error::InvalidParameter("radicand too large".into()))?;
        Ok(Self::normalized(Rational::zero(), coeff, k))
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    fn radicand_with(&self, other: &Surd) -> Result<u64> {
        match (self.is_rational(), other.is_rational()) {
            (true, true) => Ok(1),
            (true, false) => Ok(other.k),
            (false, true) => Ok(self.k),
            (false, false) if self.k == other.k => Ok(self.k),
            _ => Err(Error::MixedRadicals(self.k, other.k)),
        }
    }

    pub fn checked_add(&self, other: &Surd) -> Result<Surd> {
        let k = self.radicand_with(other)?;
        Ok(Self::normalized(&self.a + &other.a, &self.b + &other.b, k))
    }

    pub fn checked_sub(&self, other: &Surd) -> Result<Surd> {
        self.checked_add(&-other.clone())
    }

    pub fn checked_mul(&self, other: &Surd) -> Result<Surd> {
        let k = self.radicand_with(other)?;
        let kr = Rational::from_integer(BigInt::from(k));
        let a = &self.a * &other.a + &self.b * &other.b * kr;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Self::normalized(a, b, k))
    }

    pub fn scale(&self, r: &Rational) -> Surd {
        Self::normalized(&self.a * r, &self.b * r, self.k)
    }

    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&Rational::zero());
        let sb = self.b.cmp(&Rational::zero());
        match (sa, sb) {
            (x, Ordering::Equal) => x,
            (Ordering::Equal, y) => y,
            (x, y) if x == y => x,
            _ => {
                // opposite signs: compare a² with b²k
                let a2 = &self.a * &self.a;
                let b2k = &self.b * &self.b * Rational::from_integer(BigInt::from(self.k));
                let mag = a2.cmp(&b2k);
                if sa == Ordering::Greater {
                    mag
                } else {
                    mag.reverse()
                }
            }
        }
    }

    pub fn checked_cmp(&self, other: &Surd) -> Result<Ordering> {
        Ok(self.checked_sub(other)?.signum())
    }

    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        Self::normalized(&self.a - r, self.b.clone(), self.k).signum()
    }

    pub fn abs(&self) -> Surd {
        if self.signum() == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.a) + to_f64(&self.b) * (self.k as f64).sqrt()
    }
}

impl From<Rational> for Surd {
    fn from(a: Rational) -> Self {
        Self::rational(a)
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd::normalized(-self.a, -self.b, self.k)
    }
}

impl Add for &Surd {
    type Output = Surd;
    /// Panics on mixed radicals; use [`Surd::checked_add`] when they can occur.
    fn add(self, rhs: &Surd) -> Surd {
        self.checked_add(rhs).expect("mixed radicals")
    }
}

impl Sub for &Surd {
    type Output = Surd;
    fn sub(self, rhs: &Surd) -> Surd {
        self.checked_sub(rhs).expect("mixed radicals")
    }
}

impl Mul for &Surd {
    type Output = Surd;
    fn mul(self, rhs: &Surd) -> Surd {
        self.checked_mul(rhs).expect("mixed radicals")
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", fmt_rational(&self.a));
        }
        let radical = if self.b.is_one() {
            format!("√{}", self.k)
        } else if (-&self.b).is_one() {
            format!("-√{}", self.k)
        } else {
            format!("{}·√{}", fmt_rational(&self.b), self.k)
        };
        if self.a.is_zero() {
            write!(f, "{radical}")
        } else if radical.starts_with('-') {
            write!(f, "{}{}", fmt_rational(&self.a), radical)
        } else {
            write!(f, "{}+{}", fmt_rational(&self.a), radical)
        }
    }
}

/// Splits `n > 0` into `(m, k)` with `n = m²·k` and `k` square-free.
///
/// Trial division runs to `TRIAL_LIMIT`; a cofactor left after that is
/// kept whole unless it is a perfect square.
fn square_free_split(n: &BigInt) -> (BigInt, BigInt) {
    let mut rest = n.abs();
    let mut m = BigInt::one();
    let mut k = BigInt::one();
    let mut p = 2u64;
    while p <= TRIAL_LIMIT {
        let pb = BigInt::from(p);
        if &pb * &pb > rest {
            break;
        }
        let mut count = 0u32;
        while (&rest % &pb).is_zero() {
            rest /= &pb;
            count += 1;
        }
        for _ in 0..count / 2 {
            m *= &pb;
        }
        if count % 2 == 1 {
            k *= &pb;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > BigInt::one() {
        let r = rest.sqrt();
        if &r * &r == rest {
            m *= r;
        } else {
            k *= rest;
        }
    }
    (m, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn sqrt_extracts_square_factors() {
        assert_eq!(Surd::sqrt(&int(8)).unwrap(), Surd::radical(int(2), 2));
        assert_eq!(Surd::sqrt(&rat(1, 2)).unwrap(), Surd::radical(rat(1, 2), 2));
        assert_eq!(Surd::sqrt(&rat(9, 4)).unwrap(), Surd::rational(rat(3, 2)));
        assert_eq!(Surd::sqrt(&rat(1, 3)).unwrap(), Surd::radical(rat(1, 3), 3));
    }

    #[test]
    fn sign_analysis() {
        // 1 - √2/2 > 0, 1 - √2 < 0, -3/2 + √3 > 0
        let s = Surd::new(int(1), rat(-1, 2), 2).unwrap();
        assert_eq!(s.signum(), Ordering::Greater);
        let s = Surd::new(int(1), int(-1), 2).unwrap();
        assert_eq!(s.signum(), Ordering::Less);
        let s = Surd::new(rat(-3, 2), int(1), 3).unwrap();
        assert_eq!(s.signum(), Ordering::Greater);
    }

    #[test]
    fn product_of_conjugates_is_rational() {
        let x = Surd::new(int(3), int(1), 2).unwrap();
        let y = Surd::new(int(3), int(-1), 2).unwrap();
        assert_eq!(&x * &y, Surd::rational(int(7)));
    }

    #[test]
    fn mixed_radicals_rejected() {
        let x = Surd::radical(int(1), 2);
        let y = Surd::radical(int(1), 3);
        assert_eq!(x.checked_add(&y), Err(Error::MixedRadicals(2, 3)));
    }

    #[test]
    fn display() {
        assert_eq!(Surd::radical(int(1), 2).to_string(), "√2");
        assert_eq!(Surd::new(int(1), rat(-1, 3), 3).unwrap().to_string(), "1-1/3·√3");
    }
}
