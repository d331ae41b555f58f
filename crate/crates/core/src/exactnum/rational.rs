use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ExactError;

/// A rational kept exactly as written: separate signs and magnitudes for
/// numerator and denominator, no reduction. This mirrors the on-the-wire
/// layout of the signed rational class, so `-6/3` and `2/-7` survive a
/// decode/encode cycle untouched.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedRational {
    pub num_neg: bool,
    pub num: BigUint,
    pub den_neg: bool,
    pub den: BigUint,
}

impl SignedRational {
    pub fn new(num_neg: bool, num: BigUint, den_neg: bool, den: BigUint) -> Result<Self, ExactError> {
        if den.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        Ok(SignedRational { num_neg, num, den_neg, den })
    }

    pub fn from_i64(num: i64, den: i64) -> Result<Self, ExactError> {
        SignedRational::new(
            num < 0,
            BigUint::from(num.unsigned_abs()),
            den < 0,
            BigUint::from(den.unsigned_abs()),
        )
    }

    pub fn zero() -> Self {
        SignedRational { num_neg: false, num: BigUint::zero(), den_neg: false, den: BigUint::one() }
    }

    pub fn one() -> Self {
        SignedRational { num_neg: false, num: BigUint::one(), den_neg: false, den: BigUint::one() }
    }

    /// Reduced form with a positive denominator.
    pub fn from_rational(q: &BigRational) -> Self {
        let (sign, num) = q.numer().clone().into_parts();
        SignedRational {
            num_neg: sign == Sign::Minus,
            num,
            den_neg: false,
            den: q.denom().magnitude().clone(),
        }
    }

    pub fn to_rational(&self) -> BigRational {
        let n = BigInt::from_biguint(if self.num_neg { Sign::Minus } else { Sign::Plus }, self.num.clone());
        let d = BigInt::from_biguint(if self.den_neg { Sign::Minus } else { Sign::Plus }, self.den.clone());
        BigRational::new(n, d)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the value is negative (zero is not).
    pub fn is_negative(&self) -> bool {
        !self.is_zero() && (self.num_neg != self.den_neg)
    }

    pub fn reduced(&self) -> Self {
        SignedRational::from_rational(&self.to_rational())
    }

    /// Magnitude-only copy (both sign bits cleared).
    pub fn abs(&self) -> Self {
        SignedRational { num_neg: false, num: self.num.clone(), den_neg: false, den: self.den.clone() }
    }

    pub fn fits(&self, p: u32) -> bool {
        self.num.bits() <= p as u64 && self.den.bits() <= p as u64
    }
}

impl fmt::Display for SignedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ns = if self.num_neg { "-" } else { "" };
        if self.den.is_one() && !self.den_neg {
            write!(f, "{ns}{}", self.num)
        } else {
            let ds = if self.den_neg { "-" } else { "" };
            write!(f, "{ns}{}/{ds}{}", self.num, self.den)
        }
    }
}

impl FromStr for SignedRational {
    type Err = ExactError;

    /// Accepts `n`, `n/d`, with an optional `-` on either part.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || ExactError::Parse(s.to_string());
        let part = |t: &str| -> Result<(bool, BigUint), ExactError> {
            let t = t.trim();
            let (neg, digits) = match t.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, t.strip_prefix('+').unwrap_or(t)),
            };
            let v = BigUint::from_str(digits.trim()).map_err(|_| bad())?;
            Ok((neg, v))
        };
        match s.split_once('/') {
            Some((n, d)) => {
                let (nn, nv) = part(n)?;
                let (dn, dv) = part(d)?;
                SignedRational::new(nn, nv, dn, dv)
            }
            None => {
                let (nn, nv) = part(s)?;
                SignedRational::new(nn, nv, false, BigUint::one())
            }
        }
    }
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().magnitude();
    let d = q.denom().magnitude();
    let sn = n.sqrt();
    let sd = d.sqrt();
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(BigRational::new(BigInt::from(sn), BigInt::from(sd)))
    } else {
        None
    }
}
