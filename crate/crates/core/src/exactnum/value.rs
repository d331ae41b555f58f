use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::field::{Algebraic, Gauss, Zeta8};
use super::rational::SignedRational;
use super::ExactError;

/// The tagged, unreduced form a value takes inside the encodings:
///
/// ω^omega · (1/√2)^sqrt_half · (R + i·I)
///
/// where R is `re`, or sgn(re)·√|re| when `sqrt_re` is set, and likewise
/// for I.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Literal {
    pub omega: Option<u8>,
    pub sqrt_half: u32,
    pub sqrt_re: bool,
    pub sqrt_im: bool,
    pub re: SignedRational,
    pub im: SignedRational,
}

impl Literal {
    pub fn plain(re: SignedRational, im: SignedRational) -> Self {
        Literal { omega: None, sqrt_half: 0, sqrt_re: false, sqrt_im: false, re, im }
    }

    fn has_sqrt(&self) -> bool {
        (self.sqrt_re && !self.re.is_zero()) || (self.sqrt_im && !self.im.is_zero())
    }

    fn component(q: &SignedRational, sqrt: bool) -> Result<Algebraic, ExactError> {
        let r = q.to_rational();
        if !sqrt {
            return Ok(Algebraic::from_rational(r));
        }
        let s = Algebraic::sqrt_rational(&r.abs())?;
        Ok(if r.is_negative() { s.neg() } else { s })
    }

    pub fn to_algebraic(&self) -> Result<Algebraic, ExactError> {
        let re = Literal::component(&self.re, self.sqrt_re)?;
        let im = Literal::component(&self.im, self.sqrt_im)?.mul_zeta(&Zeta8::from_gauss(Gauss::i()));
        let body = re.add(&im)?;
        let tag = Zeta8::omega(self.omega.unwrap_or(0)).mul(&Zeta8::sqrt_half(self.sqrt_half));
        Ok(body.mul_zeta(&tag))
    }
}

/// An exact scalar. Every value knows its canonical field element; values
/// that came out of a decoder or a tag-preserving product also remember
/// the literal form they were written in, which encoders reuse verbatim.
///
/// Equality is semantic: `-6/3 == -2`.
#[derive(Clone, Debug)]
pub struct ExactValue {
    val: Option<Algebraic>,
    lit: Option<Box<Literal>>,
}

impl ExactValue {
    pub fn zero() -> Self {
        ExactValue::from_algebraic(Algebraic::zero())
    }

    pub fn one() -> Self {
        ExactValue::from_literal(Literal::plain(SignedRational::one(), SignedRational::zero()))
    }

    pub fn from_algebraic(a: Algebraic) -> Self {
        ExactValue { val: Some(a), lit: None }
    }

    /// Wraps a literal. Literals whose two square-root components cannot
    /// share one radical (√3 + i√5) are still valid codec values, but
    /// arithmetic on them fails with `IncompatibleRadicals`.
    pub fn from_literal(l: Literal) -> Self {
        let val = l.to_algebraic().ok();
        ExactValue { val, lit: Some(Box::new(l)) }
    }

    pub fn from_i64(n: i64) -> Self {
        ExactValue::from_literal(Literal::plain(SignedRational::from_i64(n, 1).unwrap(), SignedRational::zero()))
    }

    pub fn from_ratio(n: i64, d: i64) -> Result<Self, ExactError> {
        Ok(ExactValue::from_literal(Literal::plain(SignedRational::from_i64(n, d)?, SignedRational::zero())))
    }

    pub fn from_rational(r: BigRational) -> Self {
        ExactValue::from_literal(Literal::plain(SignedRational::from_rational(&r), SignedRational::zero()))
    }

    pub fn complex(re: SignedRational, im: SignedRational) -> Self {
        ExactValue::from_literal(Literal::plain(re, im))
    }

    /// ω^s.
    pub fn omega(s: u8) -> Self {
        let mut l = Literal::plain(SignedRational::one(), SignedRational::zero());
        l.omega = Some(s % 8);
        ExactValue::from_literal(l)
    }

    /// (1/√2)^h.
    pub fn sqrt_half(h: u32) -> Self {
        let mut l = Literal::plain(SignedRational::one(), SignedRational::zero());
        l.sqrt_half = h;
        ExactValue::from_literal(l)
    }

    /// √x for rational x ≥ 0, written with the square-root flag.
    pub fn sqrt_of(x: &BigRational) -> Result<Self, ExactError> {
        if x.is_negative() {
            return Err(ExactError::NegativeRadicand);
        }
        let mut l = Literal::plain(SignedRational::from_rational(x), SignedRational::zero());
        l.sqrt_re = true;
        l.sqrt_im = true;
        Ok(ExactValue::from_literal(l))
    }

    pub fn literal(&self) -> Option<&Literal> {
        self.lit.as_deref()
    }

    pub fn algebraic(&self) -> Result<&Algebraic, ExactError> {
        self.val.as_ref().ok_or(ExactError::IncompatibleRadicals)
    }

    pub fn is_zero(&self) -> bool {
        match &self.val {
            Some(v) => v.is_zero(),
            None => false,
        }
    }

    pub fn is_real(&self) -> bool {
        self.val.as_ref().map(|v| v.is_real()).unwrap_or(false)
    }

    /// Exact sign of a real value; `None` for non-real values.
    pub fn real_sign(&self) -> Option<Ordering> {
        self.val.as_ref().and_then(|v| v.real_sign())
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.val.as_ref().and_then(|v| v.as_rational())
    }

    pub fn add(&self, o: &ExactValue) -> Result<ExactValue, ExactError> {
        let v = self.algebraic()?.add(o.algebraic()?)?;
        let lit = match (self.literal(), o.literal()) {
            (Some(a), Some(b)) if a.omega == b.omega && a.sqrt_half == b.sqrt_half && !a.has_sqrt() && !b.has_sqrt() => {
                let re = a.re.to_rational() + b.re.to_rational();
                let im = a.im.to_rational() + b.im.to_rational();
                Some(Box::new(Literal {
                    omega: a.omega,
                    sqrt_half: a.sqrt_half,
                    sqrt_re: false,
                    sqrt_im: false,
                    re: SignedRational::from_rational(&re),
                    im: SignedRational::from_rational(&im),
                }))
            }
            _ => None,
        };
        Ok(ExactValue { val: Some(v), lit })
    }

    pub fn sub(&self, o: &ExactValue) -> Result<ExactValue, ExactError> {
        self.add(&o.neg()?)
    }

    pub fn neg(&self) -> Result<ExactValue, ExactError> {
        let v = self.algebraic()?.neg();
        let lit = self.literal().map(|l| {
            let mut l = l.clone();
            l.re.num_neg = !l.re.num_neg && !l.re.is_zero();
            l.im.num_neg = !l.im.num_neg && !l.im.is_zero();
            Box::new(l)
        });
        Ok(ExactValue { val: Some(v), lit })
    }

    /// Products keep the tagged form when both sides have one: ω exponents
    /// add mod 8 and (1/√2) powers add.
    pub fn mul(&self, o: &ExactValue) -> Result<ExactValue, ExactError> {
        let v = self.algebraic()?.mul(o.algebraic()?);
        let lit = match (self.literal(), o.literal()) {
            (Some(a), Some(b)) if !a.has_sqrt() && !b.has_sqrt() => {
                let g = Gauss::new(a.re.to_rational(), a.im.to_rational())
                    .mul(&Gauss::new(b.re.to_rational(), b.im.to_rational()));
                let omega = match (a.omega, b.omega) {
                    (None, None) => None,
                    (x, y) => Some((x.unwrap_or(0) + y.unwrap_or(0)) % 8),
                };
                Some(Box::new(Literal {
                    omega,
                    sqrt_half: a.sqrt_half + b.sqrt_half,
                    sqrt_re: false,
                    sqrt_im: false,
                    re: SignedRational::from_rational(&g.re),
                    im: SignedRational::from_rational(&g.im),
                }))
            }
            (Some(a), Some(b)) if a.im.is_zero() && b.im.is_zero() => {
                // real bodies with a square root: sgn·√(|a|^(1 or 2)·|b|^(1 or 2))
                let rad = |l: &Literal| {
                    let r = l.re.to_rational().abs();
                    if l.sqrt_re {
                        r
                    } else {
                        &r * &r
                    }
                };
                let neg = a.re.is_negative() != b.re.is_negative();
                let r = rad(a) * rad(b);
                let omega = match (a.omega, b.omega) {
                    (None, None) => None,
                    (x, y) => Some((x.unwrap_or(0) + y.unwrap_or(0)) % 8),
                };
                Some(Box::new(Literal {
                    omega,
                    sqrt_half: a.sqrt_half + b.sqrt_half,
                    sqrt_re: true,
                    sqrt_im: true,
                    re: SignedRational::from_rational(&if neg { -r } else { r }),
                    im: SignedRational::zero(),
                }))
            }
            _ => None,
        };
        Ok(ExactValue { val: Some(v), lit })
    }

    pub fn div(&self, o: &ExactValue) -> Result<ExactValue, ExactError> {
        Ok(ExactValue::from_algebraic(self.algebraic()?.div(o.algebraic()?)?))
    }

    pub fn conj(&self) -> Result<ExactValue, ExactError> {
        Ok(ExactValue::from_algebraic(self.algebraic()?.conj()))
    }

    pub fn re(&self) -> Result<ExactValue, ExactError> {
        if let Some(l) = self.literal() {
            if l.omega.unwrap_or(0) == 0 && l.sqrt_half == 0 {
                let mut out = l.clone();
                out.im = SignedRational::zero();
                out.sqrt_im = l.sqrt_re;
                return Ok(ExactValue::from_literal(out));
            }
        }
        Ok(ExactValue::from_algebraic(self.algebraic()?.re()))
    }

    pub fn im(&self) -> Result<ExactValue, ExactError> {
        if let Some(l) = self.literal() {
            if l.omega.unwrap_or(0) == 0 && l.sqrt_half == 0 {
                let out = Literal {
                    omega: None,
                    sqrt_half: 0,
                    sqrt_re: l.sqrt_im,
                    sqrt_im: l.sqrt_im,
                    re: l.im.clone(),
                    im: SignedRational::zero(),
                };
                return Ok(ExactValue::from_literal(out));
            }
        }
        Ok(ExactValue::from_algebraic(self.algebraic()?.im()))
    }

    pub fn norm_sqr(&self) -> Result<ExactValue, ExactError> {
        Ok(ExactValue::from_algebraic(self.algebraic()?.norm_sqr()))
    }

    pub fn to_c64(&self) -> (f64, f64) {
        match &self.val {
            Some(v) => v.to_c64(),
            None => {
                let l = self.lit.as_ref().expect("value without literal or field form");
                let f = |q: &SignedRational, s: bool| {
                    let x = num_traits::ToPrimitive::to_f64(&q.to_rational()).unwrap_or(f64::NAN);
                    if s {
                        x.signum() * x.abs().sqrt()
                    } else {
                        x
                    }
                };
                let (re, im) = (f(&l.re, l.sqrt_re), f(&l.im, l.sqrt_im));
                let ang = std::f64::consts::FRAC_PI_4 * l.omega.unwrap_or(0) as f64;
                let s = std::f64::consts::FRAC_1_SQRT_2.powi(l.sqrt_half as i32);
                let (c, si) = (ang.cos(), ang.sin());
                (s * (re * c - im * si), s * (re * si + im * c))
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_c64().0
    }

    /// Drops the literal form, keeping only the canonical value.
    pub fn canonical(&self) -> Result<ExactValue, ExactError> {
        Ok(ExactValue::from_algebraic(self.algebraic()?.clone()))
    }
}

impl PartialEq for ExactValue {
    fn eq(&self, o: &ExactValue) -> bool {
        match (&self.val, &o.val) {
            (Some(a), Some(b)) => a == b,
            _ => match (self.literal(), o.literal()) {
                (Some(a), Some(b)) => {
                    a.omega.unwrap_or(0) == b.omega.unwrap_or(0)
                        && a.sqrt_half == b.sqrt_half
                        && a.sqrt_re == b.sqrt_re
                        && a.sqrt_im == b.sqrt_im
                        && a.re.to_rational() == b.re.to_rational()
                        && a.im.to_rational() == b.im.to_rational()
                }
                _ => false,
            },
        }
    }
}

impl From<i64> for ExactValue {
    fn from(n: i64) -> Self {
        ExactValue::from_i64(n)
    }
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.val {
            Some(v) => write!(f, "{v}"),
            None => {
                let l = self.lit.as_ref().unwrap();
                let c = |q: &SignedRational, s: bool| if s { format!("±√|{q}|") } else { q.to_string() };
                write!(f, "{} + {}i", c(&l.re, l.sqrt_re), c(&l.im, l.sqrt_im))
            }
        }
    }
}

/// 2^k as a rational.
pub fn pow2(k: u32) -> BigRational {
    BigRational::from_integer(BigInt::one() << k)
}

/// Small helper for tests and fixtures.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_multiply_lazily() {
        let a = ExactValue::omega(1);
        let b = ExactValue::omega(7);
        let p = a.mul(&b).unwrap();
        assert_eq!(p, ExactValue::one());
        assert_eq!(p.literal().unwrap().omega, Some(0));

        let h = ExactValue::sqrt_half(1);
        let hh = h.mul(&h).unwrap();
        assert_eq!(hh.literal().unwrap().sqrt_half, 2);
        assert_eq!(hh.as_rational(), Some(rat(1, 2)));
    }

    #[test]
    fn semantic_equality_ignores_presentation() {
        let a = ExactValue::complex("-6/3".parse().unwrap(), "2/-7".parse().unwrap());
        let b = ExactValue::complex("-2".parse().unwrap(), "-2/7".parse().unwrap());
        assert_eq!(a, b);
        assert!(a.literal() != b.literal());
    }

    #[test]
    fn sqrt_literal_matches_field() {
        let s = ExactValue::sqrt_of(&rat(1, 3)).unwrap();
        assert_eq!(s.mul(&s).unwrap().as_rational(), Some(rat(1, 3)));
        assert_eq!(s.real_sign(), Some(Ordering::Greater));
    }

    #[test]
    fn unmixable_literal_still_decodes() {
        let mut l = Literal::plain(SignedRational::from_i64(3, 1).unwrap(), SignedRational::from_i64(5, 1).unwrap());
        l.sqrt_re = true;
        l.sqrt_im = true;
        let v = ExactValue::from_literal(l);
        assert!(v.algebraic().is_err());
        assert!(v.add(&ExactValue::one()).is_err());
    }
}
