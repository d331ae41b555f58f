//! Exact arithmetic in ℚ(i, √2), optionally scaled by a single positive
//! square-root multiplier √r.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::rational_sqrt;
use super::ExactError;

pub type Q = BigRational;

fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Gaussian rational re + i·im.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gauss {
    pub re: Q,
    pub im: Q,
}

impl Gauss {
    pub fn new(re: Q, im: Q) -> Self {
        Gauss { re, im }
    }

    pub fn zero() -> Self {
        Gauss { re: Q::zero(), im: Q::zero() }
    }

    pub fn one() -> Self {
        Gauss { re: Q::one(), im: Q::zero() }
    }

    pub fn i() -> Self {
        Gauss { re: Q::zero(), im: Q::one() }
    }

    pub fn real(re: Q) -> Self {
        Gauss { re, im: Q::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Gauss) -> Gauss {
        Gauss { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    pub fn sub(&self, o: &Gauss) -> Gauss {
        Gauss { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    pub fn neg(&self) -> Gauss {
        Gauss { re: -&self.re, im: -&self.im }
    }

    pub fn mul(&self, o: &Gauss) -> Gauss {
        if self.im.is_zero() && o.im.is_zero() {
            return Gauss::real(&self.re * &o.re);
        }
        Gauss {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    pub fn scale(&self, k: &Q) -> Gauss {
        Gauss { re: &self.re * k, im: &self.im * k }
    }

    pub fn conj(&self) -> Gauss {
        Gauss { re: self.re.clone(), im: -&self.im }
    }

    pub fn norm_sqr(&self) -> Q {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Gauss> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return None;
        }
        Some(Gauss { re: &self.re / &n, im: -&self.im / &n })
    }
}

/// a + b·√2 with a, b Gaussian rationals. Every element of ℚ(i, √2) has
/// exactly one such representation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Zeta8 {
    pub a: Gauss,
    pub b: Gauss,
}

impl Zeta8 {
    pub fn new(a: Gauss, b: Gauss) -> Self {
        Zeta8 { a, b }
    }

    pub fn zero() -> Self {
        Zeta8 { a: Gauss::zero(), b: Gauss::zero() }
    }

    pub fn one() -> Self {
        Zeta8 { a: Gauss::one(), b: Gauss::zero() }
    }

    pub fn from_gauss(a: Gauss) -> Self {
        Zeta8 { a, b: Gauss::zero() }
    }

    pub fn from_rational(r: Q) -> Self {
        Zeta8::from_gauss(Gauss::real(r))
    }

    pub fn sqrt2() -> Self {
        Zeta8 { a: Gauss::zero(), b: Gauss::one() }
    }

    /// ω^s with ω = e^{iπ/4}.
    pub fn omega(s: u8) -> Self {
        let s = s % 8;
        let ik = match (s / 2) % 4 {
            0 => Gauss::one(),
            1 => Gauss::i(),
            2 => Gauss::one().neg(),
            _ => Gauss::i().neg(),
        };
        if s % 2 == 0 {
            Zeta8::from_gauss(ik)
        } else {
            // i^k · (1+i)/√2 = i^k · (1+i)·√2/2
            let half = Gauss::new(q_frac(1, 2), q_frac(1, 2));
            Zeta8 { a: Gauss::zero(), b: ik.mul(&half) }
        }
    }

    /// (1/√2)^h.
    pub fn sqrt_half(h: u32) -> Self {
        let two = BigInt::from(2);
        if h % 2 == 0 {
            let d = num_traits::pow(two, (h / 2) as usize);
            Zeta8::from_rational(Q::new(BigInt::one(), d))
        } else {
            let d = num_traits::pow(two, (h as usize + 1) / 2);
            Zeta8 { a: Gauss::zero(), b: Gauss::real(Q::new(BigInt::one(), d)) }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.a.im.is_zero() && self.b.im.is_zero()
    }

    pub fn add(&self, o: &Zeta8) -> Zeta8 {
        Zeta8 { a: self.a.add(&o.a), b: self.b.add(&o.b) }
    }

    pub fn sub(&self, o: &Zeta8) -> Zeta8 {
        Zeta8 { a: self.a.sub(&o.a), b: self.b.sub(&o.b) }
    }

    pub fn neg(&self) -> Zeta8 {
        Zeta8 { a: self.a.neg(), b: self.b.neg() }
    }

    pub fn mul(&self, o: &Zeta8) -> Zeta8 {
        let b_zero = self.b.is_zero() && o.b.is_zero();
        if b_zero {
            return Zeta8::from_gauss(self.a.mul(&o.a));
        }
        let mut a = self.a.mul(&o.a);
        let bb = self.b.mul(&o.b);
        if !bb.is_zero() {
            a = a.add(&bb.scale(&q(2)));
        }
        let b = self.a.mul(&o.b).add(&self.b.mul(&o.a));
        Zeta8 { a, b }
    }

    pub fn scale(&self, k: &Q) -> Zeta8 {
        Zeta8 { a: self.a.scale(k), b: self.b.scale(k) }
    }

    pub fn mul_sqrt2(&self) -> Zeta8 {
        Zeta8 { a: self.b.scale(&q(2)), b: self.a.clone() }
    }

    /// Complex conjugate (√2 is real).
    pub fn conj(&self) -> Zeta8 {
        Zeta8 { a: self.a.conj(), b: self.b.conj() }
    }

    pub fn inv(&self) -> Option<Zeta8> {
        // (a + b√2)(a - b√2) = a² - 2b², which is nonzero whenever the
        // element is, because √2 is not a Gaussian rational.
        let n = self.a.mul(&self.a).sub(&self.b.mul(&self.b).scale(&q(2)));
        let ni = n.inv()?;
        Some(Zeta8 { a: self.a.mul(&ni), b: self.b.neg().mul(&ni) })
    }

    pub fn re(&self) -> Zeta8 {
        Zeta8 { a: Gauss::real(self.a.re.clone()), b: Gauss::real(self.b.re.clone()) }
    }

    pub fn im(&self) -> Zeta8 {
        Zeta8 { a: Gauss::real(self.a.im.clone()), b: Gauss::real(self.b.im.clone()) }
    }

    /// |z|², an element of ℚ(√2).
    pub fn norm_sqr(&self) -> Zeta8 {
        self.mul(&self.conj())
    }

    /// Sign of the real part x + y√2, decided exactly.
    pub fn re_sign(&self) -> Ordering {
        sign_sqrt2(&self.a.re, &self.b.re)
    }

    pub fn im_sign(&self) -> Ordering {
        sign_sqrt2(&self.a.im, &self.b.im)
    }

    pub fn to_c64(&self) -> (f64, f64) {
        let s2 = std::f64::consts::SQRT_2;
        let f = |x: &Q| x.to_f64().unwrap_or(f64::NAN);
        (f(&self.a.re) + s2 * f(&self.b.re), f(&self.a.im) + s2 * f(&self.b.im))
    }
}

/// Sign of x + y·√2 for rationals x, y, by comparing x² with 2y².
pub fn sign_sqrt2(x: &Q, y: &Q) -> Ordering {
    let sx = x.cmp(&Q::zero());
    let sy = y.cmp(&Q::zero());
    if sx == sy || sy == Ordering::Equal {
        return sx;
    }
    if sx == Ordering::Equal {
        return sy;
    }
    let x2 = x * x;
    let y2 = y * y * q(2);
    match x2.cmp(&y2) {
        Ordering::Greater => sx,
        Ordering::Less => sy,
        Ordering::Equal => Ordering::Equal,
    }
}

const TRIAL_LIMIT: u64 = 1 << 16;

/// Splits a positive integer into (s, rest) with n = s²·rest, pulling out
/// every square factor with a prime below the trial limit, plus a square
/// cofactor if one remains.
fn split_square(n: &BigUint) -> (BigUint, BigUint) {
    let mut rest = n.clone();
    let mut s = BigUint::one();
    let mut p: u64 = 2;
    while p < TRIAL_LIMIT {
        let pb = BigUint::from(p);
        if &pb * &pb > rest {
            break;
        }
        let p2 = &pb * &pb;
        while (&rest % &p2).is_zero() {
            rest /= &p2;
            s *= &pb;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let r = rest.sqrt();
    if &r * &r == rest && !rest.is_one() {
        s *= &r;
        rest = BigUint::one();
    }
    (s, rest)
}

/// √r · z. The radicand r is a positive odd integer, reduced as far as
/// trial division allows; r = 1 means no multiplier. Zero always carries
/// r = 1.
#[derive(Clone, Debug)]
pub struct Algebraic {
    pub r: BigUint,
    pub z: Zeta8,
}

impl Algebraic {
    pub fn zero() -> Self {
        Algebraic { r: BigUint::one(), z: Zeta8::zero() }
    }

    pub fn one() -> Self {
        Algebraic::from_zeta(Zeta8::one())
    }

    pub fn from_zeta(z: Zeta8) -> Self {
        Algebraic { r: BigUint::one(), z }
    }

    pub fn from_rational(x: Q) -> Self {
        Algebraic::from_zeta(Zeta8::from_rational(x))
    }

    pub fn from_i64(n: i64) -> Self {
        Algebraic::from_rational(q(n))
    }

    /// √x for a rational x ≥ 0.
    pub fn sqrt_rational(x: &Q) -> Result<Self, ExactError> {
        if x.is_negative() {
            return Err(ExactError::NegativeRadicand);
        }
        if x.is_zero() {
            return Ok(Algebraic::zero());
        }
        // √(u/v) = √(uv)/v
        let u = x.numer().magnitude();
        let v = x.denom().magnitude();
        Ok(Algebraic::with_radicand(&(u * v), Zeta8::from_rational(Q::new(BigInt::one(), BigInt::from(v.clone())))))
    }

    /// √n · z, normalizing n into (square part, factor of two, odd rest).
    fn with_radicand(n: &BigUint, z: Zeta8) -> Self {
        if z.is_zero() || n.is_zero() {
            return Algebraic::zero();
        }
        let mut n = n.clone();
        let mut z = z;
        let mut twos = 0u64;
        while n.is_even() {
            n >>= 1;
            twos += 1;
        }
        if twos >= 2 {
            z = z.scale(&Q::from_integer(BigInt::from(BigUint::one() << (twos / 2))));
        }
        if twos % 2 == 1 {
            z = z.mul_sqrt2();
        }
        let (s, rest) = split_square(&n);
        if !s.is_one() {
            z = z.scale(&Q::from_integer(BigInt::from(s)));
        }
        Algebraic { r: rest, z }
    }

    pub fn is_zero(&self) -> bool {
        self.z.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.z.is_real()
    }

    /// Sign of a real value; `None` if the value has an imaginary part.
    pub fn real_sign(&self) -> Option<Ordering> {
        if !self.z.is_real() {
            return None;
        }
        Some(self.z.re_sign())
    }

    /// Expresses `other` over this value's radicand, if the two are
    /// compatible (their ratio is a rational square or twice one).
    fn rebase(&self, other: &Algebraic) -> Option<Zeta8> {
        if other.r == self.r {
            return Some(other.z.clone());
        }
        let ratio = Q::new(BigInt::from(other.r.clone()), BigInt::from(self.r.clone()));
        if let Some(s) = rational_sqrt(&ratio) {
            return Some(other.z.scale(&s));
        }
        if let Some(s) = rational_sqrt(&(ratio / q(2))) {
            return Some(other.z.scale(&s).mul_sqrt2());
        }
        None
    }

    pub fn add(&self, o: &Algebraic) -> Result<Algebraic, ExactError> {
        if self.is_zero() {
            return Ok(o.clone());
        }
        if o.is_zero() {
            return Ok(self.clone());
        }
        let oz = self.rebase(o).ok_or(ExactError::IncompatibleRadicals)?;
        Ok(self.normalized(self.z.add(&oz)))
    }

    pub fn sub(&self, o: &Algebraic) -> Result<Algebraic, ExactError> {
        self.add(&o.neg())
    }

    fn normalized(&self, z: Zeta8) -> Algebraic {
        if z.is_zero() {
            Algebraic::zero()
        } else {
            Algebraic { r: self.r.clone(), z }
        }
    }

    pub fn neg(&self) -> Algebraic {
        Algebraic { r: self.r.clone(), z: self.z.neg() }
    }

    pub fn conj(&self) -> Algebraic {
        Algebraic { r: self.r.clone(), z: self.z.conj() }
    }

    pub fn mul(&self, o: &Algebraic) -> Algebraic {
        if self.is_zero() || o.is_zero() {
            return Algebraic::zero();
        }
        let z = self.z.mul(&o.z);
        if self.r.is_one() {
            return Algebraic { r: o.r.clone(), z };
        }
        if o.r.is_one() {
            return Algebraic { r: self.r.clone(), z };
        }
        // √r1·√r2 = g·√((r1/g)(r2/g)), g = gcd(r1, r2)
        let g = self.r.gcd(&o.r);
        let rest = (&self.r / &g) * (&o.r / &g);
        let z = z.scale(&Q::from_integer(BigInt::from(g)));
        Algebraic::with_radicand(&rest, z)
    }

    pub fn mul_zeta(&self, k: &Zeta8) -> Algebraic {
        self.normalized(self.z.mul(k))
    }

    pub fn scale(&self, k: &Q) -> Algebraic {
        self.normalized(self.z.scale(k))
    }

    pub fn inv(&self) -> Option<Algebraic> {
        // 1/(√r z) = √r / (r z)
        let zi = self.z.inv()?;
        let r = Q::from_integer(BigInt::from(self.r.clone()));
        Some(Algebraic { r: self.r.clone(), z: zi.scale(&(Q::one() / r)) })
    }

    pub fn div(&self, o: &Algebraic) -> Result<Algebraic, ExactError> {
        let oi = o.inv().ok_or(ExactError::DivisionByZero)?;
        Ok(self.mul(&oi))
    }

    pub fn re(&self) -> Algebraic {
        self.normalized(self.z.re())
    }

    pub fn im(&self) -> Algebraic {
        self.normalized(self.z.im())
    }

    /// |v|², always free of the radical multiplier.
    pub fn norm_sqr(&self) -> Algebraic {
        let n = self.z.norm_sqr().scale(&Q::from_integer(BigInt::from(self.r.clone())));
        Algebraic::from_zeta(n)
    }

    pub fn to_c64(&self) -> (f64, f64) {
        let (re, im) = self.z.to_c64();
        let s = self.r.to_f64().unwrap_or(f64::NAN).sqrt();
        (re * s, im * s)
    }

    /// The value as a plain rational, when it is one.
    pub fn as_rational(&self) -> Option<Q> {
        if self.r.is_one() && self.z.b.is_zero() && self.z.a.im.is_zero() {
            Some(self.z.a.re.clone())
        } else {
            None
        }
    }
}

impl PartialEq for Algebraic {
    fn eq(&self, o: &Algebraic) -> bool {
        if self.is_zero() || o.is_zero() {
            return self.is_zero() && o.is_zero();
        }
        match self.rebase(o) {
            Some(oz) => oz == self.z,
            None => false,
        }
    }
}

fn fmt_gauss(g: &Gauss) -> String {
    match (g.re.is_zero(), g.im.is_zero()) {
        (_, true) => g.re.to_string(),
        (true, false) => format!("{}i", g.im),
        (false, false) => {
            if g.im.is_negative() {
                format!("{}-{}i", g.re, -&g.im)
            } else {
                format!("{}+{}i", g.re, g.im)
            }
        }
    }
}

impl fmt::Display for Algebraic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = if self.z.b.is_zero() {
            fmt_gauss(&self.z.a)
        } else if self.z.a.is_zero() {
            format!("({})·√2", fmt_gauss(&self.z.b))
        } else {
            format!("{} + ({})·√2", fmt_gauss(&self.z.a), fmt_gauss(&self.z.b))
        };
        if self.r.is_one() {
            write!(f, "{body}")
        } else {
            write!(f, "√{}·[{body}]", self.r)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_table() {
        let w = Zeta8::omega(1);
        let mut acc = Zeta8::one();
        for s in 0..16u8 {
            assert_eq!(acc, Zeta8::omega(s), "ω^{s}");
            acc = acc.mul(&w);
        }
        assert_eq!(Zeta8::omega(1).mul(&Zeta8::omega(7)), Zeta8::one());
        assert_eq!(Zeta8::omega(2), Zeta8::from_gauss(Gauss::i()));
    }

    #[test]
    fn sqrt_half_squares_to_half() {
        let h = Zeta8::sqrt_half(1);
        assert_eq!(h.mul(&h), Zeta8::from_rational(q_frac(1, 2)));
        assert_eq!(Zeta8::sqrt_half(3), Zeta8::sqrt_half(1).mul(&Zeta8::sqrt_half(2)));
    }

    #[test]
    fn sign_of_a_plus_b_sqrt2() {
        assert_eq!(sign_sqrt2(&q(3), &q(-2)), Ordering::Greater); // 3 - 2.828
        assert_eq!(sign_sqrt2(&q(-3), &q(2)), Ordering::Less);
        assert_eq!(sign_sqrt2(&q(1), &q(-1)), Ordering::Less);
        assert_eq!(sign_sqrt2(&q(0), &q(0)), Ordering::Equal);
    }

    #[test]
    fn radicals_normalize() {
        let a = Algebraic::sqrt_rational(&q_frac(1, 12)).unwrap();
        // √(1/12) = √3/6
        assert_eq!(a.r, BigUint::from(3u32));
        assert_eq!(a.z, Zeta8::from_rational(q_frac(1, 6)));
        let b = Algebraic::sqrt_rational(&q(8)).unwrap();
        assert_eq!(b.r, BigUint::one());
        assert_eq!(b.z, Zeta8::sqrt2().scale(&q(2)));
        assert_eq!(a.mul(&a), Algebraic::from_rational(q_frac(1, 12)));
    }

    #[test]
    fn incompatible_radicals_refuse_to_add() {
        let a = Algebraic::sqrt_rational(&q(3)).unwrap();
        let b = Algebraic::sqrt_rational(&q(5)).unwrap();
        assert_eq!(a.add(&b).unwrap_err(), ExactError::IncompatibleRadicals);
        let c = Algebraic::sqrt_rational(&q(27)).unwrap();
        assert_eq!(a.add(&c).unwrap(), a.scale(&q(4)));
    }
}
