//! Bit-level encoders and decoders for the number classes, and the exact
//! ratio map between a class and its widened quotient class.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::class::{BitString, ClassDescriptor, Family, Flag};
use super::field::{Algebraic, Zeta8};
use super::rational::SignedRational;
use super::value::{ExactValue, Literal};
use super::ExactError;

fn push_uint(out: &mut Vec<bool>, v: &BigUint, width: usize) -> Result<(), ExactError> {
    if v.bits() > width as u64 {
        return Err(ExactError::OutOfRange { width });
    }
    for i in (0..width).rev() {
        out.push(v.bit(i as u64));
    }
    Ok(())
}

fn read_uint(bits: &[bool]) -> BigUint {
    let mut v = BigUint::zero();
    for &b in bits {
        v <<= 1;
        if b {
            v += 1u32;
        }
    }
    v
}

/// Encodes `v` in `cls`. Flags come first in the order the class lists
/// them, then the body, every block most significant bit first.
pub fn encode(v: &ExactValue, cls: &ClassDescriptor) -> Result<BitString, ExactError> {
    cls.validate()?;
    let lit = present(v, cls)?;
    let p = cls.p as usize;
    let mut out = Vec::with_capacity(cls.width());
    for f in &cls.flags {
        match *f {
            Flag::Omega => push_uint(&mut out, &BigUint::from(lit.omega.unwrap_or(0)), 3)?,
            Flag::SqrtHalf(w) => push_uint(&mut out, &BigUint::from(lit.sqrt_half), w as usize)?,
            Flag::Sqrt(1) => out.push(lit.sqrt_re),
            Flag::Sqrt(_) => {
                out.push(lit.sqrt_re);
                out.push(lit.sqrt_im);
            }
        }
    }
    match cls.family {
        Family::N => push_uint(&mut out, &lit.re.num, p)?,
        Family::QPlus => {
            push_uint(&mut out, &lit.re.num, p)?;
            push_uint(&mut out, &lit.re.den, p)?;
        }
        Family::Q => push_signed(&mut out, &lit.re, p)?,
        Family::C => {
            push_signed(&mut out, &lit.re, p)?;
            push_signed(&mut out, &lit.im, p)?;
        }
    }
    debug_assert_eq!(out.len(), cls.width());
    Ok(BitString(out))
}

fn push_signed(out: &mut Vec<bool>, q: &SignedRational, p: usize) -> Result<(), ExactError> {
    out.push(q.num_neg);
    out.push(q.den_neg);
    push_uint(out, &q.num, p)?;
    push_uint(out, &q.den, p)
}

pub fn decode(bits: &BitString, cls: &ClassDescriptor) -> Result<ExactValue, ExactError> {
    cls.validate()?;
    if bits.len() != cls.width() {
        return Err(ExactError::LengthMismatch { expected: cls.width(), found: bits.len() });
    }
    let b = &bits.0;
    let p = cls.p as usize;
    let mut at = 0;
    let mut take = |w: usize| {
        let s = &b[at..at + w];
        at += w;
        s
    };
    let mut lit = Literal::plain(SignedRational::zero(), SignedRational::zero());
    for f in &cls.flags {
        match *f {
            Flag::Omega => {
                let s = read_uint(take(3));
                lit.omega = Some(s.iter_u32_digits().next().unwrap_or(0) as u8);
            }
            Flag::SqrtHalf(w) => {
                let h = read_uint(take(w as usize));
                lit.sqrt_half = u32::try_from(h).map_err(|_| ExactError::OutOfRange { width: 32 })?;
            }
            Flag::Sqrt(1) => {
                let s = take(1)[0];
                lit.sqrt_re = s;
                lit.sqrt_im = s;
            }
            Flag::Sqrt(_) => {
                let s = take(2);
                lit.sqrt_re = s[0];
                lit.sqrt_im = s[1];
            }
        }
    }
    let signed = |s: &[bool]| -> Result<SignedRational, ExactError> {
        SignedRational::new(s[0], read_uint(&s[2..2 + p]), s[1], read_uint(&s[2 + p..2 + 2 * p]))
    };
    match cls.family {
        Family::N => lit.re = SignedRational::new(false, read_uint(take(p)), false, BigUint::one())?,
        Family::QPlus => {
            let n = read_uint(take(p));
            let d = read_uint(take(p));
            lit.re = SignedRational::new(false, n, false, d)?;
        }
        Family::Q => lit.re = signed(take(2 * p + 2))?,
        Family::C => {
            lit.re = signed(take(2 * p + 2))?;
            lit.im = signed(take(2 * p + 2))?;
        }
    }
    Ok(ExactValue::from_literal(lit))
}

/// Finds a literal form of `v` that `cls` can hold. A stored literal is
/// used as written when the class accepts it; otherwise a form is derived
/// from the canonical value.
pub fn present(v: &ExactValue, cls: &ClassDescriptor) -> Result<Literal, ExactError> {
    let mut tag_error = false;
    if let Some(lit) = v.literal() {
        match fit_literal(lit, cls) {
            Ok(l) => return Ok(l),
            Err(ExactError::FlagMismatch) => tag_error = true,
            Err(ExactError::OutOfRange { .. }) | Err(ExactError::NotRepresentable(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let alg = v.algebraic()?;
    let omegas: Vec<u8> = if cls.has_omega() { (0..8).collect() } else { vec![0] };
    let max_h = cls.sqrt_half_width().map(|w| ((1u64 << w.min(16)) - 1).min(8) as u32).unwrap_or(0);
    let mut last = None;
    for s in omegas {
        for h in 0..=max_h {
            // v = ω^s (1/√2)^h w  ⇒  w = v ω^{-s} √2^h
            let mut w = alg.mul_zeta(&Zeta8::omega((8 - s) % 8));
            for _ in 0..h {
                w = w.mul_zeta(&Zeta8::sqrt2());
            }
            let Some(mut lit) = literal_of(&w, cls.sqrt_width()) else { continue };
            if cls.has_omega() {
                lit.omega = Some(s);
            }
            lit.sqrt_half = h;
            match fit_literal(&lit, cls) {
                Ok(l) => return Ok(l),
                Err(e) => last = Some(e),
            }
        }
    }
    if tag_error {
        return Err(ExactError::FlagMismatch);
    }
    Err(last.unwrap_or_else(|| ExactError::NotRepresentable(cls.to_string())))
}

/// Splits √r(x + y√2) into a rational or a signed square root.
fn component_of(r: &BigUint, x: &BigRational, y: &BigRational) -> Option<(bool, BigRational)> {
    if r.is_one() && y.is_zero() {
        return Some((false, x.clone()));
    }
    if !x.is_zero() && !y.is_zero() {
        return None;
    }
    let rr = BigRational::from_integer(BigInt::from(r.clone()));
    let (sq, neg) = if y.is_zero() {
        (x * x * rr, x.is_negative())
    } else {
        (y * y * BigRational::from_integer(BigInt::from(2)) * rr, y.is_negative())
    };
    Some((true, if neg { -sq } else { sq }))
}

fn literal_of(a: &Algebraic, sqrt_width: Option<u32>) -> Option<Literal> {
    let (rs, re) = component_of(&a.r, &a.z.a.re, &a.z.b.re)?;
    let (is, im) = component_of(&a.r, &a.z.a.im, &a.z.b.im)?;
    let (mut rs, mut re, mut is, mut im) = (rs, re, is, im);
    match sqrt_width {
        None if rs || is => return None,
        Some(1) if rs != is => {
            // one shared flag: write the plain side as ±√(q²)
            if !rs {
                re = if re.is_negative() { -(&re * &re) } else { &re * &re };
                rs = true;
            }
            if !is {
                im = if im.is_negative() { -(&im * &im) } else { &im * &im };
                is = true;
            }
        }
        _ => {}
    }
    Some(Literal {
        omega: None,
        sqrt_half: 0,
        sqrt_re: rs,
        sqrt_im: is,
        re: SignedRational::from_rational(&re),
        im: SignedRational::from_rational(&im),
    })
}

/// Checks a literal against a class, adapting it where the value is
/// unchanged (dropping sign bits for the unsigned families, reducing to an
/// integer for N).
fn fit_literal(lit: &Literal, cls: &ClassDescriptor) -> Result<Literal, ExactError> {
    let mut l = lit.clone();
    if l.omega.unwrap_or(0) != 0 && !cls.has_omega() {
        return Err(ExactError::FlagMismatch);
    }
    if !cls.has_omega() {
        l.omega = None;
    } else if l.omega.is_none() {
        l.omega = Some(0);
    }
    if l.sqrt_half != 0 {
        match cls.sqrt_half_width() {
            None => return Err(ExactError::FlagMismatch),
            Some(w) if w < 32 && (l.sqrt_half as u64) >= (1u64 << w) => {
                return Err(ExactError::OutOfRange { width: w as usize })
            }
            _ => {}
        }
    }
    let flagged_re = l.sqrt_re && !l.re.is_zero();
    let flagged_im = l.sqrt_im && !l.im.is_zero();
    match cls.sqrt_width() {
        None => {
            if flagged_re || flagged_im {
                return Err(ExactError::FlagMismatch);
            }
            l.sqrt_re = false;
            l.sqrt_im = false;
        }
        Some(1) => {
            if flagged_re != flagged_im && !(l.re.is_zero() || l.im.is_zero()) {
                return Err(ExactError::FlagMismatch);
            }
            let s = l.sqrt_re || l.sqrt_im;
            let s = if l.re.is_zero() { l.sqrt_im } else if l.im.is_zero() { l.sqrt_re } else { s };
            l.sqrt_re = s;
            l.sqrt_im = s;
        }
        Some(_) => {}
    }
    let p = cls.p;
    match cls.family {
        Family::N | Family::QPlus => {
            if !l.im.is_zero() {
                return Err(ExactError::NotRepresentable(format!("imaginary part in {cls}")));
            }
            if l.re.is_negative() {
                return Err(ExactError::NotRepresentable(format!("negative value in {cls}")));
            }
            l.im = SignedRational::zero();
            l.re = l.re.abs();
            if cls.family == Family::N && !l.re.den.is_one() {
                let r = l.re.reduced();
                if !r.den.is_one() {
                    return Err(ExactError::NotRepresentable(format!("non-integer in {cls}")));
                }
                l.re = r;
            }
        }
        Family::Q => {
            if !l.im.is_zero() {
                return Err(ExactError::NotRepresentable(format!("imaginary part in {cls}")));
            }
            l.im = SignedRational::zero();
        }
        Family::C => {}
    }
    if !l.re.fits(p) || !l.im.fits(p) {
        return Err(ExactError::OutOfRange { width: p as usize });
    }
    Ok(l)
}

fn split(v: BigInt) -> (bool, BigUint) {
    let (s, m) = v.into_parts();
    (s == Sign::Minus, m)
}

fn signed_parts(q: &SignedRational) -> (BigInt, BigInt) {
    let n = BigInt::from_biguint(if q.num_neg { Sign::Minus } else { Sign::Plus }, q.num.clone());
    let d = BigInt::from_biguint(if q.den_neg { Sign::Minus } else { Sign::Plus }, q.den.clone());
    (n, d)
}

/// Smallest class of `family` that holds every value. Flag sets are tried
/// in the order none, 1/√2 power, ω, both, then with a square-root flag.
pub fn fit_class(values: &[ExactValue], family: Family) -> Result<ClassDescriptor, ExactError> {
    let sw = if family == Family::C { 2 } else { 1 };
    let sets: [&[Flag]; 7] = [
        &[],
        &[Flag::SqrtHalf(4)],
        &[Flag::Omega],
        &[Flag::Omega, Flag::SqrtHalf(4)],
        &[Flag::Sqrt(sw)],
        &[Flag::SqrtHalf(4), Flag::Sqrt(sw)],
        &[Flag::Omega, Flag::SqrtHalf(4), Flag::Sqrt(sw)],
    ];
    let mut last = ExactError::NotRepresentable(family.to_string());
    'sets: for flags in sets {
        let mut wide = ClassDescriptor::new(family, 4096);
        wide.flags = flags.to_vec();
        let (mut p, mut h) = (1u32, 0u32);
        for v in values {
            match present(v, &wide) {
                Ok(l) => {
                    for q in [&l.re, &l.im] {
                        p = p.max(q.num.bits() as u32).max(q.den.bits() as u32);
                    }
                    h = h.max(l.sqrt_half);
                }
                Err(e) => {
                    last = e;
                    continue 'sets;
                }
            }
        }
        let mut cls = ClassDescriptor::new(family, p);
        for f in flags {
            cls.flags.push(match f {
                Flag::SqrtHalf(_) => Flag::SqrtHalf((32 - h.leading_zeros()).max(1)),
                f => *f,
            });
        }
        if values.iter().all(|v| encode(v, &cls).is_ok()) {
            return Ok(cls);
        }
    }
    Err(last)
}

/// Exact quotient x/y written in the widened ratio class of `cls`.
pub fn ratio(x: &ExactValue, y: &ExactValue, cls: &ClassDescriptor) -> Result<(ExactValue, ClassDescriptor), ExactError> {
    let out_cls = cls.ratio_class()?;
    let a = present(x, cls)?;
    let b = present(y, cls)?;
    if b.re.is_zero() && b.im.is_zero() {
        return Err(ExactError::DivisionByZero);
    }
    let mut lit = Literal::plain(SignedRational::zero(), SignedRational::zero());
    if cls.has_omega() {
        let s = (8 + a.omega.unwrap_or(0) - b.omega.unwrap_or(0)) % 8;
        lit.omega = Some(s);
    }
    match cls.family {
        Family::N => {
            lit.re = SignedRational::new(false, a.re.num.clone(), false, b.re.num.clone())?;
        }
        Family::QPlus => {
            lit.re = SignedRational::new(false, &a.re.num * &b.re.den, false, &a.re.den * &b.re.num)?;
        }
        Family::Q => {
            lit.re = SignedRational::new(
                a.re.num_neg ^ b.re.den_neg,
                &a.re.num * &b.re.den,
                a.re.den_neg ^ b.re.num_neg,
                &a.re.den * &b.re.num,
            )?;
        }
        Family::C => {
            // z/w = ((ac + bd) + i(bc - ad)) / (c² + d²)
            let (an, ad) = signed_parts(&a.re);
            let (bn, bd) = signed_parts(&a.im);
            let (cn, cd) = signed_parts(&b.re);
            let (dn, dd) = signed_parts(&b.im);
            let common = &ad * &bd * &cd * &dd;
            let n_re = &an * &cn * &bd * &dd + &bn * &dn * &ad * &cd;
            let n_im = &bn * &cn * &ad * &dd - &an * &dn * &bd * &cd;
            let mod_num = &cn * &cn * &dd * &dd + &dn * &dn * &cd * &cd;
            let mod_den = &cd * &cd * &dd * &dd;
            let den = common * mod_num;
            let (den_neg, den_mag) = split(den);
            let (rn, rm) = split(n_re * &mod_den);
            let (inn, im_) = split(n_im * &mod_den);
            lit.re = SignedRational::new(rn, rm, den_neg, den_mag.clone())?;
            lit.im = SignedRational::new(inn, im_, den_neg, den_mag)?;
        }
    }
    let v = ExactValue::from_literal(lit);
    debug_assert!(encode(&v, &out_cls).is_ok());
    Ok((v, out_cls))
}
