use std::collections::BTreeMap;

use num_rational::BigRational;

use super::{check_arity, AmplitudeQuery, ScaleClass, StateError, StateRef};
use crate::basis;
use crate::exactnum::{encode, fit_class, ratio, BitString, ClassDescriptor, ExactValue, Family, Flag};

/// Real/imaginary split of a complex state onto one extra (last) qubit:
/// φ₁(j‖0) = Re a(j), φ₁(j‖1) = Im a(j); φ₂ negates the b = 1 branch.
/// φ₁ is an eigenvector of the doubled H; φ₂ is one of the doubled H̄.
pub struct SplitState {
    base: StateRef,
    negate_imag: bool,
}

pub fn split_real(a: StateRef) -> (SplitState, SplitState) {
    (SplitState { base: a.clone(), negate_imag: false }, SplitState { base: a, negate_imag: true })
}

impl AmplitudeQuery for SplitState {
    fn arity(&self) -> usize {
        self.base.arity() + 1
    }

    fn query(&self, x: u64) -> Result<ExactValue, StateError> {
        check_arity(self, x)?;
        let (j, b) = basis::split(x, 1);
        let v = self.base.query(j)?;
        if b == 0 {
            return Ok(v.re()?);
        }
        let im = v.im()?;
        Ok(if self.negate_imag { im.neg()? } else { im })
    }

    fn scale(&self) -> ScaleClass {
        self.base.scale()
    }

    fn codomain(&self) -> ClassDescriptor {
        let c = self.base.codomain();
        let mut out = ClassDescriptor::new(Family::Q, c.p);
        if c.has_omega() {
            // Re(ω^s z) picks up one more 1/√2
            out.p += 1;
            let w = c.sqrt_half_width().unwrap_or(0) + 1;
            out.flags.push(Flag::SqrtHalf(w));
        } else if let Some(w) = c.sqrt_half_width() {
            out.flags.push(Flag::SqrtHalf(w));
        }
        if c.sqrt_width().is_some() {
            out.flags.push(Flag::Sqrt(1));
        }
        out
    }

    fn support_hint(&self) -> Option<Vec<u64>> {
        let s = self.base.support_hint()?;
        Some(s.into_iter().flat_map(|j| [basis::concat(j, 0, 1), basis::concat(j, 1, 1)]).collect())
    }
}

/// ⟨σ|ψ⟩ (times the scale of `a`) for a product bra ⟨σ| = ⊗_q ⟨σ_q|, each
/// σ_q given by its two entries. Costs one query per string in the product
/// support; refuses when that count exceeds `budget`.
pub fn overlap_product_state(a: &dyn AmplitudeQuery, sigma: &[[ExactValue; 2]], budget: u128) -> Result<ExactValue, StateError> {
    let n = a.arity();
    if sigma.len() != n {
        return Err(StateError::ArityMismatch { expected: n, found: sigma.len() });
    }
    let mut needed: u128 = 1;
    for s in sigma {
        let k = s.iter().filter(|v| !v.is_zero()).count() as u128;
        needed = needed.saturating_mul(k);
    }
    if needed > budget {
        return Err(StateError::CostExceeded { needed, budget });
    }
    // ⟨σ| = Σ_x Π conj(σ_q[x_q]) ⟨x|
    let mut terms: Vec<(u64, ExactValue)> = vec![(0, ExactValue::one())];
    for (q, s) in sigma.iter().enumerate() {
        let mut next = Vec::with_capacity(terms.len() * 2);
        for (x, c) in &terms {
            for b in 0..2 {
                if s[b].is_zero() {
                    continue;
                }
                next.push((basis::with_bit(*x, n, q, b == 1), c.mul(&s[b].conj()?)?));
            }
        }
        terms = next;
    }
    let mut acc = ExactValue::zero();
    for (x, c) in terms {
        let v = a.query(x)?;
        if !v.is_zero() {
            acc = acc.add(&c.mul(&v)?)?;
        }
    }
    Ok(acc)
}

/// α(x)/α(y) from two queries; the hidden scale cancels.
pub fn amp_ratio(a: &dyn AmplitudeQuery, x: u64, y: u64) -> Result<ExactValue, StateError> {
    let qy = a.query(y)?;
    if qy.is_zero() {
        return Err(StateError::ZeroDenominatorAmplitude);
    }
    if x == y {
        return Ok(ExactValue::one());
    }
    Ok(a.query(x)?.div(&qy)?)
}

/// [`amp_ratio`] carried out on the encoded literals, returning the
/// quotient, its bits and the widened class.
pub fn amp_ratio_encoded(a: &dyn AmplitudeQuery, x: u64, y: u64) -> Result<(ExactValue, BitString, ClassDescriptor), StateError> {
    let qy = a.query(y)?;
    if qy.is_zero() {
        return Err(StateError::ZeroDenominatorAmplitude);
    }
    let qx = a.query(x)?;
    let (v, cls) = ratio(&qx, &qy, &a.codomain())?;
    let bits = encode(&v, &cls)?;
    Ok((v, bits, cls))
}

/// c·a for a positive exact c.
pub struct ScaledState {
    base: StateRef,
    c: ExactValue,
}

pub fn scaled(a: StateRef, c: ExactValue) -> Result<ScaledState, StateError> {
    if c.real_sign() != Some(std::cmp::Ordering::Greater) {
        return Err(StateError::Invalid("scale must be a positive real".into()));
    }
    Ok(ScaledState { base: a, c })
}

impl AmplitudeQuery for ScaledState {
    fn arity(&self) -> usize {
        self.base.arity()
    }

    fn query(&self, x: u64) -> Result<ExactValue, StateError> {
        let v = self.base.query(x)?;
        if v.is_zero() {
            return Ok(v);
        }
        Ok(v.mul(&self.c)?)
    }

    fn scale(&self) -> ScaleClass {
        self.base.scale().times(&ScaleClass::Exact(self.c.clone()))
    }

    fn codomain(&self) -> ClassDescriptor {
        let vals: Vec<ExactValue> = self
            .support_hint()
            .unwrap_or_default()
            .into_iter()
            .filter_map(|x| self.query(x).ok())
            .collect();
        let fam = self.base.codomain().family;
        fit_class(&vals, fam).unwrap_or_else(|_| self.base.codomain())
    }

    fn support_hint(&self) -> Option<Vec<u64>> {
        self.base.support_hint()
    }
}

/// A state listed amplitude by amplitude. The scale is the norm of the
/// listed vector (exact when its square is rational).
#[derive(Clone, Debug)]
pub struct ExplicitState {
    n: usize,
    amps: BTreeMap<u64, ExactValue>,
    codomain: ClassDescriptor,
}

impl ExplicitState {
    pub fn new(n: usize, amps: impl IntoIterator<Item = (u64, ExactValue)>) -> Result<Self, StateError> {
        let mut map = BTreeMap::new();
        for (x, v) in amps {
            if n < 64 && x >> n != 0 {
                return Err(StateError::ArityMismatch { expected: n, found: 64 - x.leading_zeros() as usize });
            }
            if !v.is_zero() {
                map.insert(x, v);
            }
        }
        let vals: Vec<ExactValue> = map.values().cloned().collect();
        let family = if vals.iter().all(|v| v.is_real()) {
            if vals.iter().all(|v| v.real_sign() == Some(std::cmp::Ordering::Greater)) {
                Family::QPlus
            } else {
                Family::Q
            }
        } else {
            Family::C
        };
        let codomain = fit_class(&vals, family)?;
        Ok(ExplicitState { n, amps: map, codomain })
    }

    pub fn amplitudes(&self) -> &BTreeMap<u64, ExactValue> {
        &self.amps
    }

    pub fn norm_sqr(&self) -> Result<ExactValue, StateError> {
        let mut acc = ExactValue::zero();
        for v in self.amps.values() {
            acc = acc.add(&v.norm_sqr()?)?;
        }
        Ok(acc)
    }
}

impl AmplitudeQuery for ExplicitState {
    fn arity(&self) -> usize {
        self.n
    }

    fn query(&self, x: u64) -> Result<ExactValue, StateError> {
        check_arity(self, x)?;
        Ok(self.amps.get(&x).cloned().unwrap_or_else(ExactValue::zero))
    }

    fn scale(&self) -> ScaleClass {
        let ns = self.norm_sqr().ok().and_then(|v| v.as_rational());
        match ns.and_then(|r: BigRational| ExactValue::sqrt_of(&r).ok()) {
            Some(c) => ScaleClass::Exact(c),
            None => {
                let f = self.norm_sqr().map(|v| v.to_f64().sqrt()).unwrap_or(f64::INFINITY);
                ScaleClass::AtMost { log2: f.log2().ceil().max(0.0) as u32 }
            }
        }
    }

    fn codomain(&self) -> ClassDescriptor {
        self.codomain.clone()
    }

    fn support_hint(&self) -> Option<Vec<u64>> {
        Some(self.amps.keys().copied().collect())
    }
}
