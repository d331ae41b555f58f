use std::collections::BTreeMap;

use super::{check_arity, widen_for_gates, AmplitudeQuery, ScaleClass, StateError, StateRef, ZOmega};
use crate::basis;
use crate::circuit::{Gate, GateKind};
use crate::exactnum::{ClassDescriptor, ExactValue};

/// A bra ⟨y|U_L⋯U_1 written as (1/√2)^h · Σ_s c_s ⟨s| with c_s ∈ ℤ[ω].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchPull {
    pub terms: BTreeMap<u64, ZOmega>,
    pub hadamards: u32,
}

impl BranchPull {
    pub fn start(y: u64) -> Self {
        BranchPull { terms: BTreeMap::from([(y, ZOmega::ONE)]), hadamards: 0 }
    }

    /// ⟨·| ↦ ⟨·|G for one gate.
    pub fn through(&mut self, g: &Gate, n: usize) {
        let mut next: BTreeMap<u64, ZOmega> = BTreeMap::new();
        let mut put = |s: u64, c: ZOmega| {
            let e = next.entry(s).or_default();
            *e = e.add(c);
        };
        match g.kind {
            GateKind::H => {
                let q = g.wires()[0];
                for (&s, &c) in &self.terms {
                    let one = basis::bit(s, n, q);
                    put(basis::with_bit(s, n, q, false), c);
                    put(basis::with_bit(s, n, q, true), if one { c.neg() } else { c });
                }
                self.hadamards += 1;
            }
            GateKind::T | GateKind::Tdg => {
                // T|s⟩ = ω^{s[q]}|s⟩, T†|s⟩ = ω^{-s[q]}|s⟩
                let q = g.wires()[0];
                let step = if g.kind == GateKind::T { 1 } else { 7 };
                for (&s, &c) in &self.terms {
                    put(s, if basis::bit(s, n, q) { c.rotate(step) } else { c });
                }
            }
            _ => {
                // classical gates here are all involutions: ⟨s|G = ⟨G s|
                for (&s, &c) in &self.terms {
                    put(g.apply_classical(s, n), c);
                }
            }
        }
        next.retain(|_, c| !c.is_zero());
        self.terms = next;
    }

    /// Pulls back through `gates`, given in application order.
    pub fn through_all(&mut self, gates: &[Gate], n: usize) {
        for g in gates.iter().rev() {
            self.through(g, n);
        }
    }

    /// Applies a classical map to every branch string.
    pub fn map_strings(&mut self, f: impl Fn(u64) -> u64) {
        let mut next: BTreeMap<u64, ZOmega> = BTreeMap::new();
        for (&s, &c) in &self.terms {
            let e = next.entry(f(s)).or_default();
            *e = e.add(c);
        }
        next.retain(|_, c| !c.is_zero());
        self.terms = next;
    }

    /// (1/√2)^h Σ c_s · amp(s).
    pub fn evaluate(&self, mut amp: impl FnMut(u64) -> Result<ExactValue, StateError>) -> Result<ExactValue, StateError> {
        let mut acc = ExactValue::zero();
        for (&s, &c) in &self.terms {
            let v = amp(s)?;
            if v.is_zero() {
                continue;
            }
            let term = zomega_value(c).mul(&v)?;
            acc = if acc.is_zero() { term } else { acc.add(&term)? };
        }
        if acc.is_zero() {
            return Ok(acc);
        }
        Ok(acc.mul(&ExactValue::sqrt_half(self.hadamards))?)
    }
}

/// Single-power coefficients keep their ω tag; sums fall back to the field.
pub(crate) fn zomega_value(c: ZOmega) -> ExactValue {
    let nz: Vec<usize> = (0..4).filter(|&j| c.0[j] != 0).collect();
    if nz.len() == 1 {
        let j = nz[0];
        let k = c.0[j];
        if j == 0 {
            return ExactValue::from_i64(k);
        }
        let (s, k) = if k < 0 { (j as u8 + 4, -k) } else { (j as u8, k) };
        return ExactValue::omega(s).mul(&ExactValue::from_i64(k)).expect("literal product");
    }
    ExactValue::from_algebraic(c.to_algebraic())
}

/// Pushforward of a state through classical gates: a'(x) = a(G⁻¹x).
pub struct ReversibleState {
    base: StateRef,
    gates: Vec<Gate>,
}

/// Pushforward through the first `k` gates, which must all be classical.
pub fn pushforward_reversible(base: StateRef, gates: &[Gate], k: usize) -> Result<ReversibleState, StateError> {
    let k = k.min(gates.len());
    for (i, g) in gates[..k].iter().enumerate() {
        if !g.kind.is_classical() {
            return Err(StateError::NonClassicalGate(i + 1));
        }
    }
    Ok(ReversibleState { base, gates: gates[..k].to_vec() })
}

impl AmplitudeQuery for ReversibleState {
    fn arity(&self) -> usize {
        self.base.arity()
    }

    fn query(&self, x: u64) -> Result<ExactValue, StateError> {
        check_arity(self, x)?;
        let n = self.arity();
        let pre = self.gates.iter().rev().fold(x, |s, g| g.apply_classical(s, n));
        self.base.query(pre)
    }

    fn scale(&self) -> ScaleClass {
        self.base.scale()
    }

    fn codomain(&self) -> ClassDescriptor {
        self.base.codomain()
    }

    fn support_hint(&self) -> Option<Vec<u64>> {
        let n = self.arity();
        let s = self.base.support_hint()?;
        Some(s.into_iter().map(|x| self.gates.iter().fold(x, |s, g| g.apply_classical(s, n))).collect())
    }
}

/// H_q applied to a state: a'(x) = (a(y) + (−1)^{x[q]} a(ȳ))/√2 with y, ȳ
/// the strings with bit q cleared and set.
pub struct HadamardState {
    base: StateRef,
    q: usize,
}

pub fn pushforward_hadamard(base: StateRef, q: usize) -> Result<HadamardState, StateError> {
    if q >= base.arity() {
        return Err(StateError::Invalid(format!("qubit {} outside {} qubits", q + 1, base.arity())));
    }
    Ok(HadamardState { base, q })
}

impl AmplitudeQuery for HadamardState {
    fn arity(&self) -> usize {
        self.base.arity()
    }

    fn query(&self, x: u64) -> Result<ExactValue, StateError> {
        check_arity(self, x)?;
        let mut pull = BranchPull::start(x);
        pull.through(&Gate::h(self.q), self.arity());
        pull.evaluate(|s| self.base.query(s))
    }

    fn scale(&self) -> ScaleClass {
        self.base.scale()
    }

    fn codomain(&self) -> ClassDescriptor {
        widen_for_gates(&self.base.codomain(), 1, false)
    }
}

/// T_q (or T†_q) applied to a state: a'(x) = ω^{±x[q]} a(x).
pub struct PhaseState {
    base: StateRef,
    q: usize,
    dagger: bool,
}

pub fn pushforward_phase(base: StateRef, q: usize, dagger: bool) -> Result<PhaseState, StateError> {
    if q >= base.arity() {
        return Err(StateError::Invalid(format!("qubit {} outside {} qubits", q + 1, base.arity())));
    }
    Ok(PhaseState { base, q, dagger })
}

impl AmplitudeQuery for PhaseState {
    fn arity(&self) -> usize {
        self.base.arity()
    }

    fn query(&self, x: u64) -> Result<ExactValue, StateError> {
        check_arity(self, x)?;
        let v = self.base.query(x)?;
        if !basis::bit(x, self.arity(), self.q) || v.is_zero() {
            return Ok(v);
        }
        Ok(ExactValue::omega(if self.dagger { 7 } else { 1 }).mul(&v)?)
    }

    fn scale(&self) -> ScaleClass {
        self.base.scale()
    }

    fn codomain(&self) -> ClassDescriptor {
        widen_for_gates(&self.base.codomain(), 0, true)
    }

    fn support_hint(&self) -> Option<Vec<u64>> {
        self.base.support_hint()
    }
}

/// Pushforward through an arbitrary gate list. Each query costs one base
/// query per branch, at most 2^(Hadamard count).
pub struct CircuitState {
    base: StateRef,
    gates: Vec<Gate>,
}

pub fn pushforward_circuit(base: StateRef, gates: &[Gate], hadamard_cap: usize) -> Result<CircuitState, StateError> {
    let h = gates.iter().filter(|g| g.kind == GateKind::H).count();
    if h > hadamard_cap {
        return Err(StateError::HadamardBudgetExceeded { count: h, cap: hadamard_cap });
    }
    for g in gates {
        if g.wires().iter().any(|&w| w >= base.arity()) {
            return Err(StateError::Invalid(format!("gate {g} outside {} qubits", base.arity())));
        }
    }
    Ok(CircuitState { base, gates: gates.to_vec() })
}

impl AmplitudeQuery for CircuitState {
    fn arity(&self) -> usize {
        self.base.arity()
    }

    fn query(&self, x: u64) -> Result<ExactValue, StateError> {
        check_arity(self, x)?;
        let mut pull = BranchPull::start(x);
        pull.through_all(&self.gates, self.arity());
        pull.evaluate(|s| self.base.query(s))
    }

    fn scale(&self) -> ScaleClass {
        self.base.scale()
    }

    fn codomain(&self) -> ClassDescriptor {
        let h = self.gates.iter().filter(|g| g.kind == GateKind::H).count();
        let t = self.gates.iter().any(|g| matches!(g.kind, GateKind::T | GateKind::Tdg));
        widen_for_gates(&self.base.codomain(), h, t)
    }
}
