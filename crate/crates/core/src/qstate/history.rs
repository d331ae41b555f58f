use num_bigint::BigUint;
use num_rational::BigRational;

use super::pushforward::BranchPull;
use super::{check_arity, product_class, widen_for_gates, AmplitudeQuery, ScaleClass, StateError, StateRef};
use crate::basis;
use crate::circuit::{CircuitDescriptor, Gate, GateKind, StecDescriptor, STEC_BLOCK};
use crate::exactnum::{ClassDescriptor, ExactValue, Family, Flag};

#[derive(Clone, Debug)]
enum Evolution {
    Classical(Vec<Gate>),
    /// Toffoli sources and their 15-gate expansion.
    Stec { toffolis: Vec<Gate>, expanded: Vec<Gate> },
    Generic(Vec<Gate>),
}

impl Evolution {
    fn steps(&self) -> usize {
        match self {
            Evolution::Classical(g) | Evolution::Generic(g) => g.len(),
            Evolution::Stec { expanded, .. } => expanded.len(),
        }
    }

    fn gates(&self) -> &[Gate] {
        match self {
            Evolution::Classical(g) | Evolution::Generic(g) => g,
            Evolution::Stec { expanded, .. } => expanded,
        }
    }
}

/// |η⟩ = Σ_{t=0}^{K} |φ_t⟩|1^t 0^{K−t}⟩, |φ_t⟩ = U_t⋯U_1|φ_0⟩, register
/// bits first and the K unary clock bits last. In normalized mode the
/// amplitudes carry the 1/√(K+1) factor (and 1/√|S| for subset inputs).
pub struct HistoryState {
    base: StateRef,
    evo: Evolution,
    hadamard_cap: usize,
    /// Multiplier applied to every nonzero amplitude.
    factor: Option<ExactValue>,
}

impl HistoryState {
    pub fn steps(&self) -> usize {
        self.evo.steps()
    }

    pub fn register_qubits(&self) -> usize {
        self.base.arity()
    }

    /// Amplitude of ⟨y|U_t⋯U_1|φ_0⟩ before the normalizing factor.
    fn step_amplitude(&self, y: u64, t: usize) -> Result<ExactValue, StateError> {
        let n = self.base.arity();
        match &self.evo {
            Evolution::Classical(g) => {
                let pre = g[..t].iter().rev().fold(y, |s, g| g.apply_classical(s, n));
                self.base.query(pre)
            }
            Evolution::Stec { toffolis, expanded } => {
                // completed blocks act as their Toffoli; only the open block branches
                let (full, rem) = (t / STEC_BLOCK, t % STEC_BLOCK);
                let mut pull = BranchPull::start(y);
                pull.through_all(&expanded[full * STEC_BLOCK..full * STEC_BLOCK + rem], n);
                if pull.hadamards as usize > self.hadamard_cap {
                    return Err(StateError::HadamardBudgetExceeded { count: pull.hadamards as usize, cap: self.hadamard_cap });
                }
                pull.map_strings(|s| toffolis[..full].iter().rev().fold(s, |s, g| g.apply_classical(s, n)));
                pull.evaluate(|s| self.base.query(s))
            }
            Evolution::Generic(g) => {
                let h = g[..t].iter().filter(|g| g.kind == GateKind::H).count();
                if h > self.hadamard_cap {
                    return Err(StateError::HadamardBudgetExceeded { count: h, cap: self.hadamard_cap });
                }
                let mut pull = BranchPull::start(y);
                pull.through_all(&g[..t], n);
                pull.evaluate(|s| self.base.query(s))
            }
        }
    }

    /// Branch-count bound for one query: 2^(Hadamards in the worst prefix).
    pub fn max_branch_hadamards(&self) -> usize {
        match &self.evo {
            Evolution::Classical(_) => 0,
            Evolution::Stec { .. } => 2,
            Evolution::Generic(g) => g.iter().filter(|g| g.kind == GateKind::H).count(),
        }
    }
}

fn build(base: StateRef, evo: Evolution, normalized: bool, hadamard_cap: usize) -> Result<HistoryState, StateError> {
    let k = evo.steps();
    if base.arity() + k > basis::MAX_QUBITS {
        return Err(StateError::Invalid(format!("{} register and {k} clock qubits exceed 64", base.arity())));
    }
    for g in evo.gates() {
        if g.wires().iter().any(|&w| w >= base.arity()) {
            return Err(StateError::Invalid(format!("gate {g} outside {} qubits", base.arity())));
        }
    }
    let factor = normalized
        .then(|| ExactValue::sqrt_of(&BigRational::new(1.into(), (k as u64 + 1).into())))
        .transpose()?;
    Ok(HistoryState { base, evo, hadamard_cap, factor })
}

/// History state of a classical circuit. With `normalized`, amplitudes are
/// exact (a normalized base gives a normalized history state).
pub fn history_query_classical(c: &CircuitDescriptor, base: StateRef, normalized: bool) -> Result<HistoryState, StateError> {
    if let Some(i) = c.gates.iter().position(|g| !g.kind.is_classical()) {
        return Err(StateError::NonClassicalGate(i + 1));
    }
    build(base, Evolution::Classical(c.gates.clone()), normalized, 0)
}

/// History state of a Toffoli circuit run through its Clifford+T
/// expansion; each query branches over at most the two Hadamards of one
/// open block.
pub fn history_query_stec(s: &StecDescriptor, base: StateRef, normalized: bool, hadamard_cap: usize) -> Result<HistoryState, StateError> {
    let evo = Evolution::Stec { toffolis: s.source.gates.clone(), expanded: s.expanded.gates.clone() };
    if hadamard_cap < 2 && !s.source.gates.is_empty() {
        return Err(StateError::HadamardBudgetExceeded { count: 2, cap: hadamard_cap });
    }
    build(base, evo, normalized, hadamard_cap)
}

/// History state of an arbitrary gate list. Queries whose prefix holds
/// more than `hadamard_cap` Hadamards fail.
pub fn history_query_circuit(c: &CircuitDescriptor, base: StateRef, normalized: bool, hadamard_cap: usize) -> Result<HistoryState, StateError> {
    build(base, Evolution::Generic(c.gates.clone()), normalized, hadamard_cap)
}

impl AmplitudeQuery for HistoryState {
    fn arity(&self) -> usize {
        self.base.arity() + self.evo.steps()
    }

    fn query(&self, yz: u64) -> Result<ExactValue, StateError> {
        check_arity(self, yz)?;
        let k = self.evo.steps();
        let (y, z) = basis::split(yz, k);
        let Some(t) = basis::decode_unary(z, k) else {
            return Ok(ExactValue::zero());
        };
        let v = self.step_amplitude(y, t)?;
        match &self.factor {
            Some(f) if !v.is_zero() => Ok(v.mul(f)?),
            _ => Ok(v),
        }
    }

    fn scale(&self) -> ScaleClass {
        match &self.factor {
            Some(_) => self.base.scale(),
            None => {
                let k1 = BigRational::from_integer(BigUint::from(self.evo.steps() + 1).into());
                self.base.scale().times(&ScaleClass::Exact(ExactValue::sqrt_of(&k1).expect("positive")))
            }
        }
    }

    fn codomain(&self) -> ClassDescriptor {
        let body = match &self.evo {
            Evolution::Classical(_) => self.base.codomain(),
            Evolution::Stec { expanded, .. } => {
                let t = expanded.iter().any(|g| matches!(g.kind, GateKind::T | GateKind::Tdg));
                widen_for_gates(&self.base.codomain(), 2.min(self.hadamard_cap), t)
            }
            Evolution::Generic(g) => {
                let h = g.iter().filter(|g| g.kind == GateKind::H).count().min(self.hadamard_cap);
                let t = g.iter().any(|g| matches!(g.kind, GateKind::T | GateKind::Tdg));
                widen_for_gates(&self.base.codomain(), h, t)
            }
        };
        if self.factor.is_none() {
            return body;
        }
        let bits = usize::BITS - (self.evo.steps() + 1).leading_zeros();
        let f = ClassDescriptor::new(Family::QPlus, bits).with_flag(Flag::Sqrt(1));
        product_class(&body, &f)
    }

    fn support_hint(&self) -> Option<Vec<u64>> {
        let Evolution::Classical(g) = &self.evo else {
            return None;
        };
        let n = self.base.arity();
        let k = g.len();
        let s0 = self.base.support_hint()?;
        if s0.len().saturating_mul(k + 1) > 1 << 20 {
            return None;
        }
        let mut out = Vec::with_capacity(s0.len() * (k + 1));
        for x in s0 {
            let mut s = x;
            out.push(basis::concat(s, 0, k));
            for (t, gate) in g.iter().enumerate() {
                s = gate.apply_classical(s, n);
                out.push(basis::concat(s, basis::unary(t + 1, k), k));
            }
        }
        Some(out)
    }
}
