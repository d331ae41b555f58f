use std::collections::BTreeMap;

use super::ClockHam;
use crate::basis;
use crate::exactnum::ExactValue;
use crate::ham::{self, sum, HamError};
use crate::oracle::{DenseState, DEFAULT_CAP};
use crate::qstate::AmplitudeQuery;

/// Strings where the history state can be nonzero. Classical evolutions
/// list them directly; otherwise the register is simulated step by step
/// (register width up to the oracle cap).
pub fn history_support(h: &ClockHam) -> Result<Vec<u64>, HamError> {
    if let Some(s) = h.history.support_hint() {
        return Ok(s);
    }
    let c = &h.circuit;
    let n = c.qubits();
    let k = c.len();
    if n > DEFAULT_CAP {
        return Err(HamError::Invalid(format!("{n}-qubit register is past the simulation cap")));
    }
    // uniform over the initial set; only the support matters here
    let init = h.initial.members(1 << n).ok_or_else(|| HamError::Invalid("initial set too large".into()))?;
    let mut s = DenseState::zeros(n);
    for x in init {
        s.set(x, ExactValue::one());
    }
    let mut out = Vec::new();
    for t in 0..=k {
        if t > 0 {
            s = s.apply_gate(&c.gates[t - 1]).map_err(|e| HamError::Invalid(e.to_string()))?;
        }
        out.extend(s.support().into_iter().map(|r| basis::concat(r, basis::unary(t, k), k)));
    }
    Ok(out)
}

/// Outcome of applying H to its history state exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct AnnihilationReport {
    pub support: usize,
    pub norm_sqr: ExactValue,
    /// ⟨η|H|η⟩.
    pub expectation: ExactValue,
    /// Strings where (H|η⟩)(z) ≠ 0.
    pub nonzero_residuals: usize,
    /// ‖H|η⟩‖ in floating point.
    pub residual_norm: f64,
}

impl AnnihilationReport {
    pub fn annihilated(&self) -> bool {
        self.nonzero_residuals == 0
    }
}

pub fn annihilation_check(h: &ClockHam) -> Result<AnnihilationReport, HamError> {
    let mut eta = BTreeMap::new();
    for z in history_support(h)? {
        let a = h.history.query(z)?;
        if !a.is_zero() {
            eta.insert(z, a);
        }
    }
    let hv = ham::apply(&h.ham, &eta)?;
    let mut norm_sqr = ExactValue::zero();
    let mut expectation = ExactValue::zero();
    for (z, a) in &eta {
        let ac = a.conj()?;
        norm_sqr = sum(&norm_sqr, &ac.mul(a)?)?;
        if let Some(b) = hv.get(z) {
            expectation = sum(&expectation, &ac.mul(b)?)?;
        }
    }
    let residual_norm = hv
        .values()
        .map(|v| {
            let (re, im) = v.to_c64();
            re * re + im * im
        })
        .fold(0.0, |a, b| a + b)
        .sqrt();
    Ok(AnnihilationReport { support: eta.len(), norm_sqr, expectation, nonzero_residuals: hv.len(), residual_norm })
}
