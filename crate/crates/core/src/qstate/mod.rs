//! Succinct states: amplitude queries that return c·α(x) exactly for a
//! fixed positive scale c, and the combinators that build new queries from
//! old ones.

mod file;
mod history;
mod ops;
mod pushforward;
mod subset;
mod zomega;

use std::sync::Arc;

use crate::exactnum::{ClassDescriptor, ExactError, ExactValue, Family, Flag};

pub use file::{collect_state, read_statefile, write_statefile};
pub use history::{history_query_circuit, history_query_classical, history_query_stec, HistoryState};
pub use ops::{amp_ratio, amp_ratio_encoded, overlap_product_state, scaled, split_real, ExplicitState, ScaledState, SplitState};
pub use pushforward::{
    pushforward_circuit, pushforward_hadamard, pushforward_phase, pushforward_reversible, BranchPull, CircuitState,
    HadamardState, PhaseState, ReversibleState,
};
pub use subset::{pad_zeros, subset_query, tensor, SubsetSpec, SubsetState, TensorState};
pub use zomega::ZOmega;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum StateError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("gate {0} is not classical")]
    NonClassicalGate(usize),
    #[error("{count} Hadamards in one prefix, budget is {cap}")]
    HadamardBudgetExceeded { count: usize, cap: usize },
    #[error("{needed} queries needed, budget is {budget}")]
    CostExceeded { needed: u128, budget: u128 },
    #[error("amplitude in the denominator is zero")]
    ZeroDenominatorAmplitude,
    #[error("expected {expected} qubits, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("empty subset")]
    EmptySubset,
    #[error("{0}")]
    Invalid(String),
}

/// What is known about the hidden positive scale c of a query.
#[derive(Clone, Debug, PartialEq)]
pub enum ScaleClass {
    /// c is exactly this value.
    Exact(ExactValue),
    /// 0 < c ≤ 2^log2.
    AtMost { log2: u32 },
}

impl ScaleClass {
    pub fn times(&self, o: &ScaleClass) -> ScaleClass {
        match (self, o) {
            (ScaleClass::Exact(a), ScaleClass::Exact(b)) => match a.mul(b) {
                Ok(c) => ScaleClass::Exact(c),
                Err(_) => ScaleClass::AtMost { log2: 64 },
            },
            (a, b) => ScaleClass::AtMost { log2: a.log2_bound() + b.log2_bound() },
        }
    }

    fn log2_bound(&self) -> u32 {
        match self {
            ScaleClass::AtMost { log2 } => *log2,
            ScaleClass::Exact(v) => {
                let f = v.to_f64();
                if f <= 1.0 {
                    0
                } else {
                    f.log2().ceil() as u32
                }
            }
        }
    }
}

/// A queryable amplitude map on `arity()`-bit strings. Queries are total:
/// strings outside the support give exact zero.
pub trait AmplitudeQuery: Send + Sync {
    fn arity(&self) -> usize;
    fn query(&self, x: u64) -> Result<ExactValue, StateError>;
    fn scale(&self) -> ScaleClass;
    fn codomain(&self) -> ClassDescriptor;

    /// Strings that may carry nonzero amplitude, when cheap to list.
    fn support_hint(&self) -> Option<Vec<u64>> {
        None
    }
}

pub type StateRef = Arc<dyn AmplitudeQuery>;

fn family_rank(f: Family) -> u8 {
    match f {
        Family::N => 0,
        Family::QPlus => 1,
        Family::Q => 2,
        Family::C => 3,
    }
}

/// Upper-bound class for products of members of `a` and `b`.
pub fn product_class(a: &ClassDescriptor, b: &ClassDescriptor) -> ClassDescriptor {
    let family = if family_rank(a.family) >= family_rank(b.family) { a.family } else { b.family };
    let p = match family {
        Family::C => 2 * (a.p + b.p) + 1,
        _ => a.p + b.p,
    };
    let mut out = ClassDescriptor::new(family, p);
    if a.has_omega() || b.has_omega() {
        out.flags.push(Flag::Omega);
    }
    match (a.sqrt_half_width(), b.sqrt_half_width()) {
        (None, None) => {}
        (x, y) => out.flags.push(Flag::SqrtHalf(x.unwrap_or(0).max(y.unwrap_or(0)) + 1)),
    }
    match (a.sqrt_width(), b.sqrt_width()) {
        (None, None) => {}
        (x, y) => {
            let w = x.unwrap_or(1).max(y.unwrap_or(1));
            out.flags.push(Flag::Sqrt(if family == Family::C { w } else { 1 }));
        }
    }
    out
}

/// Widens a class to admit signs, a (1/√2) factor and ω phases, as a
/// Clifford+T pushforward may introduce.
pub(crate) fn widen_for_gates(a: &ClassDescriptor, hadamards: usize, phases: bool) -> ClassDescriptor {
    let mut out = a.clone();
    if phases && out.family != Family::C {
        out.family = Family::C;
    } else if hadamards > 0 && family_rank(out.family) < family_rank(Family::Q) {
        out.family = Family::Q;
    }
    if hadamards > 0 {
        out.p += hadamards as u32;
        let bits = usize::BITS - hadamards.leading_zeros();
        let need = out.sqrt_half_width().unwrap_or(0).max(bits);
        out.flags.retain(|f| !matches!(f, Flag::SqrtHalf(_)));
        out.flags.push(Flag::SqrtHalf(need.max(1)));
    }
    if phases && !out.has_omega() {
        out.flags.insert(0, Flag::Omega);
    }
    out
}

pub(crate) fn check_arity(q: &dyn AmplitudeQuery, x: u64) -> Result<(), StateError> {
    let n = q.arity();
    if n < 64 && (x >> n) != 0 {
        return Err(StateError::ArityMismatch { expected: n, found: 64 - x.leading_zeros() as usize });
    }
    Ok(())
}
