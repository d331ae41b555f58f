//! Brute-force ground truth: exact state vectors, dense Hamiltonians and
//! floating-point spectra. Everything here is exponential in the qubit
//! count and refuses to run past a cap.

mod dense;
mod spectral;

use crate::exactnum::ExactError;
use crate::ham::HamError;
use crate::qstate::StateError;

pub use dense::{accept_probability, densify_state, scale_against, simulate, DenseState};
pub use spectral::{densify_ham, spectrum, stoquastic_check, DenseHam, Spectrum};

/// Default qubit cap for dense objects.
pub const DEFAULT_CAP: usize = 14;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("{qubits} qubits exceeds the oracle cap of {cap}")]
    CapExceeded { qubits: usize, cap: usize },
    #[error("no single positive scale explains the amplitude at {at:#b}")]
    InconsistentScale { at: u64 },
    #[error("every amplitude is zero")]
    ZeroState,
    #[error("row {row:#b}: support and entries disagree at column {col:#b}")]
    RowSupportMismatch { row: u64, col: u64 },
    #[error("entry ({row:#b}, {col:#b}) breaks Hermiticity")]
    NotHermitian { row: u64, col: u64 },
    #[error("matrix has non-real entries")]
    ComplexEntries,
    #[error("eigen residual {residual:e} above tolerance {tol:e}")]
    ConvergenceFailure { residual: f64, tol: f64 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Ham(#[from] HamError),
}

pub(crate) fn check_cap(qubits: usize, cap: usize) -> Result<(), OracleError> {
    if qubits > cap {
        return Err(OracleError::CapExceeded { qubits, cap });
    }
    Ok(())
}
