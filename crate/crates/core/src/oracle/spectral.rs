use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{check_cap, DenseState, OracleError};
use crate::exactnum::ExactValue;
use crate::ham::{sum, ExplicitHam, SparseHam};

/// Exact 2^n × 2^n matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseHam {
    n: usize,
    data: Vec<ExactValue>,
}

impl DenseHam {
    pub fn zeros(n: usize) -> Self {
        DenseHam { n, data: vec![ExactValue::zero(); 1 << (2 * n)] }
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn get(&self, x: u64, y: u64) -> &ExactValue {
        &self.data[(x as usize) * self.dim() + y as usize]
    }

    pub fn set(&mut self, x: u64, y: u64, v: ExactValue) {
        let d = self.dim();
        self.data[(x as usize) * d + y as usize] = v;
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|v| v.is_zero() || v.is_real())
    }

    /// First (row, col) where H ≠ H†, if any.
    pub fn hermitian_violation(&self) -> Result<Option<(u64, u64)>, OracleError> {
        let d = self.dim() as u64;
        for x in 0..d {
            for y in x..d {
                if self.get(x, y) != &self.get(y, x).conj()? {
                    return Ok(Some((x, y)));
                }
            }
        }
        Ok(None)
    }

    pub fn apply(&self, v: &DenseState) -> Result<DenseState, OracleError> {
        if v.qubits() != self.n {
            return Err(OracleError::Dimension(format!("{}-qubit vector for {}-qubit matrix", v.qubits(), self.n)));
        }
        let d = self.dim() as u64;
        let mut out = Vec::with_capacity(d as usize);
        for x in 0..d {
            let mut acc = ExactValue::zero();
            for y in 0..d {
                let (h, a) = (self.get(x, y), v.get(y));
                if !h.is_zero() && !a.is_zero() {
                    acc = sum(&acc, &h.mul(a)?)?;
                }
            }
            out.push(acc);
        }
        DenseState::from_amplitudes(self.n, out)
    }

    pub fn to_explicit(&self) -> ExplicitHam {
        let mut e = ExplicitHam::new(self.n);
        let d = self.dim() as u64;
        for x in 0..d {
            for y in 0..d {
                e.set(x, y, self.get(x, y).clone());
            }
        }
        e
    }

    pub fn to_complex(&self) -> DMatrix<Complex64> {
        let d = self.dim();
        DMatrix::from_fn(d, d, |i, j| {
            let (re, im) = self.data[i * d + j].to_c64();
            Complex64::new(re, im)
        })
    }

    pub fn to_real(&self) -> DMatrix<f64> {
        let d = self.dim();
        DMatrix::from_fn(d, d, |i, j| self.data[i * d + j].to_c64().0)
    }
}

/// Builds the dense matrix from row queries, then checks that entry
/// queries agree with the rows (every entry for small n, the listed
/// columns plus a seeded sample otherwise) and that the result is
/// Hermitian.
pub fn densify_ham(h: &dyn SparseHam, cap: usize) -> Result<DenseHam, OracleError> {
    let n = h.qubits();
    check_cap(n, cap)?;
    let mut out = DenseHam::zeros(n);
    let d = 1u64 << n;
    for x in 0..d {
        for (y, v) in h.row(x)? {
            if v.is_zero() {
                return Err(OracleError::RowSupportMismatch { row: x, col: y });
            }
            out.set(x, y, v);
        }
    }
    let full = n <= 6;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for x in 0..d {
        let cols: Vec<u64> = if full {
            (0..d).collect()
        } else {
            let mut c = h.row_support(x)?;
            c.extend((0..16).map(|_| rng.gen_range(0..d)));
            c
        };
        for y in cols {
            if &h.entry(x, y)? != out.get(x, y) {
                return Err(OracleError::RowSupportMismatch { row: x, col: y });
            }
        }
    }
    if let Some((row, col)) = out.hermitian_violation()? {
        return Err(OracleError::NotHermitian { row, col });
    }
    Ok(out)
}

/// Sorted eigenvalues with the worst eigenpair residual ‖Hv − λv‖.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub max_residual: f64,
    /// Largest |λ|.
    pub norm: f64,
}

impl Spectrum {
    pub fn ground(&self) -> f64 {
        self.values[0]
    }
}

fn finish(mut values: Vec<f64>, residuals: impl Iterator<Item = f64>) -> Result<Spectrum, OracleError> {
    let max_residual = residuals.fold(0.0, f64::max);
    let norm = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = 1e-9 * norm.max(1e-300);
    if !(max_residual <= tol) && norm > 0.0 {
        return Err(OracleError::ConvergenceFailure { residual: max_residual, tol });
    }
    values.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    Ok(Spectrum { values, max_residual, norm })
}

/// Full floating-point spectrum of a dense Hermitian matrix.
pub fn spectrum(h: &DenseHam) -> Result<Spectrum, OracleError> {
    if h.is_real() {
        let m = h.to_real();
        let eig = SymmetricEigen::new(m.clone());
        let res = (0..eig.eigenvalues.len()).map(|i| {
            let v: DVector<f64> = eig.eigenvectors.column(i).into();
            (&m * &v - &v * eig.eigenvalues[i]).norm()
        });
        let res: Vec<f64> = res.collect();
        finish(eig.eigenvalues.iter().copied().collect(), res.into_iter())
    } else {
        let m = h.to_complex();
        let eig = SymmetricEigen::new(m.clone());
        let res: Vec<f64> = (0..eig.eigenvalues.len())
            .map(|i| {
                let v: DVector<Complex64> = eig.eigenvectors.column(i).into();
                (&m * &v - &v * Complex64::new(eig.eigenvalues[i], 0.0)).norm()
            })
            .collect();
        finish(eig.eigenvalues.iter().copied().collect(), res.into_iter())
    }
}

/// True iff every off-diagonal entry is ≤ 0, decided exactly.
pub fn stoquastic_check(h: &DenseHam) -> Result<bool, OracleError> {
    if !h.is_real() {
        return Err(OracleError::ComplexEntries);
    }
    let d = h.dim() as u64;
    for x in 0..d {
        for y in 0..d {
            if x != y && h.get(x, y).real_sign() == Some(Ordering::Greater) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ham::{ExactMatrix, LocalSumHam, LocalTerm, TermLabel};

    fn one_qubit(entries: [[i64; 2]; 2]) -> DenseHam {
        let mut h = DenseHam::zeros(1);
        for (x, row) in entries.iter().enumerate() {
            for (y, &v) in row.iter().enumerate() {
                h.set(x as u64, y as u64, ExactValue::from_i64(v));
            }
        }
        h
    }

    #[test]
    fn pauli_z_spectrum() {
        let s = spectrum(&one_qubit([[1, 0], [0, -1]])).unwrap();
        assert_eq!(s.values, vec![-1.0, 1.0]);
    }

    #[test]
    fn minus_x_is_stoquastic() {
        assert!(stoquastic_check(&one_qubit([[0, -1], [-1, 0]])).unwrap());
        assert!(!stoquastic_check(&one_qubit([[0, 1], [1, 0]])).unwrap());
        let mut c = DenseHam::zeros(1);
        c.set(0, 1, ExactValue::omega(2));
        c.set(1, 0, ExactValue::omega(6));
        assert_eq!(stoquastic_check(&c), Err(OracleError::ComplexEntries));
        let s = spectrum(&c).unwrap();
        assert!((s.values[0] + 1.0).abs() < 1e-12 && (s.values[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn densify_checks_hermiticity() {
        let mut m = ExactMatrix::zeros(2);
        m.set(0, 1, ExactValue::one());
        let h = LocalSumHam::new(2, vec![LocalTerm::new(vec![1], m, TermLabel::Other).unwrap()]).unwrap();
        assert!(matches!(densify_ham(&h, 8), Err(OracleError::NotHermitian { .. })));
        assert!(matches!(densify_ham(&h, 1), Err(OracleError::CapExceeded { .. })));
    }
}
