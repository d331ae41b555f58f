use std::fmt;

use crate::exactnum::{ExactError, ExactValue};

/// Small dense square matrix with exact entries, row-major.
#[derive(Clone, PartialEq)]
pub struct ExactMatrix {
    dim: usize,
    data: Vec<ExactValue>,
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix({})", self.dim)?;
        for r in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl ExactMatrix {
    pub fn zeros(dim: usize) -> Self {
        ExactMatrix { dim, data: vec![ExactValue::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = ExactMatrix::zeros(dim);
        for i in 0..dim {
            m.set(i, i, ExactValue::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<ExactValue>>) -> Result<Self, ExactError> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(ExactError::LengthMismatch { expected: dim, found: rows.iter().map(|r| r.len()).find(|&l| l != dim).unwrap_or(0) });
        }
        Ok(ExactMatrix { dim, data: rows.into_iter().flatten().collect() })
    }

    /// |b⟩⟨b| on `bits` qubits.
    pub fn projector(bits: usize, b: usize) -> Self {
        let mut m = ExactMatrix::zeros(1 << bits);
        m.set(b, b, ExactValue::one());
        m
    }

    /// |r⟩⟨c| on `bits` qubits.
    pub fn outer(bits: usize, r: usize, c: usize) -> Self {
        let mut m = ExactMatrix::zeros(1 << bits);
        m.set(r, c, ExactValue::one());
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> &ExactValue {
        &self.data[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: ExactValue) {
        self.data[r * self.dim + c] = v;
    }

    pub fn add(&self, o: &ExactMatrix) -> Result<ExactMatrix, ExactError> {
        assert_eq!(self.dim, o.dim);
        let data = self.data.iter().zip(&o.data).map(|(a, b)| sum(a, b)).collect::<Result<_, _>>()?;
        Ok(ExactMatrix { dim: self.dim, data })
    }

    pub fn sub(&self, o: &ExactMatrix) -> Result<ExactMatrix, ExactError> {
        self.add(&o.scale(&ExactValue::from_i64(-1))?)
    }

    pub fn scale(&self, c: &ExactValue) -> Result<ExactMatrix, ExactError> {
        let data = self
            .data
            .iter()
            .map(|a| if a.is_zero() { Ok(ExactValue::zero()) } else { a.mul(c) })
            .collect::<Result<_, _>>()?;
        Ok(ExactMatrix { dim: self.dim, data })
    }

    pub fn mul(&self, o: &ExactMatrix) -> Result<ExactMatrix, ExactError> {
        assert_eq!(self.dim, o.dim);
        let n = self.dim;
        let mut out = ExactMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = sum(out.get(i, j), &a.mul(b)?)?;
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// A ⊗ B with A on the more significant bits.
    pub fn kron(&self, o: &ExactMatrix) -> Result<ExactMatrix, ExactError> {
        let (n, m) = (self.dim, o.dim);
        let mut out = ExactMatrix::zeros(n * m);
        for i in 0..n {
            for j in 0..n {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        let b = o.get(k, l);
                        if !b.is_zero() {
                            out.set(i * m + k, j * m + l, a.mul(b)?);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> Result<ExactMatrix, ExactError> {
        let n = self.dim;
        let mut out = ExactMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let v = self.get(j, i);
                if !v.is_zero() {
                    out.set(i, j, v.conj()?);
                }
            }
        }
        Ok(out)
    }

    pub fn is_hermitian(&self) -> bool {
        let n = self.dim;
        (0..n).all(|i| (i..n).all(|j| self.get(j, i).conj().map(|c| &c == self.get(i, j)).unwrap_or(false)))
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|v| v.is_zero() || v.is_real())
    }

    /// Exact positive-semidefiniteness by symmetric elimination on positive
    /// pivots. Non-Hermitian input is reported as not PSD.
    pub fn is_psd(&self) -> Result<bool, ExactError> {
        if !self.is_hermitian() {
            return Ok(false);
        }
        let mut w = self.clone();
        let mut active: Vec<usize> = (0..self.dim).collect();
        while !active.is_empty() {
            let mut pivot = None;
            for &i in &active {
                match w.get(i, i).real_sign() {
                    Some(std::cmp::Ordering::Less) => return Ok(false),
                    Some(std::cmp::Ordering::Greater) if pivot.is_none() => pivot = Some(i),
                    _ => {}
                }
            }
            let Some(p) = pivot else {
                // zero diagonal forces zero rows
                return Ok(active.iter().all(|&i| active.iter().all(|&j| w.get(i, j).is_zero())));
            };
            active.retain(|&i| i != p);
            let d = w.get(p, p).clone();
            for &j in &active {
                let wjp = w.get(j, p).clone();
                if wjp.is_zero() {
                    continue;
                }
                let f = wjp.div(&d)?;
                for &k in &active {
                    let wpk = w.get(p, k).clone();
                    if !wpk.is_zero() {
                        let v = w.get(j, k).sub(&f.mul(&wpk)?)?;
                        w.set(j, k, v);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Nonzero entries of row `r` as (column, value).
    pub fn row_entries(&self, r: usize) -> Vec<(usize, ExactValue)> {
        (0..self.dim).filter(|&c| !self.get(r, c).is_zero()).map(|c| (c, self.get(r, c).clone())).collect()
    }
}

/// Sum that keeps a literal when one side is zero.
pub(crate) fn sum(a: &ExactValue, b: &ExactValue) -> Result<ExactValue, ExactError> {
    if a.is_zero() {
        Ok(b.clone())
    } else if b.is_zero() {
        Ok(a.clone())
    } else {
        a.add(b)
    }
}
