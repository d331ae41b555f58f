//! Sparse Hamiltonians with dual query access: one entry at a time, or the
//! nonzero entries of a row.

mod file;
mod matrix;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::exactnum::{ExactError, ExactValue};
use crate::qstate::StateError;

pub use file::{read_hamfile, write_hamfile, HamFile, StoredHam};
pub use matrix::ExactMatrix;
pub(crate) use matrix::sum;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HamError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error("basis index {index:#x} outside {qubits} qubits")]
    OutOfRange { index: u64, qubits: usize },
    #[error("amplitude of the guiding state is zero at {0:#b}")]
    ZeroAmplitudeVisited(u64),
    #[error("entry ({row:#b}, {col:#b}) is not the conjugate of its transpose")]
    NotHermitian { row: u64, col: u64 },
    #[error("row {row:#b}: support and entries disagree at column {col:#b}")]
    RowSupportMismatch { row: u64, col: u64 },
    #[error("gate {0} is not a Toffoli")]
    NonToffoliGate(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

/// A Hermitian operator on `qubits()` qubits.
pub trait SparseHam: Send + Sync {
    fn qubits(&self) -> usize;
    fn entry(&self, x: u64, y: u64) -> Result<ExactValue, HamError>;
    /// Nonzero entries of row x, sorted by column.
    fn row(&self, x: u64) -> Result<Vec<(u64, ExactValue)>, HamError>;

    fn row_support(&self, x: u64) -> Result<Vec<u64>, HamError> {
        Ok(self.row(x)?.into_iter().map(|(y, _)| y).collect())
    }

    /// True when every entry is known to be real.
    fn is_real(&self) -> bool;

    fn locality(&self) -> Option<usize> {
        None
    }
}

pub type HamRef = Arc<dyn SparseHam>;

pub(crate) fn check_index(h: &dyn SparseHam, x: u64) -> Result<(), HamError> {
    let n = h.qubits();
    if n < 64 && x >> n != 0 {
        return Err(HamError::OutOfRange { index: x, qubits: n });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TermLabel {
    In,
    Out,
    Clock,
    /// Propagation term for step t (1-based).
    Prop(usize),
    Other,
}

impl fmt::Display for TermLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermLabel::In => write!(f, "in"),
            TermLabel::Out => write!(f, "out"),
            TermLabel::Clock => write!(f, "clock"),
            TermLabel::Prop(t) => write!(f, "prop({t})"),
            TermLabel::Other => write!(f, "other"),
        }
    }
}

impl std::str::FromStr for TermLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "in" => TermLabel::In,
            "out" => TermLabel::Out,
            "clock" => TermLabel::Clock,
            "other" => TermLabel::Other,
            _ => {
                let t = s
                    .strip_prefix("prop(")
                    .and_then(|r| r.strip_suffix(')'))
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| format!("unknown term label {s}"))?;
                TermLabel::Prop(t)
            }
        })
    }
}

/// A Hermitian matrix on a few qubits. The first support qubit is the most
/// significant bit of the local index.
#[derive(Clone, Debug)]
pub struct LocalTerm {
    pub support: Vec<usize>,
    pub matrix: ExactMatrix,
    pub label: TermLabel,
    rows: Vec<Vec<(usize, ExactValue)>>,
}

impl PartialEq for LocalTerm {
    fn eq(&self, o: &Self) -> bool {
        self.support == o.support && self.matrix == o.matrix && self.label == o.label
    }
}

impl LocalTerm {
    pub fn new(support: Vec<usize>, matrix: ExactMatrix, label: TermLabel) -> Result<Self, HamError> {
        if matrix.dim() != 1 << support.len() {
            return Err(HamError::Invalid(format!("{}-qubit term with a {}-dim matrix", support.len(), matrix.dim())));
        }
        let mut s = support.clone();
        s.sort_unstable();
        s.dedup();
        if s.len() != support.len() {
            return Err(HamError::Invalid("repeated qubit in term support".into()));
        }
        let rows = (0..matrix.dim()).map(|r| matrix.row_entries(r)).collect();
        Ok(LocalTerm { support, matrix, label, rows })
    }

    pub fn locality(&self) -> usize {
        self.support.len()
    }

    pub fn is_hermitian(&self) -> bool {
        self.matrix.is_hermitian()
    }

    fn mask(&self, n: usize) -> u64 {
        self.support.iter().fold(0, |m, &q| m | 1u64 << (n - 1 - q))
    }

    fn local(&self, x: u64, n: usize) -> usize {
        self.support.iter().fold(0, |acc, &q| (acc << 1) | ((x >> (n - 1 - q)) & 1) as usize)
    }

    fn place(&self, base: u64, idx: usize, n: usize) -> u64 {
        let k = self.support.len();
        self.support.iter().enumerate().fold(base, |acc, (i, &q)| {
            let b = (idx >> (k - 1 - i)) & 1;
            let bit = 1u64 << (n - 1 - q);
            if b == 1 {
                acc | bit
            } else {
                acc & !bit
            }
        })
    }
}

/// Σ_i I ⊗ h_i over local terms.
#[derive(Clone, Debug)]
pub struct LocalSumHam {
    n: usize,
    terms: Vec<LocalTerm>,
    masks: Vec<u64>,
}

impl LocalSumHam {
    pub fn new(n: usize, terms: Vec<LocalTerm>) -> Result<Self, HamError> {
        for t in &terms {
            if let Some(&q) = t.support.iter().find(|&&q| q >= n) {
                return Err(HamError::Invalid(format!("term on qubit {} of {n}", q + 1)));
            }
        }
        let masks = terms.iter().map(|t| t.mask(n)).collect();
        Ok(LocalSumHam { n, terms, masks })
    }

    pub fn terms(&self) -> &[LocalTerm] {
        &self.terms
    }

    /// Qubits pairwise coupled by some term, as adjacency lists.
    pub fn interaction_graph(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![std::collections::BTreeSet::new(); self.n];
        for t in &self.terms {
            for &a in &t.support {
                for &b in &t.support {
                    if a != b {
                        adj[a].insert(b);
                    }
                }
            }
        }
        adj.into_iter().map(|s| s.into_iter().collect()).collect()
    }
}

impl SparseHam for LocalSumHam {
    fn qubits(&self) -> usize {
        self.n
    }

    fn entry(&self, x: u64, y: u64) -> Result<ExactValue, HamError> {
        check_index(self, x)?;
        check_index(self, y)?;
        let diff = x ^ y;
        let mut acc = ExactValue::zero();
        for (t, &m) in self.terms.iter().zip(&self.masks) {
            if diff & !m != 0 {
                continue;
            }
            let v = t.matrix.get(t.local(x, self.n), t.local(y, self.n));
            if !v.is_zero() {
                acc = sum(&acc, v)?;
            }
        }
        Ok(acc)
    }

    fn row(&self, x: u64) -> Result<Vec<(u64, ExactValue)>, HamError> {
        check_index(self, x)?;
        let mut out: BTreeMap<u64, ExactValue> = BTreeMap::new();
        for (t, &m) in self.terms.iter().zip(&self.masks) {
            let base = x & !m;
            for (c, v) in &t.rows[t.local(x, self.n)] {
                let y = t.place(base, *c, self.n);
                let e = out.entry(y).or_insert_with(ExactValue::zero);
                *e = sum(e, v)?;
            }
        }
        Ok(out.into_iter().filter(|(_, v)| !v.is_zero()).collect())
    }

    fn is_real(&self) -> bool {
        self.terms.iter().all(|t| t.matrix.is_real())
    }

    fn locality(&self) -> Option<usize> {
        Some(self.terms.iter().map(|t| t.locality()).max().unwrap_or(0))
    }
}

/// A Hamiltonian stored row by row.
#[derive(Clone, Debug, Default)]
pub struct ExplicitHam {
    n: usize,
    rows: BTreeMap<u64, BTreeMap<u64, ExactValue>>,
}

impl ExplicitHam {
    pub fn new(n: usize) -> Self {
        ExplicitHam { n, rows: BTreeMap::new() }
    }

    /// Sets H(x,y); zero removes the entry.
    pub fn set(&mut self, x: u64, y: u64, v: ExactValue) {
        if v.is_zero() {
            if let Some(r) = self.rows.get_mut(&x) {
                r.remove(&y);
            }
        } else {
            self.rows.entry(x).or_default().insert(y, v);
        }
    }

    /// Sets H(x,y) = v and H(y,x) = v̄.
    pub fn set_hermitian(&mut self, x: u64, y: u64, v: ExactValue) -> Result<(), HamError> {
        let c = v.conj()?;
        self.set(x, y, v);
        if x != y {
            self.set(y, x, c);
        }
        Ok(())
    }

    pub fn from_dense(n: usize, m: &ExactMatrix) -> Self {
        let mut h = ExplicitHam::new(n);
        for x in 0..m.dim() {
            for (y, v) in m.row_entries(x) {
                h.set(x as u64, y as u64, v);
            }
        }
        h
    }

    /// Copies any sparse Hamiltonian row by row.
    pub fn collect(h: &dyn SparseHam) -> Result<Self, HamError> {
        let n = h.qubits();
        if n > 24 {
            return Err(HamError::Invalid(format!("{n} qubits is too many to store")));
        }
        let mut out = ExplicitHam::new(n);
        for x in 0..1u64 << n {
            for (y, v) in h.row(x)? {
                out.set(x, y, v);
            }
        }
        Ok(out)
    }

    pub fn entries(&self) -> impl Iterator<Item = (u64, u64, &ExactValue)> {
        self.rows.iter().flat_map(|(&x, r)| r.iter().map(move |(&y, v)| (x, y, v)))
    }
}

impl SparseHam for ExplicitHam {
    fn qubits(&self) -> usize {
        self.n
    }

    fn entry(&self, x: u64, y: u64) -> Result<ExactValue, HamError> {
        check_index(self, x)?;
        check_index(self, y)?;
        Ok(self.rows.get(&x).and_then(|r| r.get(&y)).cloned().unwrap_or_else(ExactValue::zero))
    }

    fn row(&self, x: u64) -> Result<Vec<(u64, ExactValue)>, HamError> {
        check_index(self, x)?;
        Ok(self.rows.get(&x).map(|r| r.iter().map(|(&y, v)| (y, v.clone())).collect()).unwrap_or_default())
    }

    fn is_real(&self) -> bool {
        self.rows.values().all(|r| r.values().all(|v| v.is_real()))
    }
}

/// Exact H·v for a sparse vector, using rows of H and Hermiticity:
/// (Hv)(y) = Σ_x conj(H(x,y)) v(x).
pub fn apply(h: &dyn SparseHam, v: &BTreeMap<u64, ExactValue>) -> Result<BTreeMap<u64, ExactValue>, HamError> {
    let mut out: BTreeMap<u64, ExactValue> = BTreeMap::new();
    for (&x, vx) in v {
        if vx.is_zero() {
            continue;
        }
        for (y, hxy) in h.row(x)? {
            let term = hxy.conj()?.mul(vx)?;
            let e = out.entry(y).or_insert_with(ExactValue::zero);
            *e = sum(e, &term)?;
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// ⟨v|H|v⟩ for a sparse vector.
pub fn expectation(h: &dyn SparseHam, v: &BTreeMap<u64, ExactValue>) -> Result<ExactValue, HamError> {
    let hv = apply(h, v)?;
    let mut acc = ExactValue::zero();
    for (x, a) in v {
        if let Some(b) = hv.get(x) {
            acc = sum(&acc, &a.conj()?.mul(b)?)?;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pauli_x() -> ExactMatrix {
        ExactMatrix::outer(1, 0, 1).add(&ExactMatrix::outer(1, 1, 0)).unwrap()
    }

    #[test]
    fn local_sum_rows_and_entries() {
        // X on qubit 0 plus |1⟩⟨1| on qubit 2, three qubits
        let h = LocalSumHam::new(
            3,
            vec![
                LocalTerm::new(vec![0], pauli_x(), TermLabel::Other).unwrap(),
                LocalTerm::new(vec![2], ExactMatrix::projector(1, 1), TermLabel::Other).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(h.row(0b001).unwrap(), vec![(0b001, ExactValue::one()), (0b101, ExactValue::one())]);
        assert_eq!(h.entry(0b011, 0b111).unwrap(), ExactValue::one());
        assert!(h.entry(0b011, 0b110).unwrap().is_zero());
        assert_eq!(h.locality(), Some(1));
        assert!(h.is_real());
    }

    #[test]
    fn two_qubit_term_ordering() {
        // |01⟩⟨10| + h.c. on (q2, q0): first support qubit is the high bit
        let m = ExactMatrix::outer(2, 0b01, 0b10).add(&ExactMatrix::outer(2, 0b10, 0b01)).unwrap();
        let h = LocalSumHam::new(3, vec![LocalTerm::new(vec![2, 0], m, TermLabel::Other).unwrap()]).unwrap();
        // x = q0 q1 q2 = 1 0 0 → local (q2,q0) = 01 → 10 → q2=1,q0=0
        assert_eq!(h.row(0b100).unwrap(), vec![(0b001, ExactValue::one())]);
    }

    #[test]
    fn apply_and_expectation() {
        let h = LocalSumHam::new(1, vec![LocalTerm::new(vec![0], pauli_x(), TermLabel::Other).unwrap()]).unwrap();
        let v = BTreeMap::from([(0, ExactValue::one()), (1, ExactValue::from_i64(-1))]);
        let hv = apply(&h, &v).unwrap();
        assert_eq!(hv[&0], ExactValue::from_i64(-1));
        assert_eq!(expectation(&h, &v).unwrap(), ExactValue::from_i64(-2));
    }
}
