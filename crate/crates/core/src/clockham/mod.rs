//! Clock Hamiltonians for semi-classical verification circuits, with the
//! history state each one is built around.
//!
//! Register qubits come first, then the unary clock c_1, …, c_S. Legal
//! clock words are 1^t 0^(S−t).

mod audit;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::basis;
use crate::circuit::{CircuitDescriptor, Gate, GateKind, QubitRole, StecDescriptor};
use crate::exactnum::ExactValue;
use crate::ham::{ExactMatrix, HamError, HamRef, LocalSumHam, LocalTerm, TermLabel};
use crate::qstate::{history_query_classical, history_query_stec, subset_query, HistoryState, StateRef, SubsetSpec};

pub use audit::{annihilation_check, history_support, AnnihilationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    FourLocal,
    ThreeLocal,
    Sparse6,
}

impl Variant {
    pub fn locality_bound(self) -> usize {
        match self {
            Variant::FourLocal => 4,
            Variant::ThreeLocal => 3,
            Variant::Sparse6 => 6,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::FourLocal => "4local",
            Variant::ThreeLocal => "3local",
            Variant::Sparse6 => "sparse6",
        })
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "4local" => Ok(Variant::FourLocal),
            "3local" => Ok(Variant::ThreeLocal),
            "sparse6" => Ok(Variant::Sparse6),
            _ => Err(format!("unknown variant {s} (expected 4local, 3local or sparse6)")),
        }
    }
}

/// A clock Hamiltonian together with its history state.
pub struct ClockHam {
    pub variant: Variant,
    pub ham: LocalSumHam,
    pub history: Arc<HistoryState>,
    /// The circuit whose gates the clock steps through.
    pub circuit: CircuitDescriptor,
    /// Initial register state used for the history state.
    pub initial: SubsetSpec,
}

impl ClockHam {
    pub fn register_qubits(&self) -> usize {
        self.circuit.qubits()
    }

    pub fn clock_qubits(&self) -> usize {
        self.circuit.len()
    }

    pub fn total_qubits(&self) -> usize {
        self.register_qubits() + self.clock_qubits()
    }

    pub fn as_sparse(&self) -> HamRef {
        Arc::new(self.ham.clone())
    }

    /// Every term acts on at most the variant's locality bound.
    pub fn locality_ok(&self) -> bool {
        self.ham.terms().iter().all(|t| t.locality() <= self.variant.locality_bound())
    }

    /// Exact check that each term has real, nonpositive off-diagonals.
    pub fn terms_stoquastic(&self) -> bool {
        self.ham.terms().iter().all(|t| term_stoquastic(&t.matrix))
    }

    /// Every term is positive semidefinite, decided exactly. With
    /// H|η⟩ = 0 this certifies λ₀ = 0.
    pub fn terms_psd(&self) -> Result<bool, HamError> {
        for t in self.ham.terms() {
            if !t.matrix.is_psd()? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn max_degree(&self) -> usize {
        self.ham.interaction_graph().iter().map(|a| a.len()).max().unwrap_or(0)
    }
}

pub(crate) fn term_stoquastic(m: &ExactMatrix) -> bool {
    (0..m.dim()).all(|r| {
        (0..m.dim()).all(|c| {
            let v = m.get(r, c);
            r == c || v.is_zero() || (v.is_real() && v.real_sign() == Some(std::cmp::Ordering::Less))
        })
    })
}

fn x_matrix() -> ExactMatrix {
    ExactMatrix::outer(1, 0, 1).add(&ExactMatrix::outer(1, 1, 0)).expect("exact")
}

fn half() -> ExactValue {
    ExactValue::from_ratio(1, 2).expect("nonzero denominator")
}

/// |−⟩⟨−| = (I − X)/2.
fn minus_projector() -> Result<ExactMatrix, HamError> {
    Ok(ExactMatrix::identity(2).sub(&x_matrix())?.scale(&half())?)
}

/// |bits⟩⟨bits| on the given qubits (first qubit most significant).
fn projector_term(qubits: Vec<usize>, bits: &[bool], scale: Option<&ExactValue>, label: TermLabel) -> Result<LocalTerm, HamError> {
    let idx = bits.iter().fold(0usize, |a, &b| (a << 1) | b as usize);
    let mut m = ExactMatrix::projector(bits.len(), idx);
    if let Some(s) = scale {
        m = m.scale(s)?;
    }
    LocalTerm::new(qubits, m, label)
}

/// Matrix of a gate as an ExactMatrix on its own wires.
fn gate_matrix(g: &Gate) -> Result<ExactMatrix, HamError> {
    Ok(ExactMatrix::from_rows(g.matrix())?)
}

/// U ⊗ |to⟩⟨from| + U† ⊗ |from⟩⟨to| on the gate wires followed by the
/// clock window, scaled by −c.
fn transition(g: &Gate, n_clock: usize, from: usize, to: usize, c: &ExactValue) -> Result<ExactMatrix, HamError> {
    let u = gate_matrix(g)?;
    let fwd = u.kron(&ExactMatrix::outer(n_clock, to, from))?;
    let back = u.adjoint()?.kron(&ExactMatrix::outer(n_clock, from, to))?;
    Ok(fwd.add(&back)?.scale(&c.neg()?)?)
}

fn check_input(c: &CircuitDescriptor, x: u64, xi: u64) -> Result<(), HamError> {
    let r = c.regs;
    if (r.n < 64 && x >> r.n != 0) || (r.w < 64 && xi >> r.w != 0) {
        return Err(HamError::Invalid(format!("input or proof longer than the {}+{} register", r.n, r.w)));
    }
    Ok(())
}

/// H_in at the first clock step: each register qubit penalized against its
/// initial value while c_1 = 0 (inputs, |0⟩ ancillas, |+⟩ coins; proof
/// qubits are free).
fn input_terms(c: &CircuitDescriptor, x: u64, clock_window: impl Fn(usize) -> (Vec<usize>, Vec<bool>)) -> Result<Vec<LocalTerm>, HamError> {
    let r = c.regs;
    let mut out = Vec::new();
    for (q, role) in c.roles().into_iter().enumerate() {
        let (cq, cb) = clock_window(q);
        let cidx = cb.iter().fold(0usize, |a, &b| (a << 1) | b as usize);
        let window = ExactMatrix::projector(cb.len(), cidx);
        let reg = match role {
            QubitRole::Input(i) => ExactMatrix::projector(1, !basis::bit(x, r.n, i) as usize),
            QubitRole::Zero => ExactMatrix::projector(1, 1),
            QubitRole::Plus => minus_projector()?,
            QubitRole::Proof(_) => continue,
        };
        let mut support = vec![q];
        support.extend(cq);
        out.push(LocalTerm::new(support, reg.kron(&window)?, TermLabel::In)?);
    }
    Ok(out)
}

/// Feynman–Kitaev terms with one clock qubit per propagation flip, shared
/// by the 4-local and 3-local builders.
fn single_flip_terms(c: &CircuitDescriptor, x: u64) -> Result<Vec<LocalTerm>, HamError> {
    let nreg = c.qubits();
    let k = c.len();
    let clock = |t: usize| nreg + t - 1; // c_t, 1-based
    let mut terms = input_terms(c, x, |_| (vec![clock(1)], vec![false]))?;
    terms.push(projector_term(vec![c.output_qubit(), clock(k)], &[false, true], None, TermLabel::Out)?);
    let penalty = ExactValue::from_rational(BigRational::from_integer(BigInt::from(k).pow(12)));
    for i in 1..=k {
        for j in i + 1..=k {
            terms.push(projector_term(vec![clock(i), clock(j)], &[false, true], Some(&penalty), TermLabel::Clock)?);
        }
    }
    let h = half();
    for (idx, g) in c.gates.iter().enumerate() {
        let t = idx + 1;
        let lab = TermLabel::Prop(t);
        if k == 1 {
            // both boundary cases at once: |0⟩⟨0| + |1⟩⟨1| on c_1
            terms.push(LocalTerm::new(vec![clock(1)], ExactMatrix::identity(2).scale(&h)?, lab)?);
        } else if t == 1 {
            terms.push(projector_term(vec![clock(1), clock(2)], &[true, false], Some(&h), lab)?);
            terms.push(projector_term(vec![clock(1)], &[false], Some(&h), lab)?);
        } else if t == k {
            terms.push(projector_term(vec![clock(k)], &[true], Some(&h), lab)?);
            terms.push(projector_term(vec![clock(k - 1), clock(k)], &[true, false], Some(&h), lab)?);
        } else {
            terms.push(projector_term(vec![clock(t), clock(t + 1)], &[true, false], Some(&h), lab)?);
            terms.push(projector_term(vec![clock(t - 1), clock(t)], &[true, false], Some(&h), lab)?);
        }
        let mut support = g.wires().to_vec();
        support.push(clock(t));
        terms.push(LocalTerm::new(support, transition(g, 1, 0, 1, &h)?, lab)?);
    }
    Ok(terms)
}

fn initial_state(c: &CircuitDescriptor, x: u64, xi: u64) -> (SubsetSpec, StateRef) {
    let s = SubsetSpec::mpq_initial(c, x, xi);
    let q: StateRef = Arc::new(subset_query(s.clone(), true).expect("product sets are nonempty"));
    (s, q)
}

/// 4-local stoquastic construction for a Toffoli circuit.
pub fn build_4local(c: &CircuitDescriptor, x: u64, xi: u64) -> Result<ClockHam, HamError> {
    if let Some(i) = c.gates.iter().position(|g| g.kind != GateKind::Tof) {
        return Err(HamError::NonToffoliGate(i + 1));
    }
    if c.is_empty() {
        return Err(HamError::Invalid("the clock needs at least one gate".into()));
    }
    check_input(c, x, xi)?;
    let terms = single_flip_terms(c, x)?;
    let ham = LocalSumHam::new(c.qubits() + c.len(), terms)?;
    let (initial, base) = initial_state(c, x, xi);
    let history = Arc::new(history_query_classical(c, base, true)?);
    Ok(ClockHam { variant: Variant::FourLocal, ham, history, circuit: c.clone(), initial })
}

/// Same clock scheme over the Clifford+T expansion: 3-local, complex.
pub fn build_3local(s: &StecDescriptor, x: u64, xi: u64) -> Result<ClockHam, HamError> {
    let c = &s.expanded;
    if c.is_empty() {
        return Err(HamError::Invalid("the clock needs at least one gate".into()));
    }
    check_input(c, x, xi)?;
    let terms = single_flip_terms(c, x)?;
    let ham = LocalSumHam::new(c.qubits() + c.len(), terms)?;
    let (initial, base) = initial_state(c, x, xi);
    let history = Arc::new(history_query_stec(s, base, true, 2)?);
    Ok(ClockHam { variant: Variant::ThreeLocal, ham, history, circuit: c.clone(), initial })
}

/// Clock qubits and pattern singling out clock value t − 1 just before
/// step t: (c_{t−1}, c_t, c_{t+1}) = (1, 0, 0), clipped at the ends.
fn window_before(t: usize, s: usize, clock: impl Fn(usize) -> usize) -> (Vec<usize>, Vec<bool>) {
    let mut q = Vec::new();
    let mut b = Vec::new();
    if t > 1 {
        q.push(clock(t - 1));
        b.push(true);
    }
    q.push(clock(t));
    b.push(false);
    if t < s {
        q.push(clock(t + 1));
        b.push(false);
    }
    (q, b)
}

/// Spatially sparse 6-local construction over an already sparsified
/// classical circuit, one clock qubit per gate.
pub fn build_sparse6(c: &CircuitDescriptor, x: u64, xi: u64) -> Result<ClockHam, HamError> {
    if let Some(i) = c.gates.iter().position(|g| !g.kind.is_classical()) {
        return Err(HamError::Invalid(format!("gate {} is not classical", i + 1)));
    }
    if c.is_empty() {
        return Err(HamError::Invalid("the clock needs at least one gate".into()));
    }
    check_input(c, x, xi)?;
    let nreg = c.qubits();
    let s = c.len();
    let clock = |t: usize| nreg + t - 1;
    // first step touching each register qubit
    let mut first = vec![None; nreg];
    for (i, g) in c.gates.iter().enumerate() {
        for &w in g.wires() {
            first[w].get_or_insert(i + 1);
        }
    }
    if let Some(q) = first.iter().position(|f| f.is_none()) {
        return Err(HamError::Invalid(format!("qubit {} is never acted on", q + 1)));
    }
    let mut terms = input_terms(c, x, |q| window_before(first[q].unwrap(), s, clock))?;
    terms.push(projector_term(vec![c.output_qubit(), clock(s)], &[false, true], None, TermLabel::Out)?);
    for t in 1..s {
        terms.push(projector_term(vec![clock(t), clock(t + 1)], &[false, true], None, TermLabel::Clock)?);
    }
    let one = ExactValue::one();
    for (idx, g) in c.gates.iter().enumerate() {
        let t = idx + 1;
        // clock window and the local patterns for clock t−1 and clock t
        let (cq, from, to): (Vec<usize>, usize, usize) = if s == 1 {
            (vec![clock(1)], 0b0, 0b1)
        } else if t == 1 {
            (vec![clock(1), clock(2)], 0b00, 0b10)
        } else if t == s {
            (vec![clock(s - 1), clock(s)], 0b10, 0b11)
        } else {
            (vec![clock(t - 1), clock(t), clock(t + 1)], 0b100, 0b110)
        };
        let nc = cq.len();
        let dim_g = 1usize << g.wires().len();
        let diag = ExactMatrix::identity(dim_g)
            .kron(&ExactMatrix::projector(nc, from).add(&ExactMatrix::projector(nc, to))?)?;
        let m = diag.add(&transition(g, nc, from, to, &one)?)?;
        let mut support = g.wires().to_vec();
        support.extend(cq);
        terms.push(LocalTerm::new(support, m, TermLabel::Prop(t))?);
    }
    let ham = LocalSumHam::new(nreg + s, terms)?;
    let (initial, base) = initial_state(c, x, xi);
    let history = Arc::new(history_query_classical(c, base, true)?);
    Ok(ClockHam { variant: Variant::Sparse6, ham, history, circuit: c.clone(), initial })
}
