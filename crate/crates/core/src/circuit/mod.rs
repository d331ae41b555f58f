//! Gate-level circuit descriptors, the text format, and the structural
//! rewrites: Toffoli decomposition, spatial sparsification, pre-idling.
//!
//! Text format, one record per line, `#` starts a comment:
//!
//! ```text
//! REG 1 2 0 0     # input, proof, zero ancilla, plus ancilla counts
//! ROWS 1          # optional; >1 only for sparsified registers
//! TOF 2 3 1       # kind followed by 1-based qubit indices
//! ```

mod sparsify;
mod stec;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::basis;
use crate::exactnum::ExactValue;

pub use sparsify::{pre_idle, pre_idle_count, spatial_sparsify, SparsifyOptions};
pub use stec::{block_map, toffoli_block, toffoli_decompose, StecDescriptor, STEC_BLOCK};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CircuitError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("gate {gate}: qubit index {index} outside a {qubits}-qubit register")]
    IndexOutOfRange { gate: usize, index: usize, qubits: usize },
    #[error("gate {gate}: repeated wire")]
    RepeatedWire { gate: usize },
    #[error("the plus-ancilla register must have even size, got {0}")]
    OddCoinRegister(usize),
    #[error("gate {0} is not a Toffoli gate")]
    NotToffoliOnly(usize),
    #[error("gate {0} is not classical")]
    NonClassicalGate(usize),
    #[error("register of {0} qubits exceeds the 64-qubit limit")]
    TooManyQubits(usize),
    #[error("circuit is already sparsified")]
    AlreadySparse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    X,
    Cnot,
    Tof,
    H,
    T,
    Tdg,
    Id,
    Swap,
}

impl GateKind {
    pub fn name(self) -> &'static str {
        match self {
            GateKind::X => "X",
            GateKind::Cnot => "CNOT",
            GateKind::Tof => "TOF",
            GateKind::H => "H",
            GateKind::T => "T",
            GateKind::Tdg => "TDG",
            GateKind::Id => "ID",
            GateKind::Swap => "SWAP",
        }
    }

    /// Permutations of the computational basis.
    pub fn is_classical(self) -> bool {
        matches!(self, GateKind::X | GateKind::Cnot | GateKind::Tof | GateKind::Id | GateKind::Swap)
    }

    pub fn is_self_inverse(self) -> bool {
        !matches!(self, GateKind::T | GateKind::Tdg)
    }
}

impl FromStr for GateKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "X" | "NOT" => GateKind::X,
            "CNOT" | "CX" => GateKind::Cnot,
            "TOF" | "TOFFOLI" | "CCX" => GateKind::Tof,
            "H" => GateKind::H,
            "T" => GateKind::T,
            "TDG" | "T†" => GateKind::Tdg,
            "ID" | "I" => GateKind::Id,
            "SWAP" => GateKind::Swap,
            _ => return Err(format!("unknown gate {s}")),
        })
    }
}

/// A gate on 0-based wires. Controls come first, the target last.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gate {
    pub kind: GateKind,
    wires: [usize; 3],
    len: u8,
}

impl Gate {
    fn make(kind: GateKind, ws: &[usize]) -> Gate {
        let mut wires = [0; 3];
        wires[..ws.len()].copy_from_slice(ws);
        Gate { kind, wires, len: ws.len() as u8 }
    }

    /// Builds a gate, checking the wire count for its kind.
    pub fn new(kind: GateKind, ws: &[usize]) -> Result<Gate, String> {
        let ok = match kind {
            GateKind::X | GateKind::H | GateKind::T | GateKind::Tdg => ws.len() == 1,
            GateKind::Cnot | GateKind::Swap => ws.len() == 2,
            GateKind::Tof => ws.len() == 3,
            GateKind::Id => ws.len() <= 1,
        };
        if !ok {
            return Err(format!("{} takes a different number of wires than {}", kind.name(), ws.len()));
        }
        Ok(Gate::make(kind, ws))
    }

    pub fn x(q: usize) -> Gate {
        Gate::make(GateKind::X, &[q])
    }
    pub fn cnot(c: usize, t: usize) -> Gate {
        Gate::make(GateKind::Cnot, &[c, t])
    }
    pub fn tof(a: usize, b: usize, c: usize) -> Gate {
        Gate::make(GateKind::Tof, &[a, b, c])
    }
    pub fn h(q: usize) -> Gate {
        Gate::make(GateKind::H, &[q])
    }
    pub fn t(q: usize) -> Gate {
        Gate::make(GateKind::T, &[q])
    }
    pub fn tdg(q: usize) -> Gate {
        Gate::make(GateKind::Tdg, &[q])
    }
    pub fn swap(a: usize, b: usize) -> Gate {
        Gate::make(GateKind::Swap, &[a, b])
    }
    /// Identity with no wires, a pure clock step.
    pub fn idle() -> Gate {
        Gate::make(GateKind::Id, &[])
    }
    pub fn id_on(q: usize) -> Gate {
        Gate::make(GateKind::Id, &[q])
    }

    pub fn wires(&self) -> &[usize] {
        &self.wires[..self.len as usize]
    }

    pub fn map_wires(&self, f: impl Fn(usize) -> usize) -> Gate {
        let ws: Vec<usize> = self.wires().iter().map(|&w| f(w)).collect();
        Gate::make(self.kind, &ws)
    }

    /// Image of a basis string under a classical gate. Panics on H, T, T†.
    pub fn apply_classical(&self, x: u64, n: usize) -> u64 {
        let w = self.wires();
        match self.kind {
            GateKind::Id => x,
            GateKind::X => basis::flip(x, n, w[0]),
            GateKind::Cnot => {
                if basis::bit(x, n, w[0]) {
                    basis::flip(x, n, w[1])
                } else {
                    x
                }
            }
            GateKind::Tof => {
                if basis::bit(x, n, w[0]) && basis::bit(x, n, w[1]) {
                    basis::flip(x, n, w[2])
                } else {
                    x
                }
            }
            GateKind::Swap => {
                let (a, b) = (basis::bit(x, n, w[0]), basis::bit(x, n, w[1]));
                basis::with_bit(basis::with_bit(x, n, w[0], b), n, w[1], a)
            }
            GateKind::H | GateKind::T | GateKind::Tdg => panic!("{} is not classical", self.kind.name()),
        }
    }

    /// Exact unitary on the gate's own wires (in wire order, first wire
    /// most significant). Wireless identities give the 1×1 matrix [1].
    pub fn matrix(&self) -> Vec<Vec<ExactValue>> {
        let k = self.len as usize;
        let d = 1usize << k;
        let zero = ExactValue::zero;
        let mut m = vec![vec![zero(); d]; d];
        match self.kind {
            GateKind::H => {
                let h = ExactValue::sqrt_half(1);
                let mh = h.neg().unwrap();
                m = vec![vec![h.clone(), h.clone()], vec![h, mh]];
            }
            GateKind::T | GateKind::Tdg => {
                m[0][0] = ExactValue::one();
                m[1][1] = ExactValue::omega(if self.kind == GateKind::T { 1 } else { 7 });
            }
            _ => {
                let local = Gate::make(self.kind, &(0..k).collect::<Vec<_>>());
                for x in 0..d as u64 {
                    let y = local.apply_classical(x, k);
                    m[y as usize][x as usize] = ExactValue::one();
                }
            }
        }
        m
    }

    /// Conjugate transpose of [`Gate::matrix`].
    pub fn adjoint_matrix(&self) -> Vec<Vec<ExactValue>> {
        let m = self.matrix();
        let d = m.len();
        (0..d).map(|i| (0..d).map(|j| m[j][i].conj().unwrap()).collect()).collect()
    }

    pub fn adjoint(&self) -> Gate {
        match self.kind {
            GateKind::T => Gate::make(GateKind::Tdg, self.wires()),
            GateKind::Tdg => Gate::make(GateKind::T, self.wires()),
            _ => *self,
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.name())?;
        for w in self.wires() {
            write!(f, " {}", w + 1)?;
        }
        Ok(())
    }
}

/// Sizes of the four input registers, in register order: input x, proof ξ,
/// zero ancillas, plus ancillas.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Registers {
    pub n: usize,
    pub w: usize,
    pub m: usize,
    pub p: usize,
}

impl Registers {
    pub fn new(n: usize, w: usize, m: usize, p: usize) -> Self {
        Registers { n, w, m, p }
    }

    pub fn width(&self) -> usize {
        self.n + self.w + self.m + self.p
    }
}

/// What a register qubit is initialised to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QubitRole {
    Input(usize),
    Proof(usize),
    Zero,
    Plus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircuitDescriptor {
    pub regs: Registers,
    /// Number of register copies stacked as rows; 1 unless sparsified.
    pub rows: usize,
    pub gates: Vec<Gate>,
}

impl CircuitDescriptor {
    pub fn new(regs: Registers, gates: Vec<Gate>) -> Result<Self, CircuitError> {
        let c = CircuitDescriptor { regs, rows: 1, gates };
        c.validate()?;
        Ok(c)
    }

    pub fn with_rows(regs: Registers, rows: usize, gates: Vec<Gate>) -> Result<Self, CircuitError> {
        let c = CircuitDescriptor { regs, rows: rows.max(1), gates };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), CircuitError> {
        if self.regs.p % 2 == 1 {
            return Err(CircuitError::OddCoinRegister(self.regs.p));
        }
        let q = self.qubits();
        if q > basis::MAX_QUBITS {
            return Err(CircuitError::TooManyQubits(q));
        }
        for (i, g) in self.gates.iter().enumerate() {
            for (j, &w) in g.wires().iter().enumerate() {
                if w >= q {
                    return Err(CircuitError::IndexOutOfRange { gate: i + 1, index: w + 1, qubits: q });
                }
                if g.wires()[..j].contains(&w) {
                    return Err(CircuitError::RepeatedWire { gate: i + 1 });
                }
            }
        }
        Ok(())
    }

    /// Qubits per row.
    pub fn row_width(&self) -> usize {
        self.regs.width()
    }

    pub fn qubits(&self) -> usize {
        self.rows * self.row_width()
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// The measured qubit: qubit 0 of the register, or its copy on the
    /// last row of a sparsified register.
    pub fn output_qubit(&self) -> usize {
        (self.rows - 1) * self.row_width()
    }

    pub fn roles(&self) -> Vec<QubitRole> {
        let r = self.regs;
        let mut out = Vec::with_capacity(self.qubits());
        for row in 0..self.rows {
            for i in 0..r.n {
                out.push(if row == 0 { QubitRole::Input(i) } else { QubitRole::Zero });
            }
            for i in 0..r.w {
                out.push(if row == 0 { QubitRole::Proof(i) } else { QubitRole::Zero });
            }
            out.extend(std::iter::repeat(QubitRole::Zero).take(r.m));
            out.extend(std::iter::repeat(QubitRole::Plus).take(r.p));
        }
        out
    }

    pub fn is_classical(&self) -> bool {
        self.gates.iter().all(|g| g.kind.is_classical())
    }

    pub fn hadamard_count(&self) -> usize {
        self.gates.iter().filter(|g| g.kind == GateKind::H).count()
    }

    /// Applies gates `[0, k)` to a basis string. Panics on non-classical gates.
    pub fn run_classical(&self, x: u64, k: usize) -> u64 {
        let n = self.qubits();
        self.gates[..k].iter().fold(x, |s, g| g.apply_classical(s, n))
    }

    pub fn to_text(&self) -> String {
        let r = self.regs;
        let mut s = format!("REG {} {} {} {}\n", r.n, r.w, r.m, r.p);
        if self.rows > 1 {
            s.push_str(&format!("ROWS {}\n", self.rows));
        }
        for g in &self.gates {
            s.push_str(&g.to_string());
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, CircuitError> {
        let mut regs: Option<Registers> = None;
        let mut rows = 1;
        let mut gates = Vec::new();
        let mut max_wire = 0usize;
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |msg: String| CircuitError::Syntax { line: ln + 1, msg };
            let mut toks = line.split_whitespace();
            let head = toks.next().unwrap();
            let nums: Vec<usize> = toks
                .map(|t| t.parse::<usize>().map_err(|_| syntax(format!("bad number {t}"))))
                .collect::<Result<_, _>>()?;
            match head.to_ascii_uppercase().as_str() {
                "REG" => {
                    if nums.len() != 4 {
                        return Err(syntax("REG takes four sizes".into()));
                    }
                    regs = Some(Registers::new(nums[0], nums[1], nums[2], nums[3]));
                }
                "ROWS" => {
                    if nums.len() != 1 || nums[0] == 0 {
                        return Err(syntax("ROWS takes one positive count".into()));
                    }
                    rows = nums[0];
                }
                kw => {
                    let kind: GateKind = kw.parse().map_err(syntax)?;
                    if nums.contains(&0) {
                        return Err(syntax("qubit indices are 1-based".into()));
                    }
                    let ws: Vec<usize> = nums.iter().map(|&i| i - 1).collect();
                    max_wire = max_wire.max(nums.iter().copied().max().unwrap_or(0));
                    gates.push(Gate::new(kind, &ws).map_err(syntax)?);
                }
            }
        }
        // Without a header every wire counts as an input qubit.
        let regs = regs.unwrap_or(Registers::new(max_wire, 0, 0, 0));
        CircuitDescriptor::with_rows(regs, rows, gates)
    }
}

impl FromStr for CircuitDescriptor {
    type Err = CircuitError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CircuitDescriptor::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_round_trip() {
        let text = "REG 1 2 0 2\n# a comment\nTOF 2 3 1\nH 4\nT 5\nTDG 5\nSWAP 4 5\nID\n";
        let c = CircuitDescriptor::parse(text).unwrap();
        assert_eq!(c.qubits(), 5);
        assert_eq!(c.gates[0], Gate::tof(1, 2, 0));
        assert_eq!(CircuitDescriptor::parse(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(CircuitDescriptor::parse("REG 1 0 0 0\nCNOT 1 2"), Err(CircuitError::IndexOutOfRange { .. })));
        assert!(matches!(CircuitDescriptor::parse("REG 2 0 0 0\nFOO 1"), Err(CircuitError::Syntax { line: 2, .. })));
        assert!(matches!(CircuitDescriptor::parse("REG 2 0 0 0\nCNOT 1 1"), Err(CircuitError::RepeatedWire { .. })));
        assert!(matches!(CircuitDescriptor::parse("REG 2 0 0 1"), Err(CircuitError::OddCoinRegister(1))));
        let empty = CircuitDescriptor::parse("").unwrap();
        assert_eq!(empty.len(), 0);
    }

    #[test]
    fn classical_action() {
        let g = Gate::tof(0, 1, 2);
        assert_eq!(g.apply_classical(0b110, 3), 0b111);
        assert_eq!(g.apply_classical(0b100, 3), 0b100);
        assert_eq!(Gate::swap(0, 2).apply_classical(0b100, 3), 0b001);
    }

    #[test]
    fn gate_matrices() {
        let t = Gate::t(0).matrix();
        assert_eq!(t[1][1], ExactValue::omega(1));
        let h = Gate::h(0).matrix();
        assert_eq!(h[1][1], ExactValue::sqrt_half(1).neg().unwrap());
        let cx = Gate::cnot(0, 1).matrix();
        assert_eq!(cx[3][2], ExactValue::one());
        assert!(cx[2][2].is_zero());
        let tdg = Gate::tdg(0).adjoint_matrix();
        assert_eq!(tdg[1][1], ExactValue::omega(1));
    }

    #[test]
    fn roles_in_register_order() {
        let c = CircuitDescriptor::new(Registers::new(1, 1, 1, 2), vec![]).unwrap();
        assert_eq!(
            c.roles(),
            vec![QubitRole::Input(0), QubitRole::Proof(0), QubitRole::Zero, QubitRole::Plus, QubitRole::Plus]
        );
    }
}
