use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use super::{check_cap, OracleError};
use crate::basis;
use crate::circuit::{CircuitDescriptor, Gate, QubitRole};
use crate::exactnum::ExactValue;
use crate::ham::sum;
use crate::qstate::{AmplitudeQuery, ScaleClass};

/// Exact vector of 2^n amplitudes, indexed by basis string.
#[derive(Clone, PartialEq)]
pub struct DenseState {
    n: usize,
    amps: Vec<ExactValue>,
}

impl fmt::Debug for DenseState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DenseState({} qubits:", self.n)?;
        for (x, v) in self.amps.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            write!(f, " {}:{}", basis::format(x as u64, self.n), v)?;
        }
        write!(f, ")")
    }
}

impl DenseState {
    pub fn zeros(n: usize) -> Self {
        DenseState { n, amps: vec![ExactValue::zero(); 1 << n] }
    }

    pub fn basis(n: usize, x: u64) -> Self {
        let mut s = DenseState::zeros(n);
        s.amps[x as usize] = ExactValue::one();
        s
    }

    pub fn from_amplitudes(n: usize, amps: Vec<ExactValue>) -> Result<Self, OracleError> {
        if amps.len() != 1 << n {
            return Err(OracleError::Dimension(format!("{} amplitudes for {n} qubits", amps.len())));
        }
        Ok(DenseState { n, amps })
    }

    /// |x⟩|ξ⟩|0^m⟩|+^p⟩ laid out by the circuit's qubit roles.
    pub fn mpq_initial(c: &CircuitDescriptor, x: u64, xi: u64) -> Self {
        let r = c.regs;
        let roles = c.roles();
        let n = roles.len();
        let mut fixed = 0u64;
        let mut free = Vec::new();
        for (q, role) in roles.iter().enumerate() {
            let b = match role {
                QubitRole::Input(i) => basis::bit(x, r.n, *i),
                QubitRole::Proof(i) => basis::bit(xi, r.w, *i),
                QubitRole::Zero => false,
                QubitRole::Plus => {
                    free.push(q);
                    false
                }
            };
            fixed = basis::with_bit(fixed, n, q, b);
        }
        let amp = ExactValue::sqrt_half(free.len() as u32);
        let mut s = DenseState::zeros(n);
        for bits in 0..1u64 << free.len() {
            let x = free
                .iter()
                .enumerate()
                .fold(fixed, |acc, (i, &q)| basis::with_bit(acc, n, q, (bits >> (free.len() - 1 - i)) & 1 == 1));
            s.amps[x as usize] = amp.clone();
        }
        s
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn get(&self, x: u64) -> &ExactValue {
        &self.amps[x as usize]
    }

    pub fn set(&mut self, x: u64, v: ExactValue) {
        self.amps[x as usize] = v;
    }

    pub fn amplitudes(&self) -> &[ExactValue] {
        &self.amps
    }

    pub fn support(&self) -> Vec<u64> {
        (0..self.amps.len() as u64).filter(|&x| !self.amps[x as usize].is_zero()).collect()
    }

    pub fn to_sparse(&self) -> BTreeMap<u64, ExactValue> {
        self.support().into_iter().map(|x| (x, self.amps[x as usize].clone())).collect()
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.amps
            .iter()
            .map(|v| {
                let (re, im) = v.to_c64();
                Complex64::new(re, im)
            })
            .collect()
    }

    pub fn norm_sqr(&self) -> Result<ExactValue, OracleError> {
        self.inner(self)
    }

    /// ⟨self|o⟩.
    pub fn inner(&self, o: &DenseState) -> Result<ExactValue, OracleError> {
        if self.n != o.n {
            return Err(OracleError::Dimension(format!("{} vs {} qubits", self.n, o.n)));
        }
        let mut acc = ExactValue::zero();
        for (a, b) in self.amps.iter().zip(&o.amps) {
            if a.is_zero() || b.is_zero() {
                continue;
            }
            acc = sum(&acc, &a.conj()?.mul(b)?)?;
        }
        Ok(acc)
    }

    /// self ⊗ o, with self on the leading qubits.
    pub fn kron(&self, o: &DenseState) -> Result<DenseState, OracleError> {
        let mut out = DenseState::zeros(self.n + o.n);
        for (x, a) in self.amps.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (y, b) in o.amps.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                out.amps[(x << o.n) | y] = a.mul(b)?;
            }
        }
        Ok(out)
    }

    /// Applies one gate through its exact matrix.
    pub fn apply_gate(&self, g: &Gate) -> Result<DenseState, OracleError> {
        let ws = g.wires();
        if ws.is_empty() {
            return Ok(self.clone());
        }
        if let Some(&w) = ws.iter().find(|&&w| w >= self.n) {
            return Err(OracleError::Dimension(format!("gate on qubit {} of {}", w + 1, self.n)));
        }
        let m = g.matrix();
        let n = self.n;
        let k = ws.len();
        let local = |x: u64| ws.iter().fold(0usize, |acc, &q| (acc << 1) | basis::bit(x, n, q) as usize);
        let place = |x: u64, idx: usize| {
            ws.iter().enumerate().fold(x, |acc, (i, &q)| basis::with_bit(acc, n, q, (idx >> (k - 1 - i)) & 1 == 1))
        };
        let mut out = DenseState::zeros(n);
        for x in 0..self.amps.len() as u64 {
            let a = &self.amps[x as usize];
            if a.is_zero() {
                continue;
            }
            let c = local(x);
            for (r, row) in m.iter().enumerate() {
                if row[c].is_zero() {
                    continue;
                }
                let y = place(x, r) as usize;
                out.amps[y] = sum(&out.amps[y], &row[c].mul(a)?)?;
            }
        }
        Ok(out)
    }
}

/// Runs a circuit on a dense state, gate by gate.
pub fn simulate(c: &CircuitDescriptor, init: &DenseState, cap: usize) -> Result<DenseState, OracleError> {
    check_cap(c.qubits(), cap)?;
    if init.n != c.qubits() {
        return Err(OracleError::Dimension(format!("{}-qubit state for a {}-qubit circuit", init.n, c.qubits())));
    }
    c.gates.iter().try_fold(init.clone(), |s, g| s.apply_gate(g))
}

/// Pr[output qubit reads 1] after running `c` on `init`.
pub fn accept_probability(c: &CircuitDescriptor, init: &DenseState, cap: usize) -> Result<ExactValue, OracleError> {
    let out = simulate(c, init, cap)?;
    let q = c.output_qubit();
    let mut acc = ExactValue::zero();
    for x in out.support() {
        if basis::bit(x, out.n, q) {
            acc = sum(&acc, &out.get(x).norm_sqr()?)?;
        }
    }
    Ok(acc)
}

/// Queries every string. Returns the raw (scaled) vector and its squared
/// norm, which equals c² for a normalized underlying state. A declared
/// exact scale must agree with that norm.
pub fn densify_state(q: &dyn AmplitudeQuery, cap: usize) -> Result<(DenseState, ExactValue), OracleError> {
    let n = q.arity();
    check_cap(n, cap)?;
    let amps = (0..1u64 << n).map(|x| q.query(x)).collect::<Result<Vec<_>, _>>()?;
    let s = DenseState { n, amps };
    let ns = s.norm_sqr()?;
    if ns.is_zero() {
        return Err(OracleError::ZeroState);
    }
    if let ScaleClass::Exact(c) = q.scale() {
        if c.mul(&c)? != ns {
            return Err(OracleError::InconsistentScale { at: s.support()[0] });
        }
    }
    Ok((s, ns))
}

/// The positive real c with raw = c·reference, if there is one.
pub fn scale_against(raw: &DenseState, reference: &DenseState) -> Result<ExactValue, OracleError> {
    if raw.n != reference.n {
        return Err(OracleError::Dimension(format!("{} vs {} qubits", raw.n, reference.n)));
    }
    let Some(x0) = reference.support().first().copied() else {
        return Err(OracleError::ZeroState);
    };
    let c = raw.get(x0).div(reference.get(x0))?;
    if c.real_sign() != Some(std::cmp::Ordering::Greater) {
        return Err(OracleError::InconsistentScale { at: x0 });
    }
    for x in 0..raw.amps.len() as u64 {
        let r = reference.get(x);
        let expect = if r.is_zero() { ExactValue::zero() } else { r.mul(&c)? };
        if raw.get(x) != &expect {
            return Err(OracleError::InconsistentScale { at: x });
        }
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{toffoli_block, Registers};

    #[test]
    fn hadamard_on_zero() {
        let c = CircuitDescriptor::new(Registers::new(1, 0, 0, 0), vec![Gate::h(0)]).unwrap();
        let s = simulate(&c, &DenseState::basis(1, 0), 4).unwrap();
        assert_eq!(s.get(0), &ExactValue::sqrt_half(1));
        assert_eq!(s.get(1), &ExactValue::sqrt_half(1));
        assert_eq!(s.norm_sqr().unwrap(), ExactValue::one());
    }

    #[test]
    fn stec_block_is_toffoli_on_basis_states() {
        let c = CircuitDescriptor::new(Registers::new(3, 0, 0, 0), toffoli_block(0, 1, 2).to_vec()).unwrap();
        for x in 0..8u64 {
            let out = simulate(&c, &DenseState::basis(3, x), 4).unwrap();
            let y = Gate::tof(0, 1, 2).apply_classical(x, 3);
            assert_eq!(out, DenseState::basis(3, y), "input {x:03b}");
        }
    }

    #[test]
    fn inverse_circuit_restores_state() {
        let gates = vec![Gate::h(0), Gate::t(1), Gate::cnot(0, 1), Gate::h(1), Gate::tdg(0)];
        let inv: Vec<Gate> = gates.iter().rev().map(|g| g.adjoint()).collect();
        let regs = Registers::new(2, 0, 0, 0);
        let c = CircuitDescriptor::new(regs, gates).unwrap();
        let ci = CircuitDescriptor::new(regs, inv).unwrap();
        let init = DenseState::basis(2, 0b10);
        let back = simulate(&ci, &simulate(&c, &init, 4).unwrap(), 4).unwrap();
        assert_eq!(back, init);
    }

    #[test]
    fn cap_is_enforced() {
        let c = CircuitDescriptor::new(Registers::new(5, 0, 0, 0), vec![]).unwrap();
        assert!(matches!(simulate(&c, &DenseState::zeros(5), 4), Err(OracleError::CapExceeded { qubits: 5, cap: 4 })));
    }

    #[test]
    fn accept_probability_of_coin_copy() {
        // output = CNOT from a |+⟩ coin: accepts with probability 1/2
        let regs = Registers::new(1, 0, 0, 2);
        let c = CircuitDescriptor::new(regs, vec![Gate::cnot(1, 0)]).unwrap();
        let init = DenseState::mpq_initial(&c, 0, 0);
        assert_eq!(accept_probability(&c, &init, 8).unwrap(), ExactValue::from_ratio(1, 2).unwrap());
    }
}
