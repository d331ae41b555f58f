use super::{CircuitDescriptor, CircuitError, Gate};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SparsifyOptions {
    /// Write each SWAP as three CNOTs.
    pub swap_as_cnots: bool,
    /// Pad every row step to one slot per qubit of the row, so the gate
    /// count is (2K-1)·N with SWAP-as-one. Qubits the row gate misses get
    /// an explicit identity.
    pub unit_slots: bool,
}

/// Lays a K-gate circuit on N qubits out as K rows of N qubits. Gate j
/// acts on row j; between rows a layer of N SWAPs (last column first)
/// moves the whole state down one row.
pub fn spatial_sparsify(c: &CircuitDescriptor, opts: SparsifyOptions) -> Result<CircuitDescriptor, CircuitError> {
    if c.rows != 1 {
        return Err(CircuitError::AlreadySparse);
    }
    let k = c.len();
    if k <= 1 && !opts.unit_slots {
        return Ok(c.clone());
    }
    let n = c.row_width();
    let mut gates = Vec::new();
    for (j, g) in c.gates.iter().enumerate() {
        if j > 0 {
            for q in (0..n).rev() {
                let (a, b) = ((j - 1) * n + q, j * n + q);
                if opts.swap_as_cnots {
                    gates.extend([Gate::cnot(a, b), Gate::cnot(b, a), Gate::cnot(a, b)]);
                } else {
                    gates.push(Gate::swap(a, b));
                }
            }
        }
        let row_gate = g.map_wires(|w| j * n + w);
        gates.push(row_gate);
        if opts.unit_slots {
            let mut slots = 1;
            for q in 0..n {
                if slots == n {
                    break;
                }
                if !g.wires().contains(&q) {
                    gates.push(Gate::id_on(j * n + q));
                    slots += 1;
                }
            }
            while slots < n {
                gates.push(Gate::idle());
                slots += 1;
            }
        }
    }
    CircuitDescriptor::with_rows(c.regs, k.max(1), gates)
}

/// Identity gates to prepend so that K' + 1 is a perfect square.
pub fn pre_idle_count(k: usize) -> usize {
    let target = k + 1;
    let mut r = (target as f64).sqrt() as usize;
    while r * r < target {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= target {
        r -= 1;
    }
    r * r - target
}

pub fn pre_idle(c: &CircuitDescriptor) -> CircuitDescriptor {
    let pad = pre_idle_count(c.len());
    let mut gates = vec![Gate::idle(); pad];
    gates.extend_from_slice(&c.gates);
    CircuitDescriptor { regs: c.regs, rows: c.rows, gates }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{GateKind, Registers};

    fn three_qubit(k: usize) -> CircuitDescriptor {
        let gates = (0..k).map(|i| Gate::tof(i % 3, (i + 1) % 3, (i + 2) % 3)).collect();
        CircuitDescriptor::new(Registers::new(3, 0, 0, 0), gates).unwrap()
    }

    #[test]
    fn two_gates_three_qubits() {
        let s = spatial_sparsify(&three_qubit(2), SparsifyOptions::default()).unwrap();
        assert_eq!(s.len(), 1 + 3 + 1);
        assert_eq!(s.qubits(), 6);
        assert_eq!(s.gates[1], Gate::swap(2, 5));
        assert_eq!(s.gates[4], Gate::tof(4, 5, 3));
        let u = spatial_sparsify(&three_qubit(2), SparsifyOptions { unit_slots: true, ..Default::default() }).unwrap();
        assert_eq!(u.len(), (2 * 2 - 1) * 3);
        let c = spatial_sparsify(&three_qubit(2), SparsifyOptions { swap_as_cnots: true, ..Default::default() }).unwrap();
        assert_eq!(c.len(), 2 + 9);
    }

    #[test]
    fn single_gate_is_unchanged() {
        let c = three_qubit(1);
        assert_eq!(spatial_sparsify(&c, SparsifyOptions::default()).unwrap(), c);
    }

    #[test]
    fn idle_padding() {
        assert_eq!(pre_idle_count(5), 3);
        assert_eq!(pre_idle_count(3), 0);
        assert_eq!(pre_idle_count(0), 0);
        let c = pre_idle(&three_qubit(5));
        assert_eq!(c.len(), 8);
        assert!(c.gates[..3].iter().all(|g| g.kind == GateKind::Id));
    }
}
