use super::{CircuitDescriptor, CircuitError, Gate, GateKind};

/// Gates per decomposed Toffoli.
pub const STEC_BLOCK: usize = 15;

/// Clifford+T expansion of Toffoli[a, b; c], in application order.
pub fn toffoli_block(a: usize, b: usize, c: usize) -> [Gate; STEC_BLOCK] {
    [
        Gate::t(a),
        Gate::cnot(a, b),
        Gate::tdg(b),
        Gate::cnot(a, b),
        Gate::t(b),
        Gate::h(c),
        Gate::cnot(b, c),
        Gate::tdg(c),
        Gate::cnot(a, c),
        Gate::t(c),
        Gate::cnot(b, c),
        Gate::tdg(c),
        Gate::cnot(a, c),
        Gate::t(c),
        Gate::h(c),
    ]
}

/// 1-based gate index j → (1-based block, 1-based offset in the block).
pub fn block_map(j: usize) -> (usize, usize) {
    assert!(j >= 1, "gate indices are 1-based");
    ((j - 1) / STEC_BLOCK + 1, (j - 1) % STEC_BLOCK + 1)
}

/// A Toffoli-only circuit together with its Clifford+T expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StecDescriptor {
    pub source: CircuitDescriptor,
    pub expanded: CircuitDescriptor,
}

impl StecDescriptor {
    /// The Toffoli that block `k` (1-based) expands.
    pub fn block_toffoli(&self, k: usize) -> Gate {
        self.source.gates[k - 1]
    }
}

pub fn toffoli_decompose(c: &CircuitDescriptor) -> Result<StecDescriptor, CircuitError> {
    let mut gates = Vec::with_capacity(c.len() * STEC_BLOCK);
    for (i, g) in c.gates.iter().enumerate() {
        if g.kind != GateKind::Tof {
            return Err(CircuitError::NotToffoliOnly(i + 1));
        }
        let w = g.wires();
        gates.extend_from_slice(&toffoli_block(w[0], w[1], w[2]));
    }
    let expanded = CircuitDescriptor::with_rows(c.regs, c.rows, gates)?;
    Ok(StecDescriptor { source: c.clone(), expanded })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Registers;

    #[test]
    fn block_indexing() {
        assert_eq!(block_map(1), (1, 1));
        assert_eq!(block_map(15), (1, 15));
        assert_eq!(block_map(16), (2, 1));
        assert_eq!(block_map(31), (3, 1));
    }

    #[test]
    fn expansion_length_and_errors() {
        let c = CircuitDescriptor::new(Registers::new(3, 0, 0, 0), vec![Gate::tof(0, 1, 2), Gate::tof(2, 1, 0)]).unwrap();
        let s = toffoli_decompose(&c).unwrap();
        assert_eq!(s.expanded.len(), 30);
        assert_eq!(s.expanded.hadamard_count(), 4);
        let bad = CircuitDescriptor::new(Registers::new(3, 0, 0, 0), vec![Gate::tof(0, 1, 2), Gate::x(0)]).unwrap();
        assert_eq!(toffoli_decompose(&bad).unwrap_err(), CircuitError::NotToffoliOnly(2));
    }
}
