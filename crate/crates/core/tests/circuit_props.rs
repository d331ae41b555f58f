use proptest::prelude::*;
use succinct::circuit::*;
use succinct::oracle::{accept_probability, simulate, DenseState};

fn gate(n: usize, kind: u8, a: usize, b: usize, c: usize) -> Gate {
    let mut w: Vec<usize> = (0..n).collect();
    let a = w.remove(a % w.len());
    let b = if w.is_empty() { a } else { w.remove(b % w.len()) };
    let c = if w.is_empty() { b } else { w.remove(c % w.len()) };
    match kind % 4 {
        0 => Gate::x(a),
        1 if n >= 2 => Gate::cnot(a, b),
        2 if n >= 3 => Gate::tof(a, b, c),
        3 => Gate::h(a),
        _ => Gate::x(a),
    }
}

fn small_circuit() -> impl Strategy<Value = (CircuitDescriptor, u64)> {
    (1usize..=3, prop::collection::vec((any::<u8>(), 0usize..3, 0usize..3, 0usize..3), 1..=3), any::<u64>()).prop_map(|(n, raw, x)| {
        let gates = raw.into_iter().map(|(k, a, b, c)| gate(n, k, a, b, c)).collect();
        (CircuitDescriptor::new(Registers::new(n, 0, 0, 0), gates).unwrap(), x & ((1 << n) - 1))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sparsify_keeps_accept_probability((c, x) in small_circuit(), unit in any::<bool>(), cnots in any::<bool>()) {
        let want = accept_probability(&c, &DenseState::mpq_initial(&c, x, 0), 12).unwrap();
        let sp = spatial_sparsify(&c, SparsifyOptions { unit_slots: unit, swap_as_cnots: cnots }).unwrap();
        prop_assert_eq!(sp.rows, c.len());
        let got = accept_probability(&sp, &DenseState::mpq_initial(&sp, x, 0), 12).unwrap();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn unit_slot_count((c, _x) in small_circuit()) {
        let sp = spatial_sparsify(&c, SparsifyOptions { unit_slots: true, ..Default::default() }).unwrap();
        prop_assert_eq!(sp.len(), (2 * c.len() - 1) * c.qubits());
    }

    #[test]
    fn pre_idle_square(k in 0usize..500) {
        let c = CircuitDescriptor::new(Registers::new(1, 0, 0, 0), vec![Gate::x(0); k]).unwrap();
        let p = pre_idle(&c);
        let r = ((p.len() + 1) as f64).sqrt().round() as usize;
        prop_assert_eq!(r * r, p.len() + 1);
        prop_assert!(p.len() - k < 2 * r + 1);
        prop_assert_eq!(&p.gates[p.len() - k..], &c.gates[..]);
    }

    #[test]
    fn stec_expansion_acts_as_toffolis(
        raw in prop::collection::vec((0usize..4, 0usize..4, 0usize..4), 1..=3),
        x in 0u64..16,
    ) {
        let gates: Vec<Gate> = raw.into_iter().map(|(a, b, c)| gate(4, 2, a, b, c)).collect();
        let c = CircuitDescriptor::new(Registers::new(4, 0, 0, 0), gates).unwrap();
        let s = toffoli_decompose(&c).unwrap();
        prop_assert_eq!(s.expanded.len(), STEC_BLOCK * c.len());
        let got = simulate(&s.expanded, &DenseState::basis(4, x), 4).unwrap();
        let y = c.gates.iter().fold(x, |s, g| g.apply_classical(s, 4));
        prop_assert_eq!(got, DenseState::basis(4, y));
        for j in 1..=s.expanded.len() {
            let (k, r) = block_map(j);
            prop_assert_eq!((k - 1) * STEC_BLOCK + r, j);
            prop_assert_eq!(s.block_toffoli(k), c.gates[k - 1]);
        }
    }
}

#[test]
fn non_toffoli_gates_are_refused_by_the_decomposition() {
    let c = CircuitDescriptor::new(Registers::new(2, 0, 0, 0), vec![Gate::cnot(0, 1)]).unwrap();
    assert!(toffoli_decompose(&c).is_err());
}

#[test]
fn coin_register_must_be_even() {
    assert!(CircuitDescriptor::new(Registers::new(1, 0, 0, 1), vec![]).is_err());
}

#[test]
fn sparsified_incidence_stays_constant_as_circuits_grow() {
    // the layout has 3K qubits, so the oracle comparison stops early
    for k in 1..=8 {
        let gates: Vec<Gate> = (0..k).map(|i| Gate::cnot(i % 3, (i + 1) % 3)).collect();
        let c = CircuitDescriptor::new(Registers::new(3, 0, 0, 0), gates).unwrap();
        let sp = spatial_sparsify(&c, SparsifyOptions::default()).unwrap();
        let mut count = vec![0; sp.qubits()];
        for g in &sp.gates {
            for &w in g.wires() {
                count[w] += 1;
            }
        }
        assert!(count.iter().all(|&c| c <= 3), "K = {k}: {count:?}");
        if sp.qubits() <= 14 {
            assert_eq!(accept_probability(&sp, &DenseState::mpq_initial(&sp, 0b101, 0), 14).unwrap(), accept_probability(&c, &DenseState::mpq_initial(&c, 0b101, 0), 14).unwrap());
        }
    }
}
