use std::sync::Arc;

use num_rational::BigRational;
use proptest::prelude::*;
use succinct::basis;
use succinct::circuit::{toffoli_decompose, CircuitDescriptor, Gate, GateKind, Registers};
use succinct::exactnum::{ExactValue, SignedRational};
use succinct::oracle::{densify_state, scale_against, simulate, DenseState};
use succinct::qstate::*;

const CAP: usize = 12;

/// Picks `k` distinct wires out of n from a seed list.
fn wires(n: usize, seed: &[usize], k: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    for (i, s) in seed.iter().take(k).enumerate() {
        out.push(pool.remove(s % (n - i)));
    }
    out
}

fn gate_from(n: usize, kind: u8, seed: &[usize]) -> Gate {
    match kind % 6 {
        0 => Gate::x(wires(n, seed, 1)[0]),
        1 => {
            let w = wires(n, seed, 2);
            Gate::cnot(w[0], w[1])
        }
        2 if n >= 3 => {
            let w = wires(n, seed, 3);
            Gate::tof(w[0], w[1], w[2])
        }
        3 => Gate::h(wires(n, seed, 1)[0]),
        4 => Gate::t(wires(n, seed, 1)[0]),
        _ => Gate::tdg(wires(n, seed, 1)[0]),
    }
}

/// Random gate list within the budgets: classical gates freely, at most
/// `max_h` Hadamards and `max_t` phase gates.
fn circuit(n: usize, raw: &[(u8, [usize; 3])], max_h: usize, max_t: usize) -> Vec<Gate> {
    let (mut h, mut t) = (0, 0);
    let mut out = Vec::new();
    for (k, seed) in raw {
        let mut g = gate_from(n, *k, seed);
        match g.kind {
            GateKind::H if h >= max_h => g = Gate::x(g.wires()[0]),
            GateKind::H => h += 1,
            GateKind::T | GateKind::Tdg if t >= max_t => g = Gate::x(g.wires()[0]),
            GateKind::T | GateKind::Tdg => t += 1,
            _ => {}
        }
        out.push(g);
    }
    out
}

fn subset_dense(n: usize, members: &[u64]) -> DenseState {
    let amp = ExactValue::sqrt_of(&BigRational::new(1.into(), (members.len() as i64).into())).unwrap();
    let mut s = DenseState::zeros(n);
    for &x in members {
        s.set(x, amp.clone());
    }
    s
}

fn members_strategy() -> impl Strategy<Value = (usize, Vec<u64>)> {
    (2usize..=6).prop_flat_map(|n| (Just(n), prop::collection::btree_set(0u64..(1 << n), 1..=(1 << n).min(6))))
        .prop_map(|(n, s)| (n, s.into_iter().collect()))
}

fn raw_gates(len: usize) -> impl Strategy<Value = Vec<(u8, [usize; 3])>> {
    prop::collection::vec((any::<u8>(), [0usize..64, 0usize..64, 0usize..64]), 0..=len)
}

fn regs(n: usize) -> Registers {
    Registers::new(n, 0, 0, 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gate_by_gate_pushforwards_match_simulation((n, members) in members_strategy(), raw in raw_gates(14)) {
        let gates = circuit(n, &raw, 3, 8);
        let mut q: StateRef = Arc::new(subset_query(SubsetSpec::explicit(n, members.clone()), false).unwrap());
        for g in &gates {
            q = match g.kind {
                GateKind::H => Arc::new(pushforward_hadamard(q, g.wires()[0]).unwrap()),
                GateKind::T => Arc::new(pushforward_phase(q, g.wires()[0], false).unwrap()),
                GateKind::Tdg => Arc::new(pushforward_phase(q, g.wires()[0], true).unwrap()),
                _ => Arc::new(pushforward_reversible(q, &[*g], 1).unwrap()),
            };
        }
        let c = CircuitDescriptor::new(regs(n), gates).unwrap();
        let reference = simulate(&c, &subset_dense(n, &members), CAP).unwrap();
        let (raw_state, _) = densify_state(q.as_ref(), CAP).unwrap();
        let scale = scale_against(&raw_state, &reference).unwrap();
        prop_assert_eq!(scale.mul(&scale).unwrap(), ExactValue::from_i64(members.len() as i64));
    }

    #[test]
    fn circuit_pushforward_matches_simulation((n, members) in members_strategy(), raw in raw_gates(20)) {
        let gates = circuit(n, &raw, 3, 8);
        let base: StateRef = Arc::new(subset_query(SubsetSpec::explicit(n, members.clone()), true).unwrap());
        let q = pushforward_circuit(base, &gates, 8).unwrap();
        let c = CircuitDescriptor::new(regs(n), gates).unwrap();
        let reference = simulate(&c, &subset_dense(n, &members), CAP).unwrap();
        let (raw_state, ns) = densify_state(&q, CAP).unwrap();
        prop_assert_eq!(ns, ExactValue::one());
        prop_assert_eq!(scale_against(&raw_state, &reference).unwrap(), ExactValue::one());
    }

    #[test]
    fn tensor_is_kronecker((n, a) in members_strategy(), (m, b) in members_strategy()) {
        let qa: StateRef = Arc::new(subset_query(SubsetSpec::explicit(n, a.clone()), false).unwrap());
        let qb: StateRef = Arc::new(subset_query(SubsetSpec::explicit(m, b.clone()), false).unwrap());
        let t = tensor(qa, qb);
        let (dense, _) = densify_state(&t, CAP).unwrap();
        let reference = subset_dense(n, &a).kron(&subset_dense(m, &b)).unwrap();
        scale_against(&dense, &reference).unwrap();
    }

    #[test]
    fn amp_ratio_is_scale_free((n, members) in members_strategy(), raw in raw_gates(10), k in 1i64..50, d in 1i64..50) {
        let gates = circuit(n, &raw, 2, 4);
        let base: StateRef = Arc::new(subset_query(SubsetSpec::explicit(n, members), false).unwrap());
        let q: StateRef = Arc::new(pushforward_circuit(base, &gates, 8).unwrap());
        let s = scaled(q.clone(), ExactValue::from_ratio(k, d).unwrap()).unwrap();
        let (dense, _) = densify_state(q.as_ref(), CAP).unwrap();
        let supp = dense.support();
        let y = supp[0];
        for &x in supp.iter().take(4) {
            let r = amp_ratio(q.as_ref(), x, y).unwrap();
            prop_assert_eq!(&r, &amp_ratio(&s, x, y).unwrap());
            prop_assert_eq!(r, dense.get(x).div(dense.get(y)).unwrap());
        }
    }

    #[test]
    fn split_real_halves_are_normalized((n, members) in members_strategy(), raw in raw_gates(10)) {
        let gates = circuit(n, &raw, 2, 6);
        let base: StateRef = Arc::new(subset_query(SubsetSpec::explicit(n, members), true).unwrap());
        let q: StateRef = Arc::new(pushforward_circuit(base, &gates, 8).unwrap());
        let (p1, p2) = split_real(q);
        for p in [&p1, &p2] {
            let (_, ns) = densify_state(p, CAP).unwrap();
            prop_assert_eq!(ns, ExactValue::one());
        }
    }

    #[test]
    fn overlap_matches_dense_inner((n, members) in members_strategy(), kinds in prop::collection::vec(0u8..4, 6)) {
        // per qubit: |0⟩, |1⟩, |+⟩ or |−⟩ (at most three superposed slots)
        let h = ExactValue::sqrt_half(1);
        let mut superposed = 0;
        let sigma: Vec<[ExactValue; 2]> = (0..n)
            .map(|q| {
                let k = if kinds[q] >= 2 && superposed >= 3 { kinds[q] - 2 } else { kinds[q] };
                if k >= 2 {
                    superposed += 1;
                }
                match k {
                    0 => [ExactValue::one(), ExactValue::zero()],
                    1 => [ExactValue::zero(), ExactValue::one()],
                    2 => [h.clone(), h.clone()],
                    _ => [h.clone(), h.neg().unwrap()],
                }
            })
            .collect();
        let q = subset_query(SubsetSpec::explicit(n, members.clone()), true).unwrap();
        let got = overlap_product_state(&q, &sigma, 8).unwrap();
        let mut bra = DenseState::basis(0, 0);
        for s in &sigma {
            bra = bra.kron(&DenseState::from_amplitudes(1, s.to_vec()).unwrap()).unwrap();
        }
        prop_assert_eq!(got, bra.inner(&subset_dense(n, &members)).unwrap());
    }
}

/// Σ_t |φ_t⟩|1^t 0^{K−t}⟩ / √(K+1), built by simulating prefix by prefix.
fn dense_history(gates: &[Gate], init: &DenseState) -> DenseState {
    let n = init.qubits();
    let k = gates.len();
    let f = ExactValue::sqrt_of(&BigRational::new(1.into(), ((k + 1) as i64).into())).unwrap();
    let mut out = DenseState::zeros(n + k);
    let mut phi = init.clone();
    for t in 0..=k {
        if t > 0 {
            phi = phi.apply_gate(&gates[t - 1]).unwrap();
        }
        for y in phi.support() {
            out.set(basis::concat(y, basis::unary(t, k), k), phi.get(y).mul(&f).unwrap());
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn classical_history_matches_dense(n in 2usize..=4, x in 0u64..16, raw in raw_gates(6)) {
        let x = x & ((1 << n) - 1);
        let gates: Vec<Gate> = circuit(n, &raw, 0, 0)
            .into_iter()
            .map(|g| if g.kind.is_classical() { g } else { Gate::x(g.wires()[0]) })
            .collect();
        let c = CircuitDescriptor::new(regs(n), gates.clone()).unwrap();
        let base: StateRef = Arc::new(subset_query(SubsetSpec::single(n, x), true).unwrap());
        let h = history_query_classical(&c, base, true).unwrap();
        let reference = dense_history(&gates, &DenseState::basis(n, x));
        let (dense, ns) = densify_state(&h, CAP).unwrap();
        prop_assert_eq!(ns, ExactValue::one());
        prop_assert_eq!(dense, reference.clone());
        // membership mode: same support, scale √(K+1)
        let m = history_query_classical(&c, Arc::new(subset_query(SubsetSpec::single(n, x), false).unwrap()), false).unwrap();
        let (dm, _) = densify_state(&m, CAP).unwrap();
        let s = scale_against(&dm, &reference).unwrap();
        prop_assert_eq!(s.mul(&s).unwrap(), ExactValue::from_i64(gates.len() as i64 + 1));
        let mut hint = m.support_hint().unwrap();
        hint.sort_unstable();
        prop_assert_eq!(hint, dm.support());
    }

    #[test]
    fn generic_history_matches_dense(n in 2usize..=3, x in 0u64..8, raw in raw_gates(6)) {
        let x = x & ((1 << n) - 1);
        let gates = circuit(n, &raw, 2, 4);
        let c = CircuitDescriptor::new(regs(n), gates.clone()).unwrap();
        let base: StateRef = Arc::new(subset_query(SubsetSpec::single(n, x), true).unwrap());
        let h = history_query_circuit(&c, base, true, 8).unwrap();
        let (dense, _) = densify_state(&h, CAP).unwrap();
        prop_assert_eq!(dense, dense_history(&gates, &DenseState::basis(n, x)));
    }
}

#[test]
fn stec_history_matches_dense() {
    // single Toffoli, all 8 inputs: 3 + 15 qubits is past the dense cap, so
    // compare on the clock-legal strings only
    let c = CircuitDescriptor::new(regs(3), vec![Gate::tof(0, 1, 2)]).unwrap();
    let s = toffoli_decompose(&c).unwrap();
    let k = s.expanded.len();
    for x in 0..8u64 {
        let base: StateRef = Arc::new(subset_query(SubsetSpec::single(3, x), true).unwrap());
        let h = history_query_stec(&s, base, true, 8).unwrap();
        let reference = dense_history(&[], &DenseState::basis(3, x));
        let f = ExactValue::sqrt_of(&BigRational::new(1.into(), ((k + 1) as i64).into())).unwrap();
        let mut phi = reference;
        for t in 0..=k {
            if t > 0 {
                phi = phi.apply_gate(&s.expanded.gates[t - 1]).unwrap();
            }
            for y in 0..8u64 {
                let got = h.query(basis::concat(y, basis::unary(t, k), k)).unwrap();
                let want = if phi.get(y).is_zero() { ExactValue::zero() } else { phi.get(y).mul(&f).unwrap() };
                assert_eq!(got, want, "x={x:03b} t={t} y={y:03b}");
            }
        }
        // an illegal clock word is outside the support
        assert!(h.query(basis::concat(x, 0b1, k)).unwrap().is_zero() || k == 1);
    }
}

#[test]
fn split_of_three_plus_two_i() {
    let v = ExactValue::complex(SignedRational::from_i64(3, 1).unwrap(), SignedRational::from_i64(2, 1).unwrap());
    let a: StateRef = Arc::new(ExplicitState::new(1, [(0, v)]).unwrap());
    let (p1, p2) = split_real(a);
    assert_eq!(p1.query(0b00).unwrap(), ExactValue::from_i64(3));
    assert_eq!(p1.query(0b01).unwrap(), ExactValue::from_i64(2));
    assert_eq!(p2.query(0b01).unwrap(), ExactValue::from_i64(-2));
}
