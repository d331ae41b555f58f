use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use succinct::exactnum::ExactValue;
use succinct::fixtures;
use succinct::ham::{apply, ExplicitHam, HamRef, SparseHam};
use succinct::oracle::{densify_ham, spectrum, stoquastic_check};
use succinct::qstate::{split_real, AmplitudeQuery, ExplicitState, SplitState, StateRef};
use succinct::xform::{complexify_to_real, fixed_node, sign_gauge};

fn all_entries(h: &dyn SparseHam) -> Vec<(u64, u64, ExactValue)> {
    (0..1u64 << h.qubits()).flat_map(|x| h.row(x).unwrap().into_iter().map(move |(y, v)| (x, y, v))).collect()
}

fn amplitudes(s: &dyn AmplitudeQuery) -> BTreeMap<u64, ExactValue> {
    (0..1u64 << s.arity()).map(|x| (x, s.query(x).unwrap())).filter(|(_, v)| !v.is_zero()).collect()
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Real state with every amplitude nonzero, signs and sizes from `raw`.
fn nonzero_state(n: usize, raw: &[i8], positive: bool) -> StateRef {
    let amps = (0..1u64 << n).map(|x| {
        let r = raw[x as usize % raw.len()] as i64;
        let v = if r == 0 { 1 } else if positive { r.abs() } else { r };
        (x, ExactValue::from_i64(v))
    });
    Arc::new(ExplicitState::new(n, amps).unwrap())
}

fn conjugate(h: &ExplicitHam) -> ExplicitHam {
    let mut out = ExplicitHam::new(h.qubits());
    for (x, y, v) in h.entries() {
        out.set(x, y, v.conj().unwrap());
    }
    out
}

fn stoquastic_version(h: &ExplicitHam) -> ExplicitHam {
    let mut out = ExplicitHam::new(h.qubits());
    for (x, y, v) in h.entries() {
        let v = if x != y && v.real_sign() == Some(std::cmp::Ordering::Greater) { v.neg().unwrap() } else { v.clone() };
        out.set(x, y, v);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn doubling_commutes_with_densify(n in 1usize..=3, seed in any::<u64>()) {
        let h: HamRef = Arc::new(fixtures::random_hermitian(n, true, seed));
        let route_a = densify_ham(&complexify_to_real(h.clone()).unwrap(), 8).unwrap();
        let dense: HamRef = Arc::new(densify_ham(h.as_ref(), 8).unwrap().to_explicit());
        let route_b = densify_ham(&complexify_to_real(dense).unwrap(), 8).unwrap();
        prop_assert_eq!(route_a, route_b);
    }

    #[test]
    fn doubled_operator_is_real_symmetric(n in 1usize..=3, seed in any::<u64>()) {
        let h: HamRef = Arc::new(fixtures::random_hermitian(n, true, seed));
        let d = complexify_to_real(h).unwrap();
        prop_assert!(d.is_real());
        for (x, y, v) in all_entries(&d) {
            prop_assert!(v.is_real());
            prop_assert_eq!(d.entry(y, x).unwrap(), v);
        }
    }

    #[test]
    fn split_ground_state_is_an_eigenvector(n in 1usize..=3, l in -5i64..=5, seed in any::<u64>()) {
        let inst = fixtures::complex_ground_instance(n, rat(l, 2), seed);
        let d = complexify_to_real(inst.ham_ref()).unwrap();
        let conj: HamRef = Arc::new(conjugate(&inst.ham));
        let d_conj = complexify_to_real(conj).unwrap();
        let i = ExactValue::omega(2);
        let i_xi: StateRef = Arc::new(ExplicitState::new(n, inst.xi.amplitudes().iter().map(|(x, a)| (*x, a.mul(&i).unwrap()))).unwrap());
        // the negated half belongs to the conjugate; i·ξ gives the degenerate partner
        let cases: [(&dyn SparseHam, SplitState); 3] =
            [(&d, split_real(inst.xi_ref()).0), (&d, split_real(i_xi).0), (&d_conj, split_real(inst.xi_ref()).1)];
        for (h, half) in cases {
            let v = amplitudes(&half);
            let hv = apply(h, &v).unwrap();
            for (x, a) in &v {
                prop_assert_eq!(hv.get(x).cloned().unwrap_or_else(ExactValue::zero), inst.lambda0.mul(a).unwrap());
            }
            prop_assert!(hv.iter().all(|(x, b)| v.contains_key(x) || b.is_zero()));
        }
    }

    #[test]
    fn stoquastic_with_positive_state_is_unchanged(n in 1usize..=3, seed in any::<u64>(), raw in prop::collection::vec(any::<i8>(), 1..8)) {
        let h = stoquastic_version(&fixtures::random_hermitian(n, false, seed));
        let f = fixed_node(Arc::new(h.clone()), nonzero_state(n, &raw, true)).unwrap();
        prop_assert_eq!(all_entries(&f), all_entries(&h));
    }

    #[test]
    fn fixed_node_bounds_ground_energy_from_above(n in 1usize..=3, seed in any::<u64>(), raw in prop::collection::vec(any::<i8>(), 1..8)) {
        let h = fixtures::random_hermitian(n, false, seed);
        let f = fixed_node(Arc::new(h.clone()), nonzero_state(n, &raw, false)).unwrap();
        let lh = spectrum(&densify_ham(&h, 8).unwrap()).unwrap().ground();
        let lf = spectrum(&densify_ham(&f, 8).unwrap()).unwrap().ground();
        prop_assert!(lf >= lh - 1e-9, "{lf} < {lh}");
    }

    #[test]
    fn fixed_node_keeps_ground_energy_for_the_true_state(n in 1usize..=3, l in -5i64..=5, seed in any::<u64>()) {
        let inst = fixtures::real_ground_instance(n, rat(l, 3), seed);
        let f = fixed_node(inst.ham_ref(), inst.xi_ref()).unwrap();
        let lf = spectrum(&densify_ham(&f, 8).unwrap()).unwrap().ground();
        prop_assert!((lf - inst.lambda0.to_f64()).abs() < 1e-9);
        let fxi = apply(&f, inst.xi.amplitudes()).unwrap();
        for (x, a) in inst.xi.amplitudes() {
            prop_assert_eq!(fxi.get(x).cloned().unwrap_or_else(ExactValue::zero), inst.lambda0.mul(a).unwrap());
        }
    }

    #[test]
    fn gauge_is_an_involution_and_makes_f_stoquastic(n in 1usize..=3, seed in any::<u64>(), raw in prop::collection::vec(any::<i8>(), 1..8)) {
        let xi = nonzero_state(n, &raw, false);
        let f: HamRef = Arc::new(fixed_node(Arc::new(fixtures::random_hermitian(n, false, seed)), xi.clone()).unwrap());
        let g: HamRef = Arc::new(sign_gauge(f.clone(), xi.clone()).unwrap());
        prop_assert!(stoquastic_check(&densify_ham(g.as_ref(), 8).unwrap()).unwrap());
        let back = sign_gauge(g, xi).unwrap();
        prop_assert_eq!(all_entries(&back), all_entries(f.as_ref()));
    }
}

#[test]
fn fixed_node_refuses_complex_input() {
    let h: HamRef = Arc::new(fixtures::random_hermitian(2, true, 3));
    assert!(fixed_node(h, nonzero_state(2, &[1], true)).is_err());
}

#[test]
fn fixed_node_refuses_wrong_arity() {
    let h: HamRef = Arc::new(fixtures::random_hermitian(2, false, 3));
    assert!(fixed_node(h, nonzero_state(3, &[1], true)).is_err());
}
