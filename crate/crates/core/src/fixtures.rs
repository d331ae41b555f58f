//! Deterministic instance generators for tests, the acceptance suite and
//! the `fixture` command. Same seed, same instance.

use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{CircuitDescriptor, Gate, Registers};
use crate::exactnum::{ExactValue, SignedRational};
use crate::ham::{ExplicitHam, HamRef, SparseHam};
use crate::oracle::{accept_probability, DenseState};
use crate::qstate::{ExplicitState, StateRef};
use crate::verify::MerlinMessage;

type C = Complex<BigRational>;

fn rng(seed: u64, salt: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(salt);
    r
}

fn ri(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn to_exact(c: &C) -> ExactValue {
    if c.im.is_zero() {
        ExactValue::from_rational(c.re.clone())
    } else {
        ExactValue::complex(SignedRational::from_rational(&c.re), SignedRational::from_rational(&c.im))
    }
}

fn conj(c: &C) -> C {
    Complex::new(c.re.clone(), -c.im.clone())
}

fn matmul(a: &[Vec<C>], b: &[Vec<C>]) -> Vec<Vec<C>> {
    let d = a.len();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let mut acc = C::zero();
                    for k in 0..d {
                        if !a[i][k].is_zero() && !b[k][j].is_zero() {
                            acc = acc + a[i][k].clone() * b[k][j].clone();
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn adjoint(a: &[Vec<C>]) -> Vec<Vec<C>> {
    let d = a.len();
    (0..d).map(|i| (0..d).map(|j| conj(&a[j][i])).collect()).collect()
}

/// A Hamiltonian with a known exact ground state.
#[derive(Clone)]
pub struct GroundInstance {
    pub ham: ExplicitHam,
    /// Unnormalized ground state with nonzero entries everywhere.
    pub xi: ExplicitState,
    pub lambda0: ExactValue,
}

impl GroundInstance {
    pub fn ham_ref(&self) -> HamRef {
        Arc::new(self.ham.clone())
    }

    pub fn xi_ref(&self) -> StateRef {
        Arc::new(self.xi.clone())
    }
}

/// H = λ₀·I + Q·A·Q with Q the projector off ξ and A = B†B + I, so ξ is
/// the unique ground state and the gap is at least 1.
fn ground_instance(n: usize, lambda0: BigRational, complex: bool, r: &mut ChaCha8Rng) -> GroundInstance {
    let d = 1usize << n;
    let draw = |r: &mut ChaCha8Rng, lo: i64, hi: i64, nonzero: bool| loop {
        let v = r.gen_range(lo..=hi);
        if !nonzero || v != 0 {
            break v;
        }
    };
    let xi: Vec<C> = (0..d)
        .map(|_| {
            let re = draw(r, -3, 3, !complex);
            let im = if complex { draw(r, -2, 2, false) } else { 0 };
            if re == 0 && im == 0 {
                Complex::new(ri(1), ri(0))
            } else {
                Complex::new(ri(re), ri(im))
            }
        })
        .collect();
    let s: BigRational = xi.iter().map(|c| c.norm_sqr()).fold(BigRational::zero(), |a, b| a + b);
    let q: Vec<Vec<C>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let outer = xi[i].clone() * conj(&xi[j]);
                    let id = if i == j { C::one() } else { C::zero() };
                    id - Complex::new(outer.re / s.clone(), outer.im / s.clone())
                })
                .collect()
        })
        .collect();
    let b: Vec<Vec<C>> = (0..d)
        .map(|_| {
            (0..d)
                .map(|_| {
                    let re = draw(r, -1, 1, false);
                    let im = if complex { draw(r, -1, 1, false) } else { 0 };
                    Complex::new(ri(re), ri(im))
                })
                .collect()
        })
        .collect();
    let mut a = matmul(&adjoint(&b), &b);
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = row[i].clone() + C::one();
    }
    let m = matmul(&matmul(&q, &a), &q);
    let mut ham = ExplicitHam::new(n);
    for (i, row) in m.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let v = if i == j { v.clone() + Complex::new(lambda0.clone(), BigRational::zero()) } else { v.clone() };
            if !v.is_zero() {
                ham.set(i as u64, j as u64, to_exact(&v));
            }
        }
    }
    let xi = ExplicitState::new(n, xi.iter().enumerate().map(|(x, c)| (x as u64, to_exact(c)))).expect("arity fits");
    GroundInstance { ham, xi, lambda0: ExactValue::from_rational(lambda0) }
}

/// Real instance with mixed-sign ground state, ground energy `lambda0`.
pub fn real_ground_instance(n: usize, lambda0: BigRational, seed: u64) -> GroundInstance {
    ground_instance(n, lambda0, false, &mut rng(seed, 1))
}

pub fn complex_ground_instance(n: usize, lambda0: BigRational, seed: u64) -> GroundInstance {
    ground_instance(n, lambda0, true, &mut rng(seed, 2))
}

/// Random Hermitian matrix with small rational entries (numerators and
/// denominators below 8), about half of the off-diagonal pairs filled.
pub fn random_hermitian(n: usize, complex: bool, seed: u64) -> ExplicitHam {
    let mut r = rng(seed, 3);
    let d = 1u64 << n;
    let mut h = ExplicitHam::new(n);
    let rat = |r: &mut ChaCha8Rng| BigRational::new(BigInt::from(r.gen_range(-7..=7)), BigInt::from(r.gen_range(1..=7)));
    for x in 0..d {
        let v = rat(&mut r);
        if !v.is_zero() {
            h.set(x, x, ExactValue::from_rational(v));
        }
        for y in x + 1..d {
            if r.gen_bool(0.5) {
                let re = rat(&mut r);
                let im = if complex { rat(&mut r) } else { BigRational::zero() };
                let v = Complex::new(re, im);
                if !v.is_zero() {
                    h.set_hermitian(x, y, to_exact(&v)).expect("off-diagonal");
                }
            }
        }
    }
    h
}

/// Thresholds shared by the verdict fixtures: YES instances have ground
/// energy 0 ≤ a, NO instances ground energy 1 > b.
pub fn thresholds() -> (ExactValue, ExactValue) {
    (ExactValue::from_ratio(1, 4).expect("nonzero"), ExactValue::from_ratio(1, 2).expect("nonzero"))
}

pub struct VerdictFixture {
    pub name: String,
    pub yes: bool,
    pub ham: HamRef,
    pub msg: MerlinMessage,
}

/// YES: exact ground state, λ* = λ₀ = 0. `complex` routes through the
/// complex → real path.
pub fn yes_fixture(n: usize, complex: bool, seed: u64) -> VerdictFixture {
    let inst = if complex { complex_ground_instance(n, BigRational::zero(), seed) } else { real_ground_instance(n, BigRational::zero(), seed) };
    let x_star = rng(seed, 4).gen_range(0..1u64 << n);
    VerdictFixture {
        name: format!("yes-{}{n}-s{seed}", if complex { "c" } else { "r" }),
        yes: true,
        ham: inst.ham_ref(),
        msg: MerlinMessage { lambda_star: inst.lambda0.clone(), xi: inst.xi_ref(), x_star },
    }
}

/// NO fixtures on a ground-energy-1 Hamiltonian: an honest energy claim
/// above b, an understated energy with the true ground state, and a
/// non-eigenvector whose local energy at x* is ≤ b (so x* itself is
/// legal and the illegal states must be found by walking).
pub fn no_fixtures(n: usize, seed: u64) -> Vec<VerdictFixture> {
    let (_, b) = thresholds();
    let inst = real_ground_instance(n, BigRational::one(), seed);
    let ham = inst.ham_ref();
    let mut out = vec![
        VerdictFixture {
            name: format!("no-energy-{n}-s{seed}"),
            yes: false,
            ham: ham.clone(),
            msg: MerlinMessage { lambda_star: inst.lambda0.clone(), xi: inst.xi_ref(), x_star: 0 },
        },
        VerdictFixture {
            name: format!("no-perturbed-{n}-s{seed}"),
            yes: false,
            ham: ham.clone(),
            msg: MerlinMessage { lambda_star: b.clone(), xi: inst.xi_ref(), x_star: 0 },
        },
    ];
    let mut r = rng(seed, 5);
    let d = 1u64 << n;
    for _ in 0..200 {
        let amps: Vec<(u64, ExactValue)> = (0..d)
            .map(|x| {
                let v = loop {
                    let v = r.gen_range(-4i64..=4);
                    if v != 0 {
                        break v;
                    }
                };
                (x, ExactValue::from_i64(v))
            })
            .collect();
        let xi = ExplicitState::new(n, amps.clone()).expect("arity fits");
        let Some((x_star, e)) = (0..d).filter_map(|x| local_energy(ham.as_ref(), &amps, x).map(|e| (x, e))).min_by(|a, b| a.1.cmp(&b.1)) else {
            continue;
        };
        if e <= b.as_rational().expect("rational threshold") && has_neighbors(ham.as_ref(), x_star) {
            out.push(VerdictFixture {
                name: format!("no-nonground-{n}-s{seed}"),
                yes: false,
                ham: ham.clone(),
                msg: MerlinMessage { lambda_star: ExactValue::from_rational(e), xi: Arc::new(xi), x_star },
            });
            break;
        }
    }
    out
}

/// (Hξ)(x)/ξ(x) for rational data.
fn local_energy(h: &dyn SparseHam, amps: &[(u64, ExactValue)], x: u64) -> Option<BigRational> {
    let mut acc = BigRational::zero();
    for (y, v) in h.row(x).ok()? {
        acc += v.as_rational()? * amps[y as usize].1.as_rational()?;
    }
    Some(acc / amps[x as usize].1.as_rational()?)
}

fn has_neighbors(h: &dyn SparseHam, x: u64) -> bool {
    h.row(x).map(|r| r.iter().any(|(y, _)| *y != x)).unwrap_or(false)
}

/// A circuit with deterministic accept, plus the input and proof used.
#[derive(Clone, Debug)]
pub struct AcceptingCircuit {
    pub circuit: CircuitDescriptor,
    pub x: u64,
    pub xi: u64,
}

/// Random Toffoli circuits on 3 to 5 qubits with 1 to `max_gates` gates
/// that accept with probability exactly 1.
pub fn accepting_toffoli_circuits(count: usize, max_gates: usize, seed: u64) -> Vec<AcceptingCircuit> {
    let mut r = rng(seed, 6);
    let mut out = Vec::new();
    while out.len() < count {
        let n = r.gen_range(1..=2usize);
        let w = r.gen_range(0..=1usize);
        let m = r.gen_range(0..=2usize);
        let p = if r.gen_bool(0.5) { 2 } else { 0 };
        let regs = Registers::new(n, w, m, p);
        let width = regs.width();
        if width < 3 || width > 5 {
            continue;
        }
        let k = r.gen_range(1..=max_gates);
        let mut wires: Vec<usize> = (0..width).collect();
        let gates: Vec<Gate> = (0..k)
            .map(|_| {
                wires.shuffle(&mut r);
                Gate::tof(wires[0], wires[1], wires[2])
            })
            .collect();
        let c = CircuitDescriptor::new(regs, gates).expect("valid wires");
        let x = r.gen_range(0..1u64 << n);
        let xi = if w == 0 { 0 } else { r.gen_range(0..1u64 << w) };
        let init = DenseState::mpq_initial(&c, x, xi);
        if accept_probability(&c, &init, 8).map(|a| a == ExactValue::one()).unwrap_or(false) {
            out.push(AcceptingCircuit { circuit: c, x, xi });
        }
    }
    out
}

/// Random circuits over X, CNOT, Toffoli and H on at most `max_qubits`
/// register qubits with 1 to `max_gates` gates.
pub fn random_small_circuits(count: usize, max_qubits: usize, max_gates: usize, seed: u64) -> Vec<AcceptingCircuit> {
    let mut r = rng(seed, 7);
    let mut out = Vec::new();
    while out.len() < count {
        let n = r.gen_range(1..=max_qubits);
        let p = if n >= 3 && r.gen_bool(0.5) { 2 } else { 0 };
        let regs = Registers::new(n - p, 0, 0, p);
        let k = r.gen_range(1..=max_gates);
        let mut wires: Vec<usize> = (0..n).collect();
        let gates: Vec<Gate> = (0..k)
            .map(|_| {
                wires.shuffle(&mut r);
                match r.gen_range(0..4) {
                    0 => Gate::x(wires[0]),
                    1 => Gate::h(wires[0]),
                    2 if n >= 2 => Gate::cnot(wires[0], wires[1]),
                    3 if n >= 3 => Gate::tof(wires[0], wires[1], wires[2]),
                    _ => Gate::x(wires[0]),
                }
            })
            .collect();
        let c = CircuitDescriptor::new(regs, gates).expect("valid wires");
        let x = r.gen_range(0..1u64 << (n - p));
        out.push(AcceptingCircuit { circuit: c, x, xi: 0 });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ham::apply;

    #[test]
    fn ground_instance_is_an_eigenpair() {
        for complex in [false, true] {
            let inst = if complex { complex_ground_instance(2, ri(0), 9) } else { real_ground_instance(2, ri(3), 9) };
            let v = inst.xi.amplitudes().clone();
            let hv = apply(&inst.ham, &v).unwrap();
            for (x, a) in &v {
                assert_eq!(hv.get(x).cloned().unwrap_or_else(ExactValue::zero), inst.lambda0.mul(a).unwrap());
            }
        }
    }

    #[test]
    fn same_seed_same_fixture() {
        let a = accepting_toffoli_circuits(3, 3, 1);
        let b = accepting_toffoli_circuits(3, 3, 1);
        assert_eq!(a.iter().map(|c| c.circuit.clone()).collect::<Vec<_>>(), b.iter().map(|c| c.circuit.clone()).collect::<Vec<_>>());
        assert_eq!(no_fixtures(3, 4).len(), 3);
    }
}
