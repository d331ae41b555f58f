//! Arthur's side of the protocol at desk scale: the Markov generator built
//! from a fixed-node Hamiltonian and Merlin's state, exact legality, and
//! seeded Gillespie runs.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;
use serde::Serialize;

use crate::exactnum::ExactValue;
use crate::ham::{sum, HamError, HamRef};
use crate::qstate::{split_real, StateRef};
use crate::xform::{complexify_to_real, fixed_node};

/// Merlin's claim: an energy, query access to a state, and a start string.
#[derive(Clone)]
pub struct MerlinMessage {
    pub lambda_star: ExactValue,
    pub xi: StateRef,
    pub x_star: u64,
}

#[derive(Clone, Debug)]
pub struct VerifierConfig {
    pub a: ExactValue,
    pub b: ExactValue,
    /// Simulated time per run; `None` means M³ for M chain qubits.
    pub t_max: Option<BigRational>,
    pub trials: usize,
    pub seed: u64,
    /// Stop a run early after this many jumps (counted as surviving).
    pub max_jumps: Option<u64>,
    /// Record time-weighted occupation per state.
    pub record_occupation: bool,
}

impl VerifierConfig {
    pub fn new(a: ExactValue, b: ExactValue) -> Self {
        VerifierConfig { a, b, t_max: None, trials: 100, seed: 0, max_jumps: None, record_occupation: false }
    }

    pub fn validate(&self) -> Result<(), HamError> {
        if cmp(&self.a, &self.b)? != Ordering::Less {
            return Err(HamError::Invalid(format!("need a < b, got a = {}, b = {}", self.a, self.b)));
        }
        if self.trials == 0 {
            return Err(HamError::Invalid("at least one trial".into()));
        }
        Ok(())
    }
}

fn cmp(x: &ExactValue, y: &ExactValue) -> Result<Ordering, HamError> {
    let d = x.sub(y)?;
    if !d.is_zero() && !d.is_real() {
        return Err(HamError::Invalid(format!("cannot order complex value {d}")));
    }
    Ok(d.real_sign().unwrap_or(Ordering::Equal))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IllegalReason {
    NegativeRate { to: u64, rate: String },
    BalanceResidual { residual: String },
    ZeroAmplitude,
}

/// Per-state verdict. Rates are exact; the float copies feed the sampler.
#[derive(Clone, Debug, PartialEq)]
pub enum Legality {
    Legal { rates: Vec<(u64, ExactValue)>, escape: ExactValue },
    Illegal(IllegalReason),
}

impl Legality {
    pub fn is_legal(&self) -> bool {
        matches!(self, Legality::Legal { .. })
    }
}

struct Cached {
    legality: Legality,
    rates_f64: Vec<(u64, f64)>,
    escape_f64: f64,
}

/// G(y,x) = λ*·δ(x,y) − (ξ_y/ξ_x)·F(y,x) for a real F.
pub struct Generator {
    f: HamRef,
    xi: StateRef,
    lambda: ExactValue,
    cache: Mutex<HashMap<u64, Arc<Cached>>>,
}

impl Generator {
    pub fn new(f: HamRef, xi: StateRef, lambda: ExactValue) -> Result<Self, HamError> {
        if !f.is_real() {
            return Err(HamError::Invalid("generator needs a real Hamiltonian".into()));
        }
        if xi.arity() != f.qubits() {
            return Err(HamError::Invalid(format!("{}-qubit state for a {}-qubit Hamiltonian", xi.arity(), f.qubits())));
        }
        Ok(Generator { f, xi, lambda, cache: Mutex::new(HashMap::new()) })
    }

    pub fn qubits(&self) -> usize {
        self.f.qubits()
    }

    /// Off-diagonal rates out of x (nonzero ones only), before any sign test.
    pub fn rates(&self, x: u64) -> Result<Vec<(u64, ExactValue)>, HamError> {
        let ax = self.xi.query(x)?;
        if ax.is_zero() {
            return Err(HamError::ZeroAmplitudeVisited(x));
        }
        let mut out = Vec::new();
        for (y, fxy) in self.f.row(x)? {
            if y == x {
                continue;
            }
            let ay = self.xi.query(y)?;
            if ay.is_zero() {
                continue;
            }
            // F is real symmetric, so F(y,x) = F(x,y)
            out.push((y, ay.div(&ax)?.mul(&fxy)?.neg()?));
        }
        Ok(out)
    }

    /// λ* − (Fξ)(x)/ξ_x, the column sum of G at x.
    pub fn balance_residual(&self, x: u64) -> Result<ExactValue, HamError> {
        let ax = self.xi.query(x)?;
        if ax.is_zero() {
            return Err(HamError::ZeroAmplitudeVisited(x));
        }
        let mut acc = self.lambda.clone();
        for (y, fxy) in self.f.row(x)? {
            let ay = self.xi.query(y)?;
            if !ay.is_zero() {
                acc = sum(&acc, &ay.div(&ax)?.mul(&fxy)?.neg()?)?;
            }
        }
        Ok(acc)
    }

    pub fn legality_check(&self, x: u64) -> Result<Legality, HamError> {
        Ok(self.cached(x)?.legality.clone())
    }

    fn cached(&self, x: u64) -> Result<Arc<Cached>, HamError> {
        if let Some(c) = self.cache.lock().unwrap().get(&x) {
            return Ok(c.clone());
        }
        let c = Arc::new(self.decide(x)?);
        self.cache.lock().unwrap().insert(x, c.clone());
        Ok(c)
    }

    fn decide(&self, x: u64) -> Result<Cached, HamError> {
        let illegal = |r| Cached { legality: Legality::Illegal(r), rates_f64: Vec::new(), escape_f64: 0.0 };
        if self.xi.query(x)?.is_zero() {
            return Ok(illegal(IllegalReason::ZeroAmplitude));
        }
        let rates = self.rates(x)?;
        for (y, r) in &rates {
            if r.real_sign() == Some(Ordering::Less) {
                return Ok(illegal(IllegalReason::NegativeRate { to: *y, rate: r.to_string() }));
            }
        }
        let res = self.balance_residual(x)?;
        if !res.is_zero() {
            return Ok(illegal(IllegalReason::BalanceResidual { residual: res.to_string() }));
        }
        let mut escape = ExactValue::zero();
        for (_, r) in &rates {
            escape = sum(&escape, r)?;
        }
        let rates_f64 = rates.iter().map(|(y, r)| (*y, r.to_f64())).collect();
        let escape_f64 = escape.to_f64();
        Ok(Cached { legality: Legality::Legal { rates, escape }, rates_f64, escape_f64 })
    }

    /// Distinct states whose exact rates have been converted to floats.
    pub fn float_conversions(&self) -> usize {
        self.cache.lock().unwrap().values().filter(|c| c.legality.is_legal()).count()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum RunOutcome {
    Survived {
        jumps: u64,
        time: f64,
        #[serde(skip)]
        occupation: BTreeMap<u64, f64>,
    },
    Rejected {
        reason: IllegalReason,
        state: u64,
        time: f64,
        jumps: u64,
    },
}

impl RunOutcome {
    pub fn survived(&self) -> bool {
        matches!(self, RunOutcome::Survived { .. })
    }
}

/// One continuous-time run from `start`, using substream `trial` of the
/// seeded generator.
pub fn gillespie_run(g: &Generator, start: u64, t_max: f64, cfg: &VerifierConfig, trial: u64) -> Result<RunOutcome, HamError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(trial);
    let mut x = start;
    let mut t = 0.0f64;
    let mut jumps = 0u64;
    let mut occ: BTreeMap<u64, f64> = BTreeMap::new();
    loop {
        let c = g.cached(x)?;
        if let Legality::Illegal(reason) = &c.legality {
            return Ok(RunOutcome::Rejected { reason: reason.clone(), state: x, time: t, jumps });
        }
        if cfg.max_jumps.is_some_and(|m| jumps >= m) {
            break;
        }
        let wait = if c.escape_f64 > 0.0 {
            Exp::new(c.escape_f64).map_err(|e| HamError::Invalid(e.to_string()))?.sample(&mut rng)
        } else {
            f64::INFINITY
        };
        let stay = wait.min(t_max - t);
        if cfg.record_occupation {
            *occ.entry(x).or_default() += stay;
        }
        t += stay;
        if t >= t_max {
            break;
        }
        let mut u = rng.gen::<f64>() * c.escape_f64;
        let mut next = c.rates_f64.last().map(|r| r.0).unwrap_or(x);
        for &(y, r) in &c.rates_f64 {
            if u < r {
                next = y;
                break;
            }
            u -= r;
        }
        x = next;
        jumps += 1;
    }
    Ok(RunOutcome::Survived { jumps, time: t, occupation: occ })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Accept,
    /// λ* > b, decided without simulation.
    RejectEnergy,
    /// Too few runs survived.
    RejectRuns,
    /// The message itself could not be processed.
    RejectMalformed,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub decision: Decision,
    pub detail: String,
    pub lambda_star: String,
    pub chain_qubits: usize,
    pub start: u64,
    pub t_max: f64,
    pub survived: usize,
    pub runs: Vec<RunOutcome>,
    pub complexified: bool,
    pub float_conversions: usize,
}

impl Verdict {
    pub fn accepted(&self) -> bool {
        self.decision == Decision::Accept
    }

    fn early(decision: Decision, detail: String, msg: &MerlinMessage) -> Verdict {
        Verdict {
            decision,
            detail,
            lambda_star: msg.lambda_star.to_string(),
            chain_qubits: 0,
            start: msg.x_star,
            t_max: 0.0,
            survived: 0,
            runs: Vec::new(),
            complexified: false,
            float_conversions: 0,
        }
    }
}

/// Full pipeline: energy check, complex → real if needed, fixed-node with
/// Merlin's state, generator, independent runs in parallel.
pub fn verify(h: HamRef, msg: &MerlinMessage, cfg: &VerifierConfig) -> Verdict {
    match verify_inner(h, msg, cfg) {
        Ok(v) => v,
        Err(e) => Verdict::early(Decision::RejectMalformed, e.to_string(), msg),
    }
}

fn verify_inner(h: HamRef, msg: &MerlinMessage, cfg: &VerifierConfig) -> Result<Verdict, HamError> {
    cfg.validate()?;
    if cmp(&msg.lambda_star, &cfg.b)? == Ordering::Greater {
        return Ok(Verdict::early(Decision::RejectEnergy, format!("claimed energy {} exceeds b = {}", msg.lambda_star, cfg.b), msg));
    }
    if msg.xi.arity() != h.qubits() {
        return Err(HamError::Invalid(format!("{}-qubit state for a {}-qubit Hamiltonian", msg.xi.arity(), h.qubits())));
    }
    let complexified = !h.is_real();
    let (ham, xi, start): (HamRef, StateRef, u64) = if complexified {
        let xi: StateRef = Arc::new(split_real(msg.xi.clone()).0);
        // start on whichever half carries weight
        let start = if xi.query(msg.x_star << 1)?.is_zero() { (msg.x_star << 1) | 1 } else { msg.x_star << 1 };
        (Arc::new(complexify_to_real(h)?), xi, start)
    } else {
        (h, msg.xi.clone(), msg.x_star)
    };
    if xi.query(start)?.is_zero() {
        return Err(HamError::ZeroAmplitudeVisited(start));
    }
    let f: HamRef = Arc::new(fixed_node(ham, xi.clone())?);
    let g = Generator::new(f, xi, msg.lambda_star.clone())?;
    let m = g.qubits() as i64;
    let t_max = match &cfg.t_max {
        Some(t) => t.to_f64().unwrap_or(f64::INFINITY),
        None => (m * m * m) as f64,
    };
    let runs = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|i| gillespie_run(&g, start, t_max, cfg, i))
        .collect::<Result<Vec<_>, _>>()?;
    let survived = runs.iter().filter(|r| r.survived()).count();
    let decision = if 2 * survived >= cfg.trials { Decision::Accept } else { Decision::RejectRuns };
    Ok(Verdict {
        decision,
        detail: format!("{survived} of {} runs survived to t = {t_max}", cfg.trials),
        lambda_star: msg.lambda_star.to_string(),
        chain_qubits: g.qubits(),
        start,
        t_max,
        survived,
        runs,
        complexified,
        float_conversions: g.float_conversions(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ham::ExplicitHam;
    use crate::qstate::ExplicitState;

    fn q(n: i64) -> ExactValue {
        ExactValue::from_i64(n)
    }

    /// H = [[1, −1], [−1, 1]], ground state (1, 1) at energy 0.
    fn two_state() -> (HamRef, StateRef) {
        let mut h = ExplicitHam::new(1);
        h.set(0, 0, q(1));
        h.set(1, 1, q(1));
        h.set_hermitian(0, 1, q(-1)).unwrap();
        (Arc::new(h), Arc::new(ExplicitState::new(1, [(0, q(1)), (1, q(1))]).unwrap()))
    }

    #[test]
    fn two_state_rates_by_hand() {
        let (h, xi) = two_state();
        let g = Generator::new(h, xi, q(0)).unwrap();
        // rate = −(ξ_1/ξ_0)·(−1) = 1, escape 1, balance 0 − (1 − 1) = 0
        assert_eq!(g.rates(0).unwrap(), vec![(1, q(1))]);
        assert_eq!(g.balance_residual(0).unwrap(), q(0));
        assert!(g.legality_check(1).unwrap().is_legal());
    }

    #[test]
    fn wrong_energy_is_illegal() {
        let (h, xi) = two_state();
        let g = Generator::new(h, xi, ExactValue::from_ratio(-1, 4).unwrap()).unwrap();
        assert!(matches!(g.legality_check(0).unwrap(), Legality::Illegal(IllegalReason::BalanceResidual { .. })));
    }

    #[test]
    fn negative_rate_is_illegal() {
        let (h, _) = two_state();
        let xi: StateRef = Arc::new(ExplicitState::new(1, [(0, q(1)), (1, q(-1))]).unwrap());
        let g = Generator::new(h, xi, q(2)).unwrap();
        assert!(matches!(g.legality_check(0).unwrap(), Legality::Illegal(IllegalReason::NegativeRate { to: 1, .. })));
    }

    #[test]
    fn absorbing_state_survives() {
        let mut h = ExplicitHam::new(1);
        h.set(0, 0, q(3));
        let xi: StateRef = Arc::new(ExplicitState::new(1, [(0, q(1))]).unwrap());
        let g = Generator::new(Arc::new(h), xi, q(3)).unwrap();
        let cfg = VerifierConfig::new(q(0), q(5));
        let out = gillespie_run(&g, 0, 10.0, &cfg, 0).unwrap();
        assert_eq!(out, RunOutcome::Survived { jumps: 0, time: 10.0, occupation: BTreeMap::new() });
    }

    #[test]
    fn energy_fast_path_and_determinism() {
        let (h, xi) = two_state();
        let cfg = VerifierConfig { trials: 8, seed: 7, ..VerifierConfig::new(q(0), q(1)) };
        let msg = MerlinMessage { lambda_star: q(2), xi: xi.clone(), x_star: 0 };
        assert_eq!(verify(h.clone(), &msg, &cfg).decision, Decision::RejectEnergy);
        let msg = MerlinMessage { lambda_star: q(0), xi, x_star: 0 };
        let a = verify(h.clone(), &msg, &cfg);
        let b = verify(h, &msg, &cfg);
        assert!(a.accepted());
        assert_eq!(a.runs, b.runs);
    }
}
