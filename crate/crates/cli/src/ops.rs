//! The operations behind each subcommand. Manifest steps call the same
//! functions, so a pipeline run and a sequence of shell commands produce
//! identical files.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::json;
use succinct::basis;
use succinct::circuit::{pre_idle, spatial_sparsify, toffoli_decompose, CircuitDescriptor, SparsifyOptions};
use succinct::clockham::{self, annihilation_check, history_support, ClockHam, Variant};
use succinct::exactnum::{decode, encode, fit_class, ratio, BitString, ClassDescriptor, ExactValue, Family};
use succinct::fixtures;
use succinct::ham::{apply, read_hamfile, write_hamfile, ExplicitHam, HamRef, SparseHam, StoredHam};
use succinct::oracle::{densify_ham, spectrum, stoquastic_check, DEFAULT_CAP};
use succinct::qstate::{
    collect_state, history_query_circuit, read_statefile, split_real, subset_query, write_statefile, AmplitudeQuery, StateRef,
    SubsetSpec,
};
use succinct::verify::{verify as run_verifier, MerlinMessage, VerifierConfig};
use succinct::xform::{complexify_to_real, fixed_node, sign_gauge};

use crate::report::Report;

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn write(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn load_ham(path: &Path) -> Result<(HamRef, String)> {
    let f = read_hamfile(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    Ok((Arc::new(f.ham), f.variant))
}

pub fn load_state(path: &Path) -> Result<StateRef> {
    Ok(Arc::new(read_statefile(&read(path)?).with_context(|| format!("parsing {}", path.display()))?))
}

pub fn load_circuit(path: &Path) -> Result<CircuitDescriptor> {
    CircuitDescriptor::parse(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

pub fn value(s: &str) -> Result<ExactValue> {
    s.parse().with_context(|| format!("bad value {s:?} (expected re or re,im)"))
}

/// Bit string argument; the empty string is allowed and means 0.
pub fn bits(s: &str) -> Result<u64> {
    basis::parse(s).map(|(x, _)| x).with_context(|| format!("bad bit string {s:?}"))
}

fn save_ham(h: &dyn SparseHam, variant: &str, out: &Path) -> Result<()> {
    let stored = StoredHam::Explicit(ExplicitHam::collect(h)?);
    write(out, &write_hamfile(&stored, variant)?)
}

// ---- num ----

pub fn num_encode(v: &str, class: &str) -> Result<Report> {
    let cls: ClassDescriptor = class.parse()?;
    let b = encode(&value(v)?, &cls)?;
    let mut r = Report::new();
    r.put("class", cls.to_string()).put("width", cls.width()).put("bits", b.to_string()).put("fields", b.grouped(&cls.layout()));
    Ok(r)
}

pub fn num_decode(bits: &str, class: &str) -> Result<Report> {
    let cls: ClassDescriptor = class.parse()?;
    let b: BitString = bits.parse()?;
    let v = decode(&b, &cls)?;
    let mut r = Report::new();
    r.put("class", cls.to_string()).put("value", v.to_string());
    Ok(r)
}

pub fn num_ratio(x: &str, y: &str, class: &str) -> Result<Report> {
    let cls: ClassDescriptor = class.parse()?;
    let (q, out_cls) = ratio(&value(x)?, &value(y)?, &cls)?;
    let b = encode(&q, &out_cls)?;
    let mut r = Report::new();
    r.put("value", q.to_string()).put("class", out_cls.to_string()).put("width", out_cls.width()).put("bits", b.to_string());
    Ok(r)
}

pub fn num_fit(values: &[String], family: &str) -> Result<Report> {
    let family: Family = family.parse()?;
    let vals = values.iter().map(|s| value(s)).collect::<Result<Vec<_>>>()?;
    let cls = fit_class(&vals, family)?;
    let mut r = Report::new();
    r.put("class", cls.to_string()).put("width", cls.width());
    Ok(r)
}

// ---- state ----

pub enum StateSource<'a> {
    File(&'a Path),
    History { circuit: &'a Path, x: u64, xi: u64, hadamard_cap: usize },
}

pub fn state_query(src: StateSource, strings: &[String]) -> Result<Report> {
    let q: StateRef = match src {
        StateSource::File(p) => load_state(p)?,
        StateSource::History { circuit, x, xi, hadamard_cap } => {
            let c = load_circuit(circuit)?;
            let base: StateRef = Arc::new(subset_query(SubsetSpec::mpq_initial(&c, x, xi), true)?);
            Arc::new(history_query_circuit(&c, base, true, hadamard_cap)?)
        }
    };
    let n = q.arity();
    let mut r = Report::new();
    r.put("qubits", n).put("codomain", q.codomain().to_string());
    let mut amps = serde_json::Map::new();
    for s in strings {
        let z = match basis::parse(s) {
            Some((z, len)) if len == n => z,
            _ => bail!("{s:?} is not a {n}-bit string"),
        };
        amps.insert(basis::format(z, n), q.query(z)?.to_string().into());
    }
    r.put("amplitudes", serde_json::Value::Object(amps));
    Ok(r)
}

// ---- circuit ----

pub enum CircuitOp {
    Decompose,
    Sparsify { unit_slots: bool, swap_as_cnots: bool },
    PreIdle,
}

pub fn circuit_op(input: &Path, op: CircuitOp, out: Option<&Path>) -> Result<Report> {
    let c = load_circuit(input)?;
    let result = match op {
        CircuitOp::Decompose => toffoli_decompose(&c)?.expanded,
        CircuitOp::Sparsify { unit_slots, swap_as_cnots } => spatial_sparsify(&c, SparsifyOptions { unit_slots, swap_as_cnots })?,
        CircuitOp::PreIdle => pre_idle(&c),
    };
    let mut r = Report::new();
    r.put("gates_in", c.len()).put("gates_out", result.len()).put("qubits_out", result.qubits());
    match out {
        Some(p) => {
            write(p, &result.to_text())?;
            r.put("written", p.display().to_string());
        }
        None => {
            r.put("circuit", result.to_text());
        }
    }
    Ok(r)
}

// ---- ham ----

pub struct BuildArgs<'a> {
    pub variant: Variant,
    pub circuit: &'a Path,
    pub x: u64,
    pub xi: u64,
    /// sparse6 only: the circuit is already laid out in rows.
    pub presparsified: bool,
    pub out: &'a Path,
    pub history_out: Option<&'a Path>,
}

pub fn build_clock(variant: Variant, c: &CircuitDescriptor, x: u64, xi: u64, presparsified: bool) -> Result<ClockHam> {
    Ok(match variant {
        Variant::FourLocal => clockham::build_4local(c, x, xi)?,
        Variant::ThreeLocal => clockham::build_3local(&toffoli_decompose(c)?, x, xi)?,
        Variant::Sparse6 if presparsified => clockham::build_sparse6(c, x, xi)?,
        Variant::Sparse6 => {
            let sp = spatial_sparsify(c, SparsifyOptions { unit_slots: true, ..Default::default() })?;
            clockham::build_sparse6(&sp, x, xi)?
        }
    })
}

pub fn ham_build(a: BuildArgs) -> Result<Report> {
    let c = load_circuit(a.circuit)?;
    let h = build_clock(a.variant, &c, a.x, a.xi, a.presparsified)?;
    write(a.out, &write_hamfile(&StoredHam::Local(h.ham.clone()), &a.variant.to_string())?)?;
    let rep = annihilation_check(&h)?;
    let mut r = Report::new();
    r.put("variant", a.variant.to_string())
        .put("register_qubits", h.register_qubits())
        .put("clock_qubits", h.clock_qubits())
        .put("terms", h.ham.terms().len())
        .put("locality_ok", h.locality_ok())
        .put("terms_stoquastic", h.terms_stoquastic())
        .put("terms_psd", h.terms_psd()?)
        .put("max_degree", h.max_degree())
        .put("history_support", rep.support)
        .put("history_annihilated", rep.annihilated())
        .put("history_energy", rep.expectation.to_string())
        .put("residual_norm", rep.residual_norm)
        .put("written", a.out.display().to_string());
    if !h.locality_ok() || !rep.annihilated() {
        r.fail();
    }
    if let Some(p) = a.history_out {
        let mut amps = BTreeMap::new();
        for z in history_support(&h)? {
            let v = h.history.query(z)?;
            if !v.is_zero() {
                amps.insert(z, v);
            }
        }
        write(p, &write_statefile(h.total_qubits(), &amps)?)?;
        r.put("history_written", p.display().to_string());
    }
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Transform {
    /// Complex → real doubling (one extra qubit, last).
    Real,
    /// Fixed-node operator for a real Hamiltonian and a guiding state.
    Fixednode,
    /// Sign gauge diag(sgn ξ)·F·diag(sgn ξ).
    Gauge,
}

pub struct TransformArgs<'a> {
    pub op: Transform,
    pub ham: &'a Path,
    pub state: Option<&'a Path>,
    pub out: &'a Path,
    /// `real` only: where to write the real half of the split state.
    pub state_out: Option<&'a Path>,
}

pub fn ham_transform(a: TransformArgs) -> Result<Report> {
    let (h, _) = load_ham(a.ham)?;
    let need_state = || -> Result<StateRef> {
        match a.state {
            Some(p) => load_state(p),
            None => bail!("this transform needs --state"),
        }
    };
    let mut r = Report::new();
    let t: HamRef = match a.op {
        Transform::Real => {
            let d = complexify_to_real(h)?;
            if let Some(out) = a.state_out {
                let half = split_real(need_state()?).0;
                write(out, &write_statefile(half.arity(), &collect_state(&half, DEFAULT_CAP)?)?)?;
                r.put("state_written", out.display().to_string());
            }
            Arc::new(d)
        }
        Transform::Fixednode => Arc::new(fixed_node(h, need_state()?)?),
        Transform::Gauge => Arc::new(sign_gauge(h, need_state()?)?),
    };
    let name = format!("{:?}", a.op).to_lowercase();
    save_ham(t.as_ref(), &name, a.out)?;
    r.put("transform", name).put("qubits", t.qubits()).put("real", t.is_real()).put("written", a.out.display().to_string());
    Ok(r)
}

// ---- oracle ----

pub fn oracle_check(ham: &Path, state: Option<&Path>, lambda: Option<&str>, cap: usize) -> Result<Report> {
    let (h, variant) = load_ham(ham)?;
    let d = densify_ham(h.as_ref(), cap)?;
    let mut r = Report::new();
    r.put("variant", variant).put("qubits", h.qubits());
    let hermitian = d.hermitian_violation()?.is_none();
    r.put("hermitian", hermitian);
    if !hermitian {
        r.fail();
        return Ok(r);
    }
    r.put("real", d.is_real());
    if d.is_real() {
        r.put("stoquastic", stoquastic_check(&d)?);
    }
    let s = spectrum(&d)?;
    r.put("ground_energy", s.ground()).put("spectrum", json!(s.values.iter().take(8).collect::<Vec<_>>()));
    if let Some(p) = state {
        let xi = load_state(p)?;
        if xi.arity() != h.qubits() {
            bail!("{}-qubit state for a {}-qubit Hamiltonian", xi.arity(), h.qubits());
        }
        let v = collect_state(xi.as_ref(), cap)?;
        let hv = apply(h.as_ref(), &v)?;
        let lam = match lambda {
            Some(l) => value(l)?,
            None => ExactValue::from_rational(BigRational::zero()),
        };
        let mismatches = v
            .keys()
            .chain(hv.keys())
            .filter(|x| {
                let a = v.get(x).map(|a| lam.mul(a)).transpose().ok().flatten().unwrap_or_else(ExactValue::zero);
                let b = hv.get(x).cloned().unwrap_or_else(ExactValue::zero);
                a.sub(&b).map(|d| !d.is_zero()).unwrap_or(true)
            })
            .count();
        r.put("eigen_lambda", lam.to_string()).put("eigen_mismatches", mismatches);
        if mismatches > 0 {
            r.fail();
        }
    }
    Ok(r)
}

// ---- verify ----

pub struct VerifyArgs<'a> {
    pub ham: &'a Path,
    pub state: &'a Path,
    pub lambda: &'a str,
    pub x_star: u64,
    pub a: &'a str,
    pub b: &'a str,
    pub trials: usize,
    pub seed: u64,
    pub t_max: Option<&'a str>,
    pub max_jumps: Option<u64>,
    pub out: Option<&'a Path>,
}

pub fn verify(a: VerifyArgs) -> Result<Report> {
    let (h, _) = load_ham(a.ham)?;
    let msg = MerlinMessage { lambda_star: value(a.lambda)?, xi: load_state(a.state)?, x_star: a.x_star };
    let mut cfg = VerifierConfig::new(value(a.a)?, value(a.b)?);
    cfg.trials = a.trials;
    cfg.seed = a.seed;
    cfg.max_jumps = a.max_jumps;
    cfg.t_max = match a.t_max {
        Some(t) => Some(value(t)?.as_rational().context("t_max must be rational")?),
        None => None,
    };
    let v = run_verifier(h, &msg, &cfg);
    let mut r = Report::new();
    r.put("decision", serde_json::to_value(&v.decision)?)
        .put("detail", v.detail.clone())
        .put("lambda_star", v.lambda_star.clone())
        .put("chain_qubits", v.chain_qubits)
        .put("complexified", v.complexified)
        .put("t_max", v.t_max)
        .put("survived", format!("{}/{}", v.survived, v.runs.len()));
    if let Some(p) = a.out {
        write(p, &(serde_json::to_string_pretty(&v)? + "\n"))?;
        r.put("trace_written", p.display().to_string());
    }
    if !v.accepted() {
        r.fail();
    }
    Ok(r)
}

// ---- fixtures ----

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FixtureKind {
    /// Exact ground state with energy 0.
    Yes,
    /// Ground energy 1 with three dishonest messages.
    No,
    /// Random complex Hamiltonian with its oracle spectrum.
    Spectrum,
    /// YES instance with the target distribution |ξ_x|²/‖ξ‖².
    Stationarity,
}

/// Files are named by role (`yes`, `no-energy`, ...) so manifests can
/// refer to them whatever seed produced them.
fn write_message(dir: &Path, fixture_name: &str, ham: &HamRef, msg: &MerlinMessage, cap: usize) -> Result<serde_json::Value> {
    let name = fixture_name.rsplitn(3, '-').last().unwrap_or(fixture_name);
    let ham_path = dir.join(format!("{name}.ham"));
    let state_path = dir.join(format!("{name}.state"));
    save_ham(ham.as_ref(), "explicit", &ham_path)?;
    write(&state_path, &write_statefile(msg.xi.arity(), &collect_state(msg.xi.as_ref(), cap)?)?)?;
    Ok(json!({
        "name": fixture_name,
        "ham": ham_path.file_name().unwrap().to_string_lossy(),
        "state": state_path.file_name().unwrap().to_string_lossy(),
        "lambda_star": msg.lambda_star.to_string(),
        "x_star": basis::format(msg.x_star, ham.qubits()),
    }))
}

pub fn make_fixture(kind: FixtureKind, qubits: usize, complex: bool, seed: u64, dir: &Path, cap: usize) -> Result<Report> {
    if qubits == 0 || qubits + complex as usize > cap {
        bail!("{qubits} qubits is outside the oracle cap {cap}");
    }
    let mut r = Report::new();
    let mut items = Vec::new();
    match kind {
        FixtureKind::Yes | FixtureKind::Stationarity => {
            let fx = fixtures::yes_fixture(qubits, complex && kind == FixtureKind::Yes, seed);
            let mut item = write_message(dir, &fx.name, &fx.ham, &fx.msg, cap)?;
            if kind == FixtureKind::Stationarity {
                let amps = collect_state(fx.msg.xi.as_ref(), cap)?;
                let w: Vec<(u64, f64)> = amps.iter().map(|(x, a)| (*x, a.norm_sqr().map(|v| v.to_f64()).unwrap_or(0.0))).collect();
                let total: f64 = w.iter().map(|p| p.1).sum();
                let pi: serde_json::Map<String, serde_json::Value> = w.iter().map(|(x, p)| (basis::format(*x, qubits), json!(p / total))).collect();
                item["target"] = serde_json::Value::Object(pi);
            }
            items.push(item);
        }
        FixtureKind::No => {
            for fx in fixtures::no_fixtures(qubits, seed) {
                items.push(write_message(dir, &fx.name, &fx.ham, &fx.msg, cap)?);
            }
        }
        FixtureKind::Spectrum => {
            let h: HamRef = Arc::new(fixtures::random_hermitian(qubits, complex, seed));
            save_ham(h.as_ref(), "explicit", &dir.join("spectrum.ham"))?;
            let s = spectrum(&densify_ham(h.as_ref(), cap)?)?;
            items.push(json!({ "name": format!("spectrum-{qubits}-s{seed}"), "ham": "spectrum.ham", "spectrum": s.values }));
        }
    }
    let thresholds = fixtures::thresholds();
    let index = json!({ "kind": format!("{kind:?}").to_lowercase(), "seed": seed, "a": thresholds.0.to_string(), "b": thresholds.1.to_string(), "items": items });
    let index_path = dir.join("fixture.json");
    write(&index_path, &(serde_json::to_string_pretty(&index)? + "\n"))?;
    r.put("items", items.len()).put("index", index_path.display().to_string());
    Ok(r)
}
