//! Pipeline manifests: a JSON list of steps run in order, with paths
//! relative to the manifest's directory.
//!
//! ```json
//! { "schema": "succinct-pipeline/1", "seed": 7,
//!   "steps": [ { "op": "fixture", "kind": "yes", "qubits": 3, "dir": "fx" },
//!              { "op": "verify", "ham": "fx/yes-r3-s1.ham", ... } ] }
//! ```
//!
//! Steps without an explicit seed draw one from the manifest seed, on a
//! ChaCha stream numbered by the step index.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use succinct::clockham::Variant;
use succinct::oracle::DEFAULT_CAP;

use crate::ops::{self, CircuitOp, FixtureKind, Transform};
use crate::report::Report;

pub const SCHEMA: &str = "succinct-pipeline/1";

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub schema: String,
    #[serde(default)]
    pub seed: u64,
    pub steps: Vec<Step>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum Step {
    Encode {
        value: String,
        class: String,
    },
    Decode {
        bits: String,
        class: String,
    },
    Circuit {
        input: PathBuf,
        action: String,
        out: PathBuf,
    },
    Build {
        variant: String,
        circuit: PathBuf,
        #[serde(default)]
        x: String,
        #[serde(default)]
        xi: String,
        #[serde(default)]
        presparsified: bool,
        out: PathBuf,
        history: Option<PathBuf>,
    },
    Transform {
        transform: Transform,
        ham: PathBuf,
        state: Option<PathBuf>,
        out: PathBuf,
        state_out: Option<PathBuf>,
    },
    Oracle {
        ham: PathBuf,
        state: Option<PathBuf>,
        lambda: Option<String>,
    },
    Verify {
        ham: PathBuf,
        state: PathBuf,
        lambda: String,
        #[serde(default)]
        x_star: String,
        a: String,
        b: String,
        #[serde(default = "default_trials")]
        trials: usize,
        seed: Option<u64>,
        t_max: Option<String>,
        max_jumps: Option<u64>,
        out: Option<PathBuf>,
    },
    Fixture {
        kind: FixtureKind,
        qubits: usize,
        #[serde(default)]
        complex: bool,
        seed: Option<u64>,
        dir: PathBuf,
    },
}

fn default_trials() -> usize {
    100
}

impl Step {
    fn name(&self) -> &'static str {
        match self {
            Step::Encode { .. } => "encode",
            Step::Decode { .. } => "decode",
            Step::Circuit { .. } => "circuit",
            Step::Build { .. } => "build",
            Step::Transform { .. } => "transform",
            Step::Oracle { .. } => "oracle",
            Step::Verify { .. } => "verify",
            Step::Fixture { .. } => "fixture",
        }
    }
}

pub fn parse(text: &str) -> Result<Manifest> {
    let m: Manifest = serde_json::from_str(text).context("manifest is not valid JSON for this schema")?;
    if m.schema != SCHEMA {
        bail!("unsupported schema {:?}, expected {SCHEMA:?}", m.schema);
    }
    Ok(m)
}

fn step_seed(seed: u64, index: usize) -> u64 {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index as u64);
    r.next_u64()
}

fn run_step(step: &Step, base: &Path, seed: u64) -> Result<Report> {
    let p = |q: &Path| base.join(q);
    let po = |q: &Option<PathBuf>| q.as_ref().map(|q| base.join(q));
    match step {
        Step::Encode { value, class } => ops::num_encode(value, class),
        Step::Decode { bits, class } => ops::num_decode(bits, class),
        Step::Circuit { input, action, out } => {
            let op = match action.as_str() {
                "decompose" => CircuitOp::Decompose,
                "sparsify" => CircuitOp::Sparsify { unit_slots: true, swap_as_cnots: false },
                "preidle" => CircuitOp::PreIdle,
                other => bail!("unknown circuit action {other:?}"),
            };
            ops::circuit_op(&p(input), op, Some(&p(out)))
        }
        Step::Build { variant, circuit, x, xi, presparsified, out, history } => {
            let variant: Variant = variant.parse().map_err(anyhow::Error::msg)?;
            let h = po(history);
            ops::ham_build(ops::BuildArgs {
                variant,
                circuit: &p(circuit),
                x: ops::bits(x)?,
                xi: ops::bits(xi)?,
                presparsified: *presparsified,
                out: &p(out),
                history_out: h.as_deref(),
            })
        }
        Step::Transform { transform, ham, state, out, state_out } => {
            let (s, so) = (po(state), po(state_out));
            ops::ham_transform(ops::TransformArgs { op: *transform, ham: &p(ham), state: s.as_deref(), out: &p(out), state_out: so.as_deref() })
        }
        Step::Oracle { ham, state, lambda } => ops::oracle_check(&p(ham), po(state).as_deref(), lambda.as_deref(), DEFAULT_CAP),
        Step::Verify { ham, state, lambda, x_star, a, b, trials, seed: s, t_max, max_jumps, out } => {
            let o = po(out);
            ops::verify(ops::VerifyArgs {
                ham: &p(ham),
                state: &p(state),
                lambda,
                x_star: ops::bits(x_star)?,
                a,
                b,
                trials: *trials,
                seed: s.unwrap_or(seed),
                t_max: t_max.as_deref(),
                max_jumps: *max_jumps,
                out: o.as_deref(),
            })
        }
        Step::Fixture { kind, qubits, complex, seed: s, dir } => ops::make_fixture(*kind, *qubits, *complex, s.unwrap_or(seed), &p(dir), DEFAULT_CAP),
    }
}

/// Runs every step in order, stopping at the first error. The returned
/// reports are in step order; `ok` is false when any step failed its check.
pub fn run(path: &Path) -> Result<(Vec<(String, Report)>, bool)> {
    let m = parse(&ops::read(path)?)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let mut out = Vec::new();
    let mut ok = true;
    for (i, step) in m.steps.iter().enumerate() {
        let label = format!("step {} ({})", i + 1, step.name());
        let r = run_step(step, base, step_seed(m.seed, i)).with_context(|| label.clone())?;
        ok &= r.ok;
        out.push((label, r));
    }
    Ok((out, ok))
}
