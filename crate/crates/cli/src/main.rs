mod manifest;
mod ops;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand, ValueEnum};
use succinct::clockham::Variant;
use succinct::oracle::DEFAULT_CAP;

use ops::{CircuitOp, FixtureKind, StateSource, Transform};
use report::Report;

#[derive(Parser)]
#[command(name = "succinct", version, about = "Exact succinct states, clock Hamiltonians and the stoquastic verifier")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Number encodings.
    #[command(subcommand)]
    Num(NumCmd),
    /// Amplitude queries.
    #[command(subcommand)]
    State(StateCmd),
    /// Circuit rewrites.
    #[command(subcommand)]
    Circuit(CircuitCmd),
    /// Clock Hamiltonians and transforms.
    #[command(subcommand)]
    Ham(HamCmd),
    /// Dense reference checks.
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Run the verifier on a Hamiltonian and Merlin's message.
    Verify {
        #[arg(long)]
        ham: PathBuf,
        #[arg(long)]
        state: PathBuf,
        /// Claimed energy λ*.
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// Start string x*.
        #[arg(long, default_value = "")]
        x_star: String,
        #[arg(long, default_value = "1/4")]
        a: String,
        #[arg(long, default_value = "1/2")]
        b: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Simulated time per run (default M³).
        #[arg(long)]
        t_max: Option<String>,
        #[arg(long)]
        max_jumps: Option<u64>,
        /// Write the full verdict with every run here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Run a pipeline manifest.
    Run { manifest: PathBuf },
    /// Write fixture files into a directory.
    Fixture {
        #[arg(value_enum)]
        kind: FixtureKind,
        #[arg(long, default_value_t = 3)]
        qubits: usize,
        #[arg(long)]
        complex: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        dir: PathBuf,
    },
}

#[derive(Subcommand)]
enum NumCmd {
    /// Encode a value (re or re,im; rationals may be unreduced).
    Encode {
        #[arg(allow_hyphen_values = true)]
        value: String,
        /// Class such as C_3 or Q_4[omega,sqrthalf:2].
        #[arg(long)]
        class: String,
    },
    Decode {
        bits: String,
        #[arg(long)]
        class: String,
    },
    /// Exact x/y in the widened ratio class.
    Ratio {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
        #[arg(long)]
        class: String,
    },
    /// Smallest class of a family holding all values.
    Fit {
        #[arg(long)]
        family: String,
        #[arg(allow_hyphen_values = true, required = true)]
        values: Vec<String>,
    },
}

#[derive(Subcommand)]
enum StateCmd {
    /// Query amplitudes of a state file or of a circuit's history state.
    Query {
        #[arg(long, conflicts_with = "circuit")]
        file: Option<PathBuf>,
        #[arg(long)]
        circuit: Option<PathBuf>,
        #[arg(long, default_value = "")]
        x: String,
        #[arg(long, default_value = "")]
        xi: String,
        #[arg(long, default_value_t = 4)]
        hadamard_cap: usize,
        #[arg(required = true)]
        strings: Vec<String>,
    },
}

#[derive(Subcommand)]
enum CircuitCmd {
    /// Replace each Toffoli with its 15-gate Clifford+T block.
    Decompose {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lay the circuit out in rows joined by SWAP layers.
    Sparsify {
        input: PathBuf,
        #[arg(long)]
        unit_slots: bool,
        #[arg(long)]
        swap_as_cnots: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Prepend identities until K+1 is a perfect square.
    Preidle {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum HamCmd {
    /// Build a clock Hamiltonian from a circuit and audit its history state.
    Build {
        #[arg(long)]
        variant: Variant,
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long, default_value = "")]
        x: String,
        #[arg(long, default_value = "")]
        xi: String,
        /// sparse6: the circuit is already in row layout.
        #[arg(long)]
        presparsified: bool,
        #[arg(long)]
        out: PathBuf,
        /// Also write the history state.
        #[arg(long)]
        history: Option<PathBuf>,
    },
    Transform {
        #[arg(long, value_enum)]
        op: Transform,
        #[arg(long)]
        ham: PathBuf,
        #[arg(long)]
        state: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// real: write the real half of the split state here.
        #[arg(long)]
        state_out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Hermiticity, stoquasticity, spectrum, and an exact eigenvector test.
    Check {
        #[arg(long)]
        ham: PathBuf,
        #[arg(long)]
        state: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
}

fn dispatch(cmd: Cmd, json: bool) -> Result<(String, bool)> {
    let single = |r: Report| (r.render(json), r.ok);
    Ok(match cmd {
        Cmd::Num(c) => single(match c {
            NumCmd::Encode { value, class } => ops::num_encode(&value, &class)?,
            NumCmd::Decode { bits, class } => ops::num_decode(&bits, &class)?,
            NumCmd::Ratio { x, y, class } => ops::num_ratio(&x, &y, &class)?,
            NumCmd::Fit { family, values } => ops::num_fit(&values, &family)?,
        }),
        Cmd::State(StateCmd::Query { file, circuit, x, xi, hadamard_cap, strings }) => {
            let src = match (&file, &circuit) {
                (Some(f), _) => StateSource::File(f),
                (None, Some(c)) => StateSource::History { circuit: c, x: ops::bits(&x)?, xi: ops::bits(&xi)?, hadamard_cap },
                (None, None) => anyhow::bail!("give --file or --circuit"),
            };
            single(ops::state_query(src, &strings)?)
        }
        Cmd::Circuit(c) => single(match c {
            CircuitCmd::Decompose { input, out } => ops::circuit_op(&input, CircuitOp::Decompose, out.as_deref())?,
            CircuitCmd::Sparsify { input, unit_slots, swap_as_cnots, out } => {
                ops::circuit_op(&input, CircuitOp::Sparsify { unit_slots, swap_as_cnots }, out.as_deref())?
            }
            CircuitCmd::Preidle { input, out } => ops::circuit_op(&input, CircuitOp::PreIdle, out.as_deref())?,
        }),
        Cmd::Ham(HamCmd::Build { variant, circuit, x, xi, presparsified, out, history }) => single(ops::ham_build(ops::BuildArgs {
            variant,
            circuit: &circuit,
            x: ops::bits(&x)?,
            xi: ops::bits(&xi)?,
            presparsified,
            out: &out,
            history_out: history.as_deref(),
        })?),
        Cmd::Ham(HamCmd::Transform { op, ham, state, out, state_out }) => {
            single(ops::ham_transform(ops::TransformArgs { op, ham: &ham, state: state.as_deref(), out: &out, state_out: state_out.as_deref() })?)
        }
        Cmd::Oracle(OracleCmd::Check { ham, state, lambda, cap }) => single(ops::oracle_check(&ham, state.as_deref(), lambda.as_deref(), cap)?),
        Cmd::Verify { ham, state, lambda, x_star, a, b, trials, seed, t_max, max_jumps, trace } => single(ops::verify(ops::VerifyArgs {
            ham: &ham,
            state: &state,
            lambda: &lambda,
            x_star: ops::bits(&x_star)?,
            a: &a,
            b: &b,
            trials,
            seed,
            t_max: t_max.as_deref(),
            max_jumps,
            out: trace.as_deref(),
        })?),
        Cmd::Fixture { kind, qubits, complex, seed, dir } => single(ops::make_fixture(kind, qubits, complex, seed, &dir, DEFAULT_CAP)?),
        Cmd::Run { manifest: path } => {
            let (steps, ok) = manifest::run(&path)?;
            let text = if json {
                let arr: Vec<serde_json::Value> = steps.iter().map(|(l, r)| serde_json::json!({ "step": l, "report": r.to_json() })).collect();
                serde_json::to_string_pretty(&serde_json::json!({ "ok": ok, "steps": arr }))? + "\n"
            } else {
                let mut s = String::new();
                for (l, r) in &steps {
                    s.push_str(&format!("== {l}: {}\n", if r.ok { "ok" } else { "FAILED" }));
                    s.push_str(&r.to_text());
                }
                s.push_str(if ok { "pipeline ok\n" } else { "pipeline FAILED\n" });
                s
            };
            (text, ok)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = matches!(cli.format, Format::Json);
    match dispatch(cli.cmd, json) {
        Ok((text, ok)) => {
            print!("{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
