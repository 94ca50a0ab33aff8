//! Command-line front end. Every command prints one JSON document, either to
//! stdout or to the file given by `--out`.
//!
//! Exit codes: 0 on success, 1 when a computation fails (or a suite reports
//! violations), 2 when the arguments or input files are unusable.

use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::channels::apply_local;
use crate::classical::{
    binary_mu_exact, classical_maximal_correlation, is_decomposable, lemma_lower_bound,
    JointDistribution, DEFAULT_SUPPORT_TOL,
};
use crate::error::Error;
use crate::harness::{
    oracle_mu, run_dpi_suite, run_extreme_suite, run_oracle_suite, run_tensorization_suite,
    SuiteReport, DEFAULT_MAX_ITERS, DEFAULT_RESTARTS,
};
use crate::io::{self, matrix_to_rows};
use crate::maxcorr::{
    common_data_witness, extract_optimizers, maximal_correlation, schmidt_spectrum,
    DEFAULT_WITNESS_TOL,
};
use crate::states::{mutual_information, BipartiteState, Side};

const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), " (format 1)");

#[derive(Debug, Parser)]
#[command(name = "qmaxcorr", version = VERSION, about = "Maximal correlation of bipartite quantum states")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct StateArg {
    /// JSON state file.
    #[arg(long)]
    state: PathBuf,
}

#[derive(Debug, Args)]
struct DistArg {
    /// CSV distribution: one row per outcome of A.
    #[arg(long)]
    dist: PathBuf,
}

#[derive(Debug, Args)]
struct SuiteArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    trials: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SideArg {
    A,
    B,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Maximal correlation of a state.
    Mu(StateArg),
    /// All Schmidt coefficients of the normalized operator.
    Spectrum {
        #[command(flatten)]
        input: StateArg,
        /// Include the Schmidt operators.
        #[arg(long)]
        vectors: bool,
    },
    /// Local observables attaining the maximal correlation.
    Optimizers(StateArg),
    /// Maximal correlation of a classical distribution.
    ClassicalMu(DistArg),
    /// Closed form for a 2x2 distribution, with the diagonal lower bound.
    BinaryExact(DistArg),
    /// Splits a distribution into two non-communicating blocks if possible.
    Decompose {
        #[command(flatten)]
        input: DistArg,
        #[arg(long, default_value_t = DEFAULT_SUPPORT_TOL)]
        tol: f64,
    },
    /// Local binary measurements yielding a shared bit, or "absent".
    CommonData {
        #[command(flatten)]
        input: StateArg,
        #[arg(long, default_value_t = DEFAULT_WITNESS_TOL)]
        tol: f64,
    },
    /// Randomized data-processing checks.
    DpiSuite {
        #[command(flatten)]
        suite: SuiteArgs,
        /// Register dimensions as `A,B`.
        #[arg(long, default_value = "3,3", value_parser = parse_dims)]
        dims: (usize, usize),
    },
    /// Randomized tensorization checks.
    TensorSuite {
        #[command(flatten)]
        suite: SuiteArgs,
        #[arg(long, default_value = "2,2", value_parser = parse_dims)]
        dims: (usize, usize),
    },
    /// Randomized checks of the extreme values 0 and 1.
    ExtremeSuite {
        #[command(flatten)]
        suite: SuiteArgs,
    },
    /// Variational value against the spectral value, for one state or a suite.
    OracleCompare {
        #[command(flatten)]
        suite: SuiteArgs,
        #[arg(long)]
        state: Option<PathBuf>,
    },
    /// Quantum mutual information in bits.
    Mi(StateArg),
    /// Applies a channel to one register and writes the resulting state.
    ApplyChannel {
        #[command(flatten)]
        input: StateArg,
        /// JSON channel file.
        #[arg(long)]
        channel: PathBuf,
        #[arg(long, value_enum, default_value = "a")]
        side: SideArg,
    },
}

fn parse_dims(text: &str) -> Result<(usize, usize), String> {
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| format!("expected `A,B`, got `{text}`"))?;
    let parse = |s: &str| -> Result<usize, String> {
        match s.trim().parse::<usize>() {
            Ok(d) if d >= 1 => Ok(d),
            _ => Err(format!("`{s}` is not a positive dimension")),
        }
    };
    Ok((parse(a)?, parse(b)?))
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Compute(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Compute(m) => m,
        }
    }
}

/// Input files that fail to load are usage errors.
fn load<T>(path: &Path, read: impl Fn(&Path) -> crate::Result<T>) -> Result<T, Failure> {
    read(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn compute<T>(r: crate::Result<T>) -> Result<T, Failure> {
    r.map_err(|e: Error| Failure::Compute(e.to_string()))
}

fn dist_rows(p: &JointDistribution) -> Value {
    json!(p.to_rows())
}

fn suite_output(report: SuiteReport) -> Result<Value, Failure> {
    let passed = report.passed();
    let value = serde_json::to_value(&report).expect("report serializes");
    if passed {
        Ok(value)
    } else {
        Err(Failure::Compute(format!(
            "{} suite: {} violated checks (max violation {:e})\n{}",
            report.suite,
            report.failures.len(),
            report.max_violation,
            report.to_json()
        )))
    }
}

fn state_output(rho: &BipartiteState) -> Value {
    serde_json::to_value(io::StateFile::from_state(rho)).expect("state serializes")
}

fn execute(command: Command) -> Result<Value, Failure> {
    match command {
        Command::Mu(arg) => {
            let rho = load(&arg.state, io::read_state)?;
            Ok(json!({ "mu": compute(maximal_correlation(&rho))? }))
        }
        Command::Spectrum { input, vectors } => {
            let rho = load(&input.state, io::read_state)?;
            let spectrum = compute(schmidt_spectrum(&rho))?;
            let mut out = json!({ "coefficients": spectrum.coefficients });
            if vectors {
                out["a_vectors"] = json!(spectrum.a_vectors.iter().map(matrix_to_rows).collect::<Vec<_>>());
                out["b_vectors"] = json!(spectrum.b_vectors.iter().map(matrix_to_rows).collect::<Vec<_>>());
            }
            Ok(out)
        }
        Command::Optimizers(arg) => {
            let rho = load(&arg.state, io::read_state)?;
            let pair = compute(extract_optimizers(&rho))?;
            Ok(json!({
                "x": matrix_to_rows(&pair.x_a),
                "y": matrix_to_rows(&pair.y_b),
                "value": pair.value,
                "hermitian": pair.hermitian,
                "degenerate": pair.degenerate,
            }))
        }
        Command::ClassicalMu(arg) => {
            let p = load(&arg.dist, io::read_distribution)?;
            Ok(json!({ "mu": compute(classical_maximal_correlation(&p))? }))
        }
        Command::BinaryExact(arg) => {
            let p = load(&arg.dist, io::read_distribution)?;
            let mu = compute(binary_mu_exact(&p))?;
            let bound = match lemma_lower_bound(&p) {
                Ok(b) => json!(b),
                Err(Error::ZeroDiagonal) => Value::Null,
                Err(e) => return Err(Failure::Compute(e.to_string())),
            };
            Ok(json!({ "mu": mu, "lower_bound": bound }))
        }
        Command::Decompose { input, tol } => {
            let p = load(&input.dist, io::read_distribution)?;
            let (decomposable, partition) = is_decomposable(&p, tol);
            let partition = partition.map(|part| {
                json!({ "u0": part.u0, "u1": part.u1, "v0": part.v0, "v1": part.v1 })
            });
            Ok(json!({ "decomposable": decomposable, "partition": partition }))
        }
        Command::CommonData { input, tol } => {
            let rho = load(&input.state, io::read_state)?;
            let witness = match compute(common_data_witness(&rho, tol))? {
                None => json!("absent"),
                Some(w) => json!({
                    "measurement_a": matrix_to_rows(w.measurement_a.effect()),
                    "measurement_b": matrix_to_rows(w.measurement_b.effect()),
                    "distribution": dist_rows(&w.distribution),
                    "cross_terms": w.cross_terms(),
                }),
            };
            Ok(json!({ "witness": witness }))
        }
        Command::DpiSuite { suite, dims } => {
            suite_output(run_dpi_suite(suite.trials, dims, suite.seed))
        }
        Command::TensorSuite { suite, dims } => {
            suite_output(run_tensorization_suite(suite.trials, dims, suite.seed))
        }
        Command::ExtremeSuite { suite } => suite_output(run_extreme_suite(suite.trials, suite.seed)),
        Command::OracleCompare { suite, state: None } => {
            suite_output(run_oracle_suite(suite.trials, suite.seed))
        }
        Command::OracleCompare {
            suite,
            state: Some(path),
        } => {
            let rho = load(&path, io::read_state)?;
            let spectral = compute(maximal_correlation(&rho))?;
            let oracle = compute(oracle_mu(&rho, DEFAULT_RESTARTS, DEFAULT_MAX_ITERS, suite.seed))?;
            Ok(json!({
                "mu": spectral,
                "oracle": oracle,
                "difference": (spectral - oracle).abs(),
            }))
        }
        Command::Mi(arg) => {
            let rho = load(&arg.state, io::read_state)?;
            Ok(json!({ "mutual_information": mutual_information(&rho) }))
        }
        Command::ApplyChannel {
            input,
            channel,
            side,
        } => {
            let rho = load(&input.state, io::read_state)?;
            let channel = load(&channel, io::read_channel)?;
            let side = match side {
                SideArg::A => Side::A,
                SideArg::B => Side::B,
            };
            let out = apply_local(&channel, &rho, side).map_err(|e| match e {
                Error::DimensionMismatch(_) => Failure::Usage(e.to_string()),
                other => Failure::Compute(other.to_string()),
            })?;
            Ok(state_output(&out))
        }
    }
}

fn emit(value: &Value, out: Option<&Path>) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("json serializes");
    match out {
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => match writeln!(std::io::stdout().lock(), "{text}") {
            // A closed pipe (e.g. `| head`) just means nobody wants the rest.
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                Err(Failure::Usage(format!("writing to stdout: {e}")))
            }
            _ => Ok(()),
        },
    }
}

fn report(failure: impl Display) {
    eprintln!("qmaxcorr: {failure}");
}

/// Parses `argv` (program name first), runs the command and returns the exit
/// code.
pub fn run_cli<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let out = cli.out.clone();
    let result = execute(cli.command).and_then(|value| emit(&value, out.as_deref()));
    match result {
        Ok(()) => 0,
        Err(failure) => {
            report(failure.message());
            failure.code()
        }
    }
}

/// `--version` text: tool version and on-disk format version.
pub fn version() -> String {
    format!("qmaxcorr {}", VERSION)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::FORMAT_VERSION;

    #[test]
    fn version_mentions_format() {
        assert!(version().contains(&format!("format {FORMAT_VERSION}")));
    }

    #[test]
    fn dims_parser() {
        assert_eq!(parse_dims("2,3"), Ok((2, 3)));
        assert_eq!(parse_dims(" 4 , 1"), Ok((4, 1)));
        assert!(parse_dims("0,2").is_err());
        assert!(parse_dims("3").is_err());
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_cli(["qmaxcorr"]), 2);
        assert_eq!(run_cli(["qmaxcorr", "bogus"]), 2);
        assert_eq!(run_cli(["qmaxcorr", "mu"]), 2);
        assert_eq!(run_cli(["qmaxcorr", "mu", "--state", "/nonexistent/state.json"]), 2);
    }

    #[test]
    fn version_exits_zero() {
        assert_eq!(run_cli(["qmaxcorr", "--version"]), 0);
    }
}
