//! Command-line front end for `curv2k-core`.
//!
//! [`run`] parses argv, dispatches one verb and returns the process exit code:
//! 0 on success, 1 when a check fails or an unrequested counterexample turns
//! up, 2 on usage errors and rejected inputs.

mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use num_traits::Signed;

use curv2k_core::curvature::CurvatureTensor;
use curv2k_core::extremum::{
    brute_force_min, check_lower_bound, sharpness_witness, theta, Conclusion, LowerBound,
    OracleConfig,
};
use curv2k_core::identity::{Analysis, Outcome};
use curv2k_core::models::{standard_corpus, ModelSpec};
use curv2k_core::rational::{parse_rational, to_f64};
use curv2k_core::second_kind::{second_kind_matrix, spectrum};
use curv2k_core::Error;

pub use output::Format;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "curv2k",
    version,
    about = "Curvature operator of the second kind: thresholds, spectra and checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the threshold θ(n).
    Theta {
        #[arg(long)]
        n: usize,
        /// Print the exact rational instead of a float.
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        fmt: FormatArg,
    },
    /// Eigenvalues of R̊ for a model or tensor file.
    Spectrum {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        fmt: FormatArg,
    },
    /// Run the identity suite.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        /// Threshold used by the inequality checks; defaults to θ(n).
        #[arg(long, value_name = "RATIONAL")]
        theta: Option<String>,
        #[command(flatten)]
        fmt: FormatArg,
    },
    /// Certify the minimum of the cubic f over the constrained simplex.
    Extremum {
        #[arg(long)]
        n: usize,
        #[arg(long, value_name = "RATIONAL")]
        theta: Option<String>,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
        #[command(flatten)]
        seed: SeedArg,
        /// Exit 0 even if f < 0 somewhere.
        #[arg(long)]
        allow_counterexample: bool,
        #[command(flatten)]
        fmt: FormatArg,
    },
    /// Exact f(λ¹) at θ(n) + ε.
    Sharpness {
        #[arg(long)]
        n: usize,
        #[arg(long, value_name = "RATIONAL", default_value = "1/100")]
        eps: String,
        /// Print λ¹ as exact rationals.
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        fmt: FormatArg,
    },
    /// Run the identity suite over named models plus seeded random tensors.
    Corpus {
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[command(flatten)]
        seed: SeedArg,
        /// Write every member as a tensor JSON file into this directory.
        #[arg(long, value_name = "DIR")]
        dump: Option<PathBuf>,
        #[command(flatten)]
        fmt: FormatArg,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct InputArgs {
    /// Model string, e.g. `sphere:n=4,k=1`, `s2xs2`, `cpm:m=2`.
    #[arg(long)]
    model: Option<String>,
    /// Tensor JSON file (`{"n":…,"entries":[…],"representation":"rank4"}`).
    #[arg(long, value_name = "FILE")]
    tensor: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FormatArg {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Debug, Args)]
struct SeedArg {
    #[arg(long, env = "CURV2K_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Core(Error),
    Io(std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type CmdResult = Result<i32, CliError>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Core(e)) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::NoConvergence { .. } => EXIT_FAILURE,
                _ => EXIT_USAGE,
            }
        }
        Err(CliError::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAILURE
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> CmdResult {
    match cmd {
        Command::Theta { n, exact, fmt } => cmd_theta(n, exact, fmt.format, out),
        Command::Spectrum { input, fmt } => cmd_spectrum(&input, fmt.format, out),
        Command::Verify { input, theta, fmt } => {
            cmd_verify(&input, theta.as_deref(), fmt.format, out)
        }
        Command::Extremum {
            n,
            theta,
            budget,
            seed,
            allow_counterexample,
            fmt,
        } => cmd_extremum(
            n,
            theta.as_deref(),
            budget,
            seed.seed,
            allow_counterexample,
            fmt.format,
            out,
        ),
        Command::Sharpness { n, eps, exact, fmt } => cmd_sharpness(n, &eps, exact, fmt.format, out),
        Command::Corpus {
            count,
            seed,
            dump,
            fmt,
        } => cmd_corpus(count, seed.seed, dump.as_deref(), fmt.format, out),
    }
}

fn parse_q(flag: &str, s: &str) -> Result<BigRational, CliError> {
    parse_rational(s).map_err(|e| CliError::Usage(format!("--{flag}: {e}")))
}

/// The tensor to analyse and whether it is a locally symmetric model.
fn load_input(input: &InputArgs) -> Result<(CurvatureTensor, bool), CliError> {
    if let Some(m) = &input.model {
        let spec: ModelSpec = m.parse()?;
        return Ok((spec.build()?, spec.is_symmetric_space()));
    }
    let path = input.tensor.as_ref().expect("clap enforces one input");
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok((CurvatureTensor::from_json(&text)?, false))
}

fn threshold_for(n: usize, overridden: Option<&str>) -> Result<BigRational, CliError> {
    match overridden {
        Some(s) => parse_q("theta", s),
        None if n < 4 => Err(CliError::Usage(format!(
            "theta(n) needs n >= 4 (n = {n}); pass --theta"
        ))),
        None => Ok(theta(n)?.exact),
    }
}

fn cmd_theta(n: usize, exact: bool, format: Format, out: &mut dyn Write) -> CmdResult {
    let t = theta(n)?;
    output::theta(out, format, &t, exact)?;
    Ok(EXIT_OK)
}

fn cmd_spectrum(input: &InputArgs, format: Format, out: &mut dyn Write) -> CmdResult {
    let (r, _) = load_input(input)?;
    let s = spectrum(&second_kind_matrix(&r))?;
    output::spectrum(out, format, &s)?;
    Ok(EXIT_OK)
}

fn cmd_verify(
    input: &InputArgs,
    theta_arg: Option<&str>,
    format: Format,
    out: &mut dyn Write,
) -> CmdResult {
    let (r, symmetric) = load_input(input)?;
    let th = to_f64(&threshold_for(r.n(), theta_arg)?);
    let outcomes = Analysis::new(&r)?.verify_all(th, symmetric);
    output::outcomes(out, format, &outcomes)?;
    Ok(if outcomes.iter().any(Outcome::failed) {
        EXIT_FAILURE
    } else {
        EXIT_OK
    })
}

fn cmd_extremum(
    n: usize,
    theta_arg: Option<&str>,
    budget: usize,
    seed: u64,
    allow_counterexample: bool,
    format: Format,
    out: &mut dyn Write,
) -> CmdResult {
    let th = threshold_for(n, theta_arg)?;
    let report = brute_force_min(n, &th, &OracleConfig::new(budget, seed))?;
    output::extremum(out, format, &report)?;
    let bad = report.conclusion == Conclusion::CounterexampleFound && !allow_counterexample;
    Ok(if bad { EXIT_FAILURE } else { EXIT_OK })
}

fn cmd_sharpness(
    n: usize,
    eps: &str,
    exact: bool,
    format: Format,
    out: &mut dyn Write,
) -> CmdResult {
    let eps = parse_q("eps", eps)?;
    if eps.is_negative() {
        return Err(CliError::Usage(format!("--eps must be >= 0 (got {eps})")));
    }
    let w = sharpness_witness(n, &eps)?;
    output::sharpness(out, format, &w, exact)?;
    Ok(if w.is_witness() {
        EXIT_OK
    } else {
        EXIT_FAILURE
    })
}

/// Per-member summary of a corpus run.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CorpusRow {
    pub index: usize,
    pub model: String,
    pub n: usize,
    pub einstein: bool,
    pub mean: f64,
    pub min_over_mean: Option<f64>,
    pub lower_bound_holds: bool,
    pub checked: usize,
    pub failed: usize,
    pub chain_slack: Option<f64>,
}

fn cmd_corpus(
    count: usize,
    seed: u64,
    dump: Option<&Path>,
    format: Format,
    out: &mut dyn Write,
) -> CmdResult {
    let corpus = standard_corpus(count, seed)?;
    if let Some(dir) = dump {
        std::fs::create_dir_all(dir)?;
    }
    let mut rows = Vec::with_capacity(corpus.len());
    for (index, entry) in corpus.iter().enumerate() {
        if let Some(dir) = dump {
            let file = dir.join(format!("{index:04}_{}.json", entry.spec.kind()));
            std::fs::write(file, entry.tensor.to_json())?;
        }
        let n = entry.spec.n();
        let th = theta(n)?.value;
        let a = Analysis::new(&entry.tensor)?;
        let outcomes = a.verify_all(th, entry.spec.is_symmetric_space());
        let chain_slack = a.chain_inequality(th).report().and_then(|r| r.slack);
        rows.push(CorpusRow {
            index,
            model: entry.spec.to_string(),
            n,
            einstein: a.einstein,
            mean: a.spectrum.mean,
            min_over_mean: a.spectrum.min_over_mean(),
            lower_bound_holds: matches!(
                check_lower_bound(&a.spectrum, th),
                LowerBound::Holds { .. }
            ),
            checked: outcomes.iter().filter(|o| o.report().is_some()).count(),
            failed: outcomes.iter().filter(|o| o.failed()).count(),
            chain_slack,
        });
    }
    output::corpus(out, format, &rows)?;
    Ok(if rows.iter().any(|r| r.failed > 0) {
        EXIT_FAILURE
    } else {
        EXIT_OK
    })
}
