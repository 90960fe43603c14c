mod commands;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use rtorsion::Error;

/// Higher-dimensional Reidemeister torsion of Seifert fibered spaces,
/// Brieskorn spheres and their building blocks.
#[derive(Debug, Parser)]
#[command(name = "rtorsion", version)]
pub struct Cli {
    /// Output format; the default depends on the command.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write to this file instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// log|Tor| for a range of N.
    Torsion(TorsionArgs),
    /// Limits of log|Tor|/(2N)² and log|Tor|/(2N).
    Limits(LimitsArgs),
    /// Normalized torsion against its limit and the a priori error bound.
    Convergence(ConvergenceArgs),
    /// Johnson triples of 1/n surgery on the (p, q) torus knot.
    Brieskorn(BrieskornArgs),
    /// Character-variety components of a Seifert fibered homology sphere.
    Charvar(CharvarArgs),
    /// Internal consistency checks.
    Verify(VerifyArgs),
}

/// The space and representation to work with.
#[derive(Debug, Args, Default)]
pub struct Target {
    /// Seifert index "b; g; a1/b1, a2/b2, ...", a JSON document, or @FILE.
    #[arg(long)]
    pub seifert: Option<String>,

    /// Rotation numbers ξ_j of the exceptional fibers, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub xi: Option<String>,

    /// Exponents η_j of the exceptional fiber cores, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<String>,

    /// Circle representation "η/λ".
    #[arg(long, allow_hyphen_values = true)]
    pub circle: Option<String>,

    /// Torus knot "p,q" (with --ab).
    #[arg(long = "torus-knot")]
    pub torus_knot: Option<String>,

    /// Torus-knot representation parameters "a,b".
    #[arg(long)]
    pub ab: Option<String>,

    /// Brieskorn sphere from surgery, "p,q,n" (with --triple).
    #[arg(long, allow_hyphen_values = true)]
    pub brieskorn: Option<String>,

    /// Johnson triple "a,b,c".
    #[arg(long)]
    pub triple: Option<String>,
}

#[derive(Debug, Args)]
pub struct TorsionArgs {
    #[command(flatten)]
    pub target: Target,

    /// Torus with generators of the given finite orders "q,h" (generic algorithm).
    #[arg(long)]
    pub torus: Option<String>,

    /// Compute circle torsion with the generic algorithm instead of the closed form.
    #[arg(long)]
    pub oracle: bool,

    /// A single N.
    #[arg(long = "N")]
    pub n: Option<u64>,

    #[arg(long = "N-min", default_value_t = 1)]
    pub n_min: u64,

    #[arg(long = "N-max", default_value_t = 10)]
    pub n_max: u64,
}

#[derive(Debug, Args)]
pub struct LimitsArgs {
    #[command(flatten)]
    pub target: Target,

    /// Half-orders λ_j directly, comma separated.
    #[arg(long)]
    pub lambdas: Option<String>,
}

#[derive(Debug, Args)]
pub struct ConvergenceArgs {
    #[command(flatten)]
    pub target: Target,

    #[arg(long = "N-max", default_value_t = 1000)]
    pub n_max: u64,

    /// Emit every STRIDE-th N (the last N is always emitted).
    #[arg(long, default_value_t = 1)]
    pub stride: u64,
}

#[derive(Debug, Args)]
pub struct BrieskornArgs {
    #[arg(long)]
    pub p: i64,

    #[arg(long)]
    pub q: i64,

    #[arg(long, allow_hyphen_values = true)]
    pub n: i64,

    /// List the triples instead of a summary.
    #[arg(long)]
    pub list: bool,

    /// Include non-acyclic triples in the list.
    #[arg(long)]
    pub all: bool,
}

#[derive(Debug, Args)]
pub struct CharvarArgs {
    /// Seifert index "b; g; a1/b1, ...", a JSON document, or @FILE.
    #[arg(long)]
    pub seifert: String,

    /// Report the components of largest and smallest limit.
    #[arg(long)]
    pub extremes: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Small oracles only.
    #[arg(long)]
    pub quick: bool,

    /// Run only this check.
    #[arg(long)]
    pub check: Option<String>,

    /// Negative control "CHECK=EPSILON".
    #[arg(long)]
    pub perturb: Option<String>,
}

/// Failures mapped to exit codes.
#[derive(Debug)]
pub enum Failure {
    Math(Error),
    Io(std::io::Error),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Math(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Math(e) if e.is_parse_error() => 2,
            Failure::Math(_) => 3,
            Failure::Verification(_) => 4,
            Failure::Io(_) => 1,
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    if let Ok(value) = std::env::var("RTORSION_THREADS") {
        let threads: usize = value
            .trim()
            .parse()
            .map_err(|_| Error::parse("RTORSION_THREADS", format!("expected a positive integer, got {value:?}")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::parse("RTORSION_THREADS", e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| commands::run(&cli));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Math(e) => eprintln!("rtorsion: {e}"),
                Failure::Io(e) => eprintln!("rtorsion: {e}"),
                Failure::Verification(msg) => eprintln!("rtorsion: verification failed: {msg}"),
            }
            ExitCode::from(failure.exit_code())
        }
    }
}
