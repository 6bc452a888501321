//! `polyops` — command-line driver for the operator-polynomial toolkit.
//!
//! Every run emits a deterministic report: the `results` block depends only
//! on the configuration and `--seed`, assertions carry named budgets, and
//! `--json`/`--csv` write machine-readable copies.  Exit codes: 0 all
//! assertions pass, 1 assertion failure, 2 configuration or compute error.

mod commands;
mod parse;
mod report;
mod suites;

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "polyops",
    version,
    about = "Numerical toolkit for operator simplification by polynomials",
    disable_help_subcommand = true
)]
pub struct Cli {
    /// Seed for every randomized construction in the run.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Scales tolerance-style assertion budgets (identities and gallery
    /// checks keep their intrinsic budgets).
    #[arg(long = "tol-scale", global = true, default_value_t = 1.0)]
    pub tol_scale: f64,

    /// Write the full JSON report to this path.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,

    /// Write tabular output (supported by `growth` and `zoo converge`).
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Minimal achievable ||p(A)|| over monic polynomials of one degree
    Capacity(CapacityArgs),
    /// Resolvent growth characteristics m, N, T across radii
    Growth(GrowthArgs),
    /// Spectral projection with certified norm and pole-count bounds
    Project(ProjectArgs),
    /// Split A into an algebraic part plus a small-spectrum part
    Split(SplitArgs),
    /// Polynomial classification: minimal/simplifying polynomials and
    /// nearest polynomially-normal/unitary certificates
    Classify(ClassifyArgs),
    /// Multicentric series representation and matrix round-trip
    Multicentric(MulticentricArgs),
    /// Block upper-triangular toolkit: Sylvester, spectra, degree bounds
    Block(BlockArgs),
    /// Structured example operators with closed-form oracles
    Zoo(ZooArgs),
    /// Randomized verification suites
    Verify(VerifyArgs),
    /// Execute a run described by a key=value config file
    Run(RunArgs),
}

#[derive(Args)]
pub struct CapacityArgs {
    /// Input matrix (cmx format).
    #[arg(long)]
    pub matrix: PathBuf,
    /// Polynomial degree.
    #[arg(long)]
    pub degree: usize,
    /// Compute the whole profile for degrees 1..=degree.
    #[arg(long, default_value_t = false)]
    pub profile: bool,
}

#[derive(Args)]
pub struct GrowthArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    /// Comma-separated radii, e.g. 1,2,4,8.
    #[arg(long)]
    pub radii: String,
    /// Quadrature nodes per circle.
    #[arg(long, default_value_t = 512)]
    pub nodes: usize,
}

#[derive(Args)]
pub struct ProjectArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    /// Target smallness of the inner part.
    #[arg(long)]
    pub eps: f64,
    /// Search-annulus ratio (> 1).
    #[arg(long)]
    pub theta: f64,
}

#[derive(Args)]
pub struct SplitArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long)]
    pub eps: f64,
    #[arg(long)]
    pub theta: f64,
}

#[derive(Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    /// Degree cap for the polynomial-class searches.
    #[arg(long = "degree-max")]
    pub degree_max: Option<usize>,
    /// Horizon for the power-boundedness scan.
    #[arg(long, default_value_t = 8)]
    pub powers: usize,
}

#[derive(Args)]
pub struct MulticentricArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    /// Comma-separated complex centers, e.g. "1,-1" or "1+0i,0.5i".
    #[arg(long)]
    pub centers: String,
    /// Coefficients of the test function (low to high), complex.
    #[arg(long, default_value = "1,0,0.5")]
    pub phi: String,
    /// Sampling radius in the w-plane (defaults to a safe value between
    /// the spectrum of p(A) and the smallest critical level).
    #[arg(long)]
    pub radius: Option<f64>,
    /// Series truncation length.
    #[arg(long, default_value_t = 64)]
    pub truncation: usize,
}

#[derive(Args)]
pub struct BlockArgs {
    /// Top-left block (n x n).
    #[arg(long)]
    pub a: PathBuf,
    /// Bottom-right block (m x m).
    #[arg(long)]
    pub b: PathBuf,
    /// Corner block (n x m).
    #[arg(long)]
    pub c: PathBuf,
    /// all | spectrum | sylvester | diagonalize | degree | obstruction | growth
    #[arg(long, default_value = "all")]
    pub check: String,
}

#[derive(Args)]
pub struct ZooArgs {
    #[command(subcommand)]
    pub action: ZooAction,
}

#[derive(Subcommand)]
pub enum ZooAction {
    /// List the available operator families
    List,
    /// Build one family and run its closed-form checks
    Run(ZooRunArgs),
    /// Track a quantity across window sizes
    Converge(ZooConvergeArgs),
}

#[derive(Args, Clone)]
pub struct FamilyArgs {
    /// Family name (see `zoo list`).
    #[arg(long)]
    pub family: String,
    /// Truncation window.
    #[arg(long, default_value_t = 64)]
    pub window: usize,
    /// zero-fill | periodic
    #[arg(long, default_value = "zero-fill")]
    pub boundary: String,
    /// Weight parameter r for circulant-weighted.
    #[arg(long)]
    pub r: Option<f64>,
    /// Inclusive block range for circulant-sum, e.g. 2..12.
    #[arg(long)]
    pub blocks: Option<String>,
    /// Complex coupling/homotopy parameter.
    #[arg(long)]
    pub alpha: Option<String>,
    /// Coupling column/offset for the rank-one families.
    #[arg(long)]
    pub k: Option<usize>,
    /// First alternating diagonal value (complex).
    #[arg(long)]
    pub lambda1: Option<String>,
    /// Second alternating diagonal value (complex).
    #[arg(long)]
    pub lambda2: Option<String>,
    /// Shift strength for alternating-shift.
    #[arg(long)]
    pub rho: Option<f64>,
    /// Comma-separated phase angles for phase-blocks.
    #[arg(long)]
    pub thetas: Option<String>,
    /// Comma-separated complex diagonal entries for diagonal.
    #[arg(long)]
    pub entries: Option<String>,
}

#[derive(Args)]
pub struct ZooRunArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Only keep checks whose name contains this substring.
    #[arg(long)]
    pub check: Option<String>,
}

#[derive(Args)]
pub struct ZooConvergeArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// eigenvalue | power-norm | growth
    #[arg(long)]
    pub quantity: String,
    /// Target point for quantity=eigenvalue (complex).
    #[arg(long)]
    pub target: Option<String>,
    /// Exponent for quantity=power-norm.
    #[arg(long, default_value_t = 3)]
    pub power: usize,
    /// Radius for quantity=growth.
    #[arg(long, default_value_t = 100.0)]
    pub at: f64,
    /// Comma-separated window sizes.
    #[arg(long, default_value = "8,16,32,64")]
    pub windows: String,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// growth | projection | roundtrip | capacity | block | zoo | classify | all
    #[arg(long)]
    pub suite: String,
    /// Randomized instances per suite.
    #[arg(long, default_value_t = 12)]
    pub instances: usize,
    /// Quadrature nodes for growth-type integrals.
    #[arg(long, default_value_t = 512)]
    pub nodes: usize,
}

#[derive(Args)]
pub struct RunArgs {
    /// Key=value config file; must contain `command = <name>`.
    #[arg(long)]
    pub config: PathBuf,
}

/// Dispatches a parsed invocation and returns the process exit code.
pub fn execute(cli: Cli) -> Result<i32> {
    let seed = cli.seed;
    let tol = cli.tol_scale;
    let reporter = match cli.command {
        Command::Capacity(args) => commands::capacity(&args, seed, tol)?,
        Command::Growth(args) => commands::growth(&args, seed, tol)?,
        Command::Project(args) => commands::project(&args, seed, tol)?,
        Command::Split(args) => commands::split(&args, seed, tol)?,
        Command::Classify(args) => commands::classify(&args, seed, tol)?,
        Command::Multicentric(args) => commands::multicentric(&args, seed, tol)?,
        Command::Block(args) => commands::block(&args, seed, tol)?,
        Command::Zoo(args) => commands::zoo(&args, seed, tol)?,
        Command::Verify(args) => commands::verify(&args, seed, tol)?,
        Command::Run(args) => {
            let text = std::fs::read_to_string(&args.config)
                .with_context(|| format!("cannot read config {}", args.config.display()))?;
            let argv = parse::config_to_argv(&text)?;
            if argv.iter().any(|a| a == "run") {
                anyhow::bail!("config files cannot invoke 'run' recursively");
            }
            let nested = Cli::try_parse_from(&argv)
                .with_context(|| format!("invalid config {}", args.config.display()))?;
            return execute(nested);
        }
    };
    reporter.finish(cli.json.as_deref(), cli.csv.as_deref())
}

fn main() {
    let cli = Cli::parse();
    let code = match execute(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            2
        }
    };
    std::process::exit(code);
}
