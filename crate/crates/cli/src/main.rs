mod commands;
mod report;

use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cycle_lsi::parse::{parse_count, parse_product_spec, parse_range};
use cycle_lsi::{OptimizerConfig, Projection};

use crate::commands::Outcome;

const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NONCONVERGENCE: u8 = 3;

/// Spectral gap, log-Sobolev and cubic Sobolev constants of the n-cycle.
#[derive(Debug, Parser)]
#[command(name = "cycle-lsi", version)]
struct Cli {
    /// Emit the run manifest as JSON.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit the result rows as CSV.
    #[arg(long, global = true)]
    csv: bool,
    /// Seed for every random component.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Exit with status 3 when an optimization did not converge.
    #[arg(long, global = true)]
    strict: bool,
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form constants and their spectral cross-checks.
    Constants {
        /// Inclusive range of cycle lengths, e.g. 4..16.
        #[arg(long, value_parser = range_arg, default_value = "4..16")]
        n: RangeInclusive<usize>,
    },
    /// Run a verifier suite.
    Verify(VerifyArgs),
    /// Numerical estimation of constants.
    Estimate(EstimateArgs),
    /// Log-Sobolev constant of a weighted product of cycles.
    Product {
        /// Factors as "n1:c1,n2:c2,...".
        spec: String,
        /// Print only the closed form.
        #[arg(long)]
        no_estimate: bool,
        #[command(flatten)]
        opt: OptimizerArgs,
    },
    /// Hypercontractivity of the heat semigroup on random positive functions.
    Hypercontract(HyperArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyTarget {
    Scalar,
    Majorant,
    Highfreq,
    Cubic,
    Cases,
    Chain,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub target: VerifyTarget,
    /// Grid size for grid-based suites.
    #[arg(long, value_parser = count_arg, default_value = "1e6")]
    pub grid: usize,
    /// Lower end of the majorant grid.
    #[arg(long, default_value_t = 1e-8)]
    pub t_min: f64,
    /// Upper end of the majorant grid.
    #[arg(long, default_value_t = 1e8)]
    pub t_max: f64,
    /// Cycle lengths for randomized suites.
    #[arg(long, value_parser = range_arg, default_value = "4..32")]
    pub n: RangeInclusive<usize>,
    /// Random trials per cycle length.
    #[arg(long, value_parser = count_arg, default_value = "1e4")]
    pub trials: usize,
    /// Number of worst cubic samples per n refined by gradient descent.
    #[arg(long, value_parser = count_arg, default_value = "0")]
    pub refine: usize,
    /// Largest n for the n >= 6 case verifier.
    #[arg(long, default_value_t = 64)]
    pub n_max: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EstimateTarget {
    Alpha,
    CubicConstant,
    Gap,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[arg(value_enum)]
    pub target: EstimateTarget,
    #[arg(long, value_parser = range_arg, default_value = "4..8")]
    pub n: RangeInclusive<usize>,
    #[command(flatten)]
    pub opt: OptimizerArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProjectionArg {
    Clamp,
    Square,
}

#[derive(Debug, Args)]
pub struct OptimizerArgs {
    #[arg(long, value_parser = count_arg, default_value = "64")]
    pub restarts: usize,
    #[arg(long, value_parser = count_arg, default_value = "20000")]
    pub max_iters: usize,
    #[arg(long, default_value_t = 0.1)]
    pub step: f64,
    #[arg(long, default_value_t = 0.5)]
    pub shrink: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub grad_tol: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub floor: f64,
    #[arg(long, value_enum, default_value_t = ProjectionArg::Clamp)]
    pub projection: ProjectionArg,
}

impl OptimizerArgs {
    pub fn config(&self, seed: u64) -> OptimizerConfig {
        OptimizerConfig {
            seed,
            restarts: self.restarts,
            max_iters: self.max_iters,
            step_init: self.step,
            armijo_shrink: self.shrink,
            grad_tol: self.grad_tol,
            entropy_floor: self.floor,
            projection: match self.projection {
                ProjectionArg::Clamp => Projection::ClampRenormalize,
                ProjectionArg::Square => Projection::SquareReparam,
            },
            record_history: false,
        }
    }
}

#[derive(Debug, Args)]
pub struct HyperArgs {
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 4.0)]
    pub q: f64,
    /// Time; defaults to the smallest admissible time.
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long, value_parser = count_arg, default_value = "1e4")]
    pub trials: usize,
}

fn range_arg(s: &str) -> Result<RangeInclusive<usize>, String> {
    parse_range(s).map_err(|e| e.to_string())
}

fn count_arg(s: &str) -> Result<usize, String> {
    parse_count(s).map_err(|e| e.to_string())
}

fn run(cli: &Cli) -> Result<Outcome, commands::UsageError> {
    let seed = cli.seed;
    match &cli.command {
        Command::Constants { n } => commands::constants(n.clone()),
        Command::Verify(args) => commands::verify(args, seed),
        Command::Estimate(args) => commands::estimate(args, seed),
        Command::Product { spec, no_estimate, opt } => {
            let factors = parse_product_spec(spec).map_err(commands::UsageError::from)?;
            commands::product(spec, &factors, !no_estimate, &opt.config(seed))
        }
        Command::Hypercontract(args) => commands::hypercontract(args, seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let manifest = outcome.manifest(cli.seed);
    let text = if cli.json {
        manifest.to_json()
    } else if cli.csv {
        manifest.to_csv()
    } else {
        manifest.to_table()
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_USAGE);
            }
        }
        None => print!("{text}"),
    }
    for note in &outcome.notes {
        eprintln!("note: {note}");
    }
    if outcome.violation {
        ExitCode::from(EXIT_VIOLATION)
    } else if cli.strict && outcome.nonconverged {
        ExitCode::from(EXIT_NONCONVERGENCE)
    } else {
        ExitCode::SUCCESS
    }
}
