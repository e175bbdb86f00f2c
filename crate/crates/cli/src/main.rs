use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mstiff::Dim;

mod checkpoint;
mod commands;
mod render;

/// Exit codes.
pub const EXIT_EXISTS: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NOT_EXISTS: u8 = 3;
pub const EXIT_STATE: u8 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
    Markdown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    M4,
    M5,
}

/// Counts such as `100000000`, `1e8` or `2.5e3`.
fn parse_count(s: &str) -> Result<u128, String> {
    let s = s.trim().replace('_', "");
    if let Ok(v) = s.parse::<u128>() {
        return Ok(v);
    }
    let (mant, exp) = s.split_once(['e', 'E']).ok_or_else(|| format!("not a count: {s:?}"))?;
    let exp: u32 = exp.parse().map_err(|_| format!("bad exponent in {s:?}"))?;
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(format!("not a count: {s:?}"));
    }
    let frac = frac.trim_end_matches('0');
    if frac.len() as u32 > exp {
        return Err(format!("{s:?} is not an integer"));
    }
    let digits: u128 = format!("{int}{frac}").parse().map_err(|_| format!("not a count: {s:?}"))?;
    10u128
        .checked_pow(exp - frac.len() as u32)
        .and_then(|p| digits.checked_mul(p))
        .ok_or_else(|| format!("{s:?} is too large"))
}

fn parse_precision(s: &str) -> Result<u32, String> {
    let p: u32 = s.parse().map_err(|_| format!("not an integer: {s:?}"))?;
    if p < 20 {
        return Err(format!("precision must be at least 20, got {p}"));
    }
    Ok(p)
}

#[derive(Debug, Parser)]
#[command(name = "mstiff", version, about = "Decide and classify m-stiff configurations on spheres")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Decimal digits for numeric output (at least 20).
    #[arg(long, global = true, default_value = "50", value_parser = parse_precision)]
    pub precision: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide a single (m, D) cell.
    Exists {
        #[arg(long)]
        m: u64,
        #[arg(long, value_parser = parse_count)]
        d: Dim,
    },
    /// Classify the degrees for a dimension, or the dimensions for a degree.
    Classify(ClassifyArgs),
    /// Reproduce the dimension tables for m = 4 or m = 5.
    Tables {
        #[arg(long, value_enum)]
        which: Which,
        /// Largest dimension listed.
        #[arg(long, value_parser = parse_count, default_value = "1e8")]
        limit: u128,
    },
    /// Fundamental unit and solution classes of x² − D y² = M.
    Pell {
        #[arg(long = "D")]
        big_d: u64,
        #[arg(long = "M")]
        big_m: i64,
        /// Orbit elements shown per class.
        #[arg(long, default_value_t = 4)]
        count: u32,
    },
    /// Newton polygon of the integer form of S_m, or of given coefficients.
    Newton {
        #[arg(long, requires = "d", conflicts_with = "coeffs")]
        m: Option<u64>,
        #[arg(long, value_parser = parse_count)]
        d: Option<Dim>,
        /// Integer coefficients, leading term first, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        coeffs: Option<Vec<i64>>,
        #[arg(long, default_value_t = 2)]
        p: u64,
    },
    /// Thresholds beyond which no configuration exists.
    Bounds {
        #[arg(long, value_parser = parse_count)]
        d: Dim,
        /// Last dimension of a range starting at --d.
        #[arg(long, value_parser = parse_count)]
        max_d: Option<Dim>,
    },
    /// Re-derive a tagged classification statement at a chosen scale.
    Verify {
        #[arg(long)]
        tag: String,
        #[arg(long, value_parser = parse_count)]
        scale: Option<u128>,
    },
}

#[derive(Debug, Clone, Args)]
#[command(group(clap::ArgGroup::new("axis").required(true).args(["dim", "deg"])))]
pub struct ClassifyArgs {
    /// Sphere dimension D (first of a range when --max-d is given).
    #[arg(long, value_parser = parse_count)]
    pub dim: Option<Dim>,
    /// Degree m.
    #[arg(long, requires = "max_d")]
    pub deg: Option<u64>,
    #[arg(long, value_parser = parse_count)]
    pub max_d: Option<Dim>,
    /// Only degrees m <= max-m (dimension axis).
    #[arg(long, conflicts_with = "deg")]
    pub max_m: Option<u64>,
    /// Maximum number of cells to evaluate.
    #[arg(long, value_parser = parse_count)]
    pub budget: Option<u128>,
    /// Wall-clock cap in seconds.
    #[arg(long)]
    pub budget_seconds: Option<f64>,
    /// JSON-lines file to resume from and append to.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// |x| bound for the integer-point screen (degree axis, 6 <= m <= 11).
    #[arg(long, value_parser = parse_count, default_value = "1e6")]
    pub x_bound: u128,
    /// Dimensions decided one by one (degree axis, m >= 6).
    #[arg(long, value_parser = parse_count, default_value = "1e4")]
    pub direct_limit: Dim,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    if let Some(w) = cli.common.workers {
        if w == 0 {
            eprintln!("error: --workers must be positive");
            return ExitCode::from(EXIT_USAGE);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_FAILURE);
        }
    }
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = if e.downcast_ref::<checkpoint::CorruptCheckpoint>().is_some() {
                EXIT_STATE
            } else if let Some(core) = e.downcast_ref::<mstiff::Error>() {
                match core {
                    mstiff::Error::Undecided(_) => EXIT_FAILURE,
                    _ => EXIT_USAGE,
                }
            } else if e.downcast_ref::<commands::UsageError>().is_some() {
                EXIT_USAGE
            } else {
                EXIT_FAILURE
            };
            ExitCode::from(code)
        }
    }
}
