use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "BFLY_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "bfly", version, about = "Generalized butterfly permutations with 4-uniform BCT")]
pub struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Directory for outputs without an explicit path (default: $BFLY_OUT_DIR or `.`).
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an S-box table file.
    Build(BuildArgs),
    /// Compute DDT, BCT and Walsh spectra of a table file.
    Analyze(AnalyzeArgs),
    /// Report the difference-equation and boomerang diagnostics for one (a, b).
    Diagnose(DiagnoseArgs),
    /// Classify and solve x^(2^k) + μ conj(x) + (μ + 1)x + ν = 0.
    SolveL(SolveLArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Time field arithmetic, table construction and spectra.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    /// Base field degree (odd).
    #[arg(long)]
    pub m: u32,

    /// Base field modulus as hex, or `default`.
    #[arg(long, default_value = "default")]
    pub modulus: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    ButterflyClosed,
    ButterflyOpen,
    Univariate,
    /// x^(2^n - 2)
    #[value(name = "1")]
    Inverse,
    /// x^(2^i + 1) with gcd(i, n) = 2
    #[value(name = "2")]
    Gold,
    /// x^(2^t + 2) + γx
    #[value(name = "3")]
    Binomial,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::ButterflyClosed => "butterfly-closed",
            Family::ButterflyOpen => "butterfly-open",
            Family::Univariate => "univariate",
            Family::Inverse => "1",
            Family::Gold => "2",
            Family::Binomial => "3",
        }
    }
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[arg(long, value_enum)]
    pub family: Family,

    #[command(flatten)]
    pub field: FieldArgs,

    #[arg(long, default_value_t = 1)]
    pub k: u32,

    /// θ as hex; determines (α, β) for the butterflies.
    #[arg(long)]
    pub theta: Option<String>,

    /// Raw α as hex (butterflies only; requires --beta).
    #[arg(long, requires = "beta")]
    pub alpha: Option<String>,

    #[arg(long, requires = "alpha")]
    pub beta: Option<String>,

    /// Exponent i of the second family.
    #[arg(long)]
    pub i: Option<u32>,

    /// γ of the third family as hex, or `auto` for the smallest valid one.
    #[arg(long)]
    pub gamma: Option<String>,

    /// Output table file.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpectrumArg {
    Ddt,
    Bct,
    BctLqsl,
    Walsh,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Full,
    MaxOnly,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Table file written by `build`.
    #[arg(short, long)]
    pub input: PathBuf,

    /// Spectra to compute (repeatable; default: all).
    #[arg(long = "spectrum", value_enum)]
    pub spectra: Vec<SpectrumArg>,

    #[arg(long, value_enum, default_value = "max-only")]
    pub mode: ModeArg,

    /// Sampled entries per spectrum.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Work budget as log2 of inner-loop steps.
    #[arg(long, default_value_t = 36.0)]
    pub budget: f64,

    /// Export format for full and sampled tables.
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct DiagnoseArgs {
    #[command(flatten)]
    pub field: FieldArgs,

    #[arg(long, default_value_t = 1)]
    pub k: u32,

    #[arg(long)]
    pub theta: String,

    /// Nonzero input difference, as hex of the canonical encoding.
    #[arg(long)]
    pub a: String,

    #[arg(long)]
    pub b: String,

    /// Also write the report here.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveLArgs {
    #[command(flatten)]
    pub field: FieldArgs,

    #[arg(long, default_value_t = 1)]
    pub k: u32,

    #[arg(long)]
    pub mu: String,

    #[arg(long)]
    pub nu: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Theorem,
    Necessity,
    OpenButterfly,
    Lemmas,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: SuiteArg,

    #[command(flatten)]
    pub field: FieldArgs,

    /// Exponents to check, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub k: Vec<u32>,

    /// θ values as hex, comma separated (default: every nonzero θ).
    #[arg(long, value_delimiter = ',')]
    pub theta: Vec<String>,

    #[arg(long, default_value_t = 1000)]
    pub samples: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, default_value_t = 36.0)]
    pub budget: f64,

    /// Also write the verdicts here.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Widths n = 2m to time (even, m odd).
    #[arg(long, value_delimiter = ',', default_value = "6,10")]
    pub n: Vec<u32>,

    #[arg(long, default_value_t = 36.0)]
    pub budget: f64,
}
