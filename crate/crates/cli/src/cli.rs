use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "sharphardy", version, about = "Sharp constants of weighted Hardy and CKN inequalities")]
pub struct Cli {
    /// Output format [default: json]
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Seed for randomised checks [default: 0]
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Flat key=value file; command-line flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Suppress progress messages on stderr
    #[arg(long, global = true)]
    pub quiet: bool,

    /// Timestamp recorded in the manifest instead of the current time
    #[arg(long, global = true)]
    pub timestamp: Option<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form sharp constant and regime
    Constant(ConstantArgs),
    /// Numerical maximisation of the constraint problem
    Optimize(HardyArgs),
    /// Rayleigh-quotient sweep over test families
    Rayleigh(RayleighArgs),
    /// Batch identity and oracle checks
    Verify(VerifyArgs),
    /// CKN constant with the extremal check
    Ckn(CknArgs),
    /// Run every acceptance check
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct HardyArgs {
    #[arg(long)]
    pub n: Option<usize>,
    /// Dimension of the distinguished coordinate block [default: n-1]
    #[arg(long)]
    pub k: Option<usize>,
    /// [default: 2]
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ConstantArgs {
    #[command(flatten)]
    pub hardy: HardyArgs,
    /// Treat the input as a CKN instance (needs --mu, --gamma1, --gamma2, --gamma3)
    #[arg(long)]
    pub ckn: bool,
    #[command(flatten)]
    pub ckn_exponents: CknExponents,
}

#[derive(Debug, Args)]
pub struct CknExponents {
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma3: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CknArgs {
    #[command(flatten)]
    pub hardy: HardyArgs,
    #[command(flatten)]
    pub exponents: CknExponents,
}

#[derive(Debug, Args)]
pub struct RayleighArgs {
    #[command(flatten)]
    pub hardy: HardyArgs,
    /// Comma-separated, strictly decreasing epsilons [default: 1e-2,...,1e-6]
    #[arg(long)]
    pub eps_list: Option<String>,
    /// Comma-separated sigmas; ignored families reject it [default: 0.2,0.1,0.05,0.025]
    #[arg(long)]
    pub sigma_list: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    #[value(name = "E2")]
    E2,
    #[value(name = "Ep")]
    Ep,
    #[value(name = "CKNp")]
    Cknp,
    #[value(name = "weights")]
    Weights,
    #[value(name = "leray")]
    Leray,
    #[value(name = "lemma1")]
    Lemma1,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub which: Option<Which>,
    /// Number of random configurations (or sample points)
    #[arg(long)]
    pub count: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Also write the sweep tables as CSV files into this directory
    #[arg(long)]
    pub csv_dir: Option<PathBuf>,
}
