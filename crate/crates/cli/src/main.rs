mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exact level-k fusion rings and their Real refinements.
#[derive(Parser, Debug)]
#[command(name = "verlinde", version, about)]
pub struct Cli {
    /// Directory for cached fusion tables.
    #[arg(long, global = true, env = "VERLINDE_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Summarize a root system.
    Describe(DescribeArgs),
    /// Compute the level-k fusion table.
    Fusion(FusionArgs),
    /// Real type decomposition, graded basis, products and ideal generators.
    Real(RealArgs),
    /// Check involution data, the fusion table and the module structure.
    Validate(RealArgs),
    /// Classify the Real Spin^c structure of R^{r,s} with a (p,q) type.
    Spinc(SpincArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct TypeArgs {
    /// Family letter, A through G.
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub rank: usize,
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    /// Output format on stdout.
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
    /// Also write the JSON export to this file.
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ComputeArgs {
    #[arg(long)]
    pub level: u32,
    /// Neither read nor write the fusion-table cache.
    #[arg(long)]
    pub no_cache: bool,
    /// Largest level-k weight set handled. Raising it trades memory and time
    /// for size.
    #[arg(long, default_value_t = verlinde_core::fusion::DEFAULT_MAX_ALCOVE)]
    pub max_alcove: usize,
    /// Reflection steps allowed per affine reduction.
    #[arg(long, default_value_t = verlinde_core::fusion::DEFAULT_MAX_REFLECTIONS)]
    pub max_steps: usize,
    /// Fill the fusion table on a thread pool.
    #[arg(long)]
    pub parallel: bool,
}

#[derive(Args, Debug)]
pub struct DescribeArgs {
    #[command(flatten)]
    pub ty: TypeArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct FusionArgs {
    #[command(flatten)]
    pub ty: TypeArgs,
    #[command(flatten)]
    pub compute: ComputeArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct RealArgs {
    #[command(flatten)]
    pub ty: TypeArgs,
    #[command(flatten)]
    pub compute: ComputeArgs,
    /// Built-in involution data.
    #[arg(long, conflicts_with = "involution")]
    pub preset: Option<String>,
    /// TOML file with custom involution data.
    #[arg(long, value_name = "PATH")]
    pub involution: Option<PathBuf>,
    /// JSON file of level-k ideal generators (needed outside type A).
    #[arg(long, value_name = "PATH")]
    pub ik_generators: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct SpincArgs {
    #[arg(long)]
    pub r: u64,
    #[arg(long)]
    pub s: u64,
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub q: u64,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
