//! Command-line front end.
//!
//! Exit codes: 0 success, 1 error (including an invalid solution or an
//! instance over the oracle limits), 2 no feasible configuration found or
//! proven.

mod solve;
mod tools;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use solve::SolveArgs;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;

pub const RUN_SCHEMA: &str = "induct-run/1";

#[derive(Debug, Parser)]
#[command(name = "induct", version, about = "Stationary and dynamic charging infrastructure siting for fixed-route electric fleets")]
pub struct Cli {
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the iterated local search on one or more instances.
    Solve(SolveArgs),
    /// Generate synthetic instances from a JSON generator spec.
    Generate(GenerateArgs),
    /// Convert an EVRPTW text instance into an instance file.
    Convert(ConvertArgs),
    /// Write instances of the built-in tiny catalog.
    Catalog(CatalogArgs),
    /// Write the time-discrete MIP in LP format, optionally with a warm start.
    ExportMip(ExportMipArgs),
    /// Turn solver values (name=value lines) of an exported MIP into a solution.
    ImportMip(ImportMipArgs),
    /// Check a solution file against an instance.
    Validate(ValidateArgs),
    /// Solve a tiny instance by exhaustive enumeration.
    Oracle(OracleArgs),
    /// Print the expanded graph of one vehicle.
    DumpGraph(DumpGraphArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Generator spec (JSON). Omitted fields take their defaults.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long, default_value = "instances")]
    pub out: PathBuf,
    /// Overrides the spec's seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Instances to generate, with consecutive seeds.
    #[arg(long, default_value_t = 1)]
    pub count: u64,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Generator spec supplying the parameters the text format lacks.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct CatalogArgs {
    /// Catalog entry, or `all`.
    #[arg(long, default_value = "all")]
    pub name: String,
    #[arg(long, default_value = "instances")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct MipArgs {
    /// Extra copies of every station.
    #[arg(long, default_value_t = 1)]
    pub copies: usize,
    /// Allow partial charging on traversed built segments.
    #[arg(long)]
    pub partial_dynamic: bool,
    /// Allow built segments that do not form a prefix.
    #[arg(long)]
    pub free_segments: bool,
}

#[derive(Debug, Args)]
pub struct ExportMipArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub mip: MipArgs,
    /// Solution to encode as a warm start; `shortest` uses the uncharged
    /// direct routes when they are feasible.
    #[arg(long)]
    pub warm_start: Option<String>,
    /// Where to write the warm start (CPLEX MST). Defaults to the LP path
    /// with extension `mst`.
    #[arg(long)]
    pub mst: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ImportMipArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// Solver values, one `name=value` per line.
    #[arg(long)]
    pub values: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub mip: MipArgs,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub solution: PathBuf,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 12)]
    pub max_stations: usize,
    #[arg(long, default_value_t = 3)]
    pub max_vehicles: usize,
    #[arg(long, default_value_t = 6)]
    pub max_stops: usize,
}

#[derive(Debug, Args)]
pub struct DumpGraphArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub vehicle: usize,
    /// `full`, `empty`, or a bit string as printed in solution summaries.
    #[arg(long, default_value = "full")]
    pub config: String,
}

fn init_logging(verbose: u8, trace: bool) {
    let level = match (trace, verbose) {
        (true, _) => "trace",
        (false, 0) => "warn",
        (false, 1) => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).try_init();
}

/// Parses `args` (program name first) and runs the command, returning the
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let trace = matches!(&cli.command, Command::Solve(a) if a.trace);
    init_logging(cli.verbose, trace);
    let result = match cli.command {
        Command::Solve(a) => solve::cmd_solve(&a),
        Command::Generate(a) => tools::cmd_generate(&a),
        Command::Convert(a) => tools::cmd_convert(&a),
        Command::Catalog(a) => tools::cmd_catalog(&a),
        Command::ExportMip(a) => tools::cmd_export_mip(&a),
        Command::ImportMip(a) => tools::cmd_import_mip(&a),
        Command::Validate(a) => tools::cmd_validate(&a),
        Command::Oracle(a) => tools::cmd_oracle(&a),
        Command::DumpGraph(a) => tools::cmd_dump_graph(&a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    }
}
