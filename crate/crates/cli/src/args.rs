use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hdastar::{Algorithm, TransportKind, DEFAULT_PACK_SIZE};

use crate::load::HeuristicSpec;

#[derive(Debug, Parser)]
#[command(name = "hdastar", version, about = "Optimal sliding-tile solving with serial and parallel best-first search")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one instance and print its report.
    Solve(SolveArgs),
    /// Run a matrix of instances and configurations from a TOML file.
    Suite(SuiteArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// astar, idastar-tt, hda, hda-random, pra-sync, tds or hybrid
    #[arg(long)]
    pub algo: Algorithm,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, default_value_t = DEFAULT_PACK_SIZE)]
    pub pack_size: usize,
    /// manhattan, or pdb:<groups> such as pdb:1,2,3,4;5,6,7,8
    #[arg(long, default_value = "manhattan")]
    pub heuristic: HeuristicSpec,
    /// Stored-state limit over all workers, split evenly.
    #[arg(long)]
    pub node_budget: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// async, sync or delay:<seed>; defaults to sync for pra-sync and async
    /// otherwise
    #[arg(long)]
    pub transport: Option<TransportKind>,
    #[arg(long)]
    pub instance: PathBuf,
    /// Which instance of a multi-line file to solve.
    #[arg(long, default_value_t = 0)]
    pub index: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Directory for cached pattern databases.
    #[arg(long)]
    pub pdb_cache: Option<PathBuf>,
    #[arg(long)]
    pub zobrist_seed: Option<u64>,
    /// Keep expansion traces (large).
    #[arg(long)]
    pub trace: bool,
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    pub config: PathBuf,
    /// Where to write the suite report; overrides the config file.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// json writes the full suite report; csv writes one row per run.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}
