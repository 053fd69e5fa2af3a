mod args;
mod load;
mod output;
mod suite;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use hdastar::{Algorithm, Outcome, RunReport, SearchConfig, TransportKind};

use args::{Cli, Command, Format, SolveArgs};
use load::LoadError;

pub const EXIT_SOLVED: u8 = 0;
pub const EXIT_ABORTED: u8 = 1;
pub const EXIT_MEMORY: u8 = 2;
pub const EXIT_UNSOLVABLE: u8 = 3;
pub const EXIT_CONFIG: u8 = 4;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_SOLVED };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Suite(a) => suite::run(a),
    };
    ExitCode::from(code)
}

pub fn default_transport(algorithm: Algorithm) -> TransportKind {
    if algorithm == Algorithm::PraSync {
        TransportKind::Sync
    } else {
        TransportKind::Async
    }
}

pub fn exit_code(outcome: &Outcome) -> u8 {
    match outcome {
        Outcome::Solved => EXIT_SOLVED,
        Outcome::MemoryFailure { .. } => EXIT_MEMORY,
        Outcome::Unsolvable => EXIT_UNSOLVABLE,
        Outcome::Aborted { .. } => EXIT_ABORTED,
    }
}

fn emit(report: &RunReport, format: Format) -> io::Result<()> {
    let mut out = io::stdout().lock();
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, report)?;
            writeln!(out)
        }
        Format::Csv => output::write_csv(out, std::slice::from_ref(report)).map_err(io::Error::other),
    }
}

fn solve(a: SolveArgs) -> u8 {
    let transport = a.transport.unwrap_or_else(|| default_transport(a.algo));
    let workers = if a.algo.is_serial() { 1 } else { a.workers };
    let config = SearchConfig::default()
        .with_workers(workers)
        .with_pack_size(a.pack_size)
        .with_budget(a.node_budget)
        .with_seed(a.seed)
        .with_transport(transport)
        .with_trace(a.trace);
    let name = if a.index == 0 { a.instance.display().to_string() } else { format!("{}#{}", a.instance.display(), a.index) };

    let start = match load::read_instance(&a.instance, a.index) {
        Ok(s) => s,
        Err(LoadError::Unsolvable(m)) => {
            eprintln!("hdastar: {m}");
            let mut r = RunReport::new(a.algo, name, workers);
            r.outcome = Outcome::Unsolvable;
            r.config.pack_size = a.pack_size;
            r.config.seed = a.seed;
            r.config.node_budget = a.node_budget;
            r.config.transport = transport.to_string();
            r.config.heuristic = a.heuristic.to_string();
            let _ = emit(&r, a.format);
            return EXIT_UNSOLVABLE;
        }
        Err(e) => {
            eprintln!("hdastar: {e}");
            return EXIT_CONFIG;
        }
    };
    let heuristic = match load::heuristic_for(&a.heuristic, start.width(), start.height(), a.pdb_cache.as_deref()) {
        Ok(h) => h,
        Err(e) => {
            eprintln!("hdastar: {e}");
            return EXIT_CONFIG;
        }
    };
    let problem = load::problem(start, heuristic, a.zobrist_seed, name);
    let report = match hdastar::run(a.algo, &problem, &config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("hdastar: {e}");
            return EXIT_CONFIG;
        }
    };
    if let Err(e) = emit(&report, a.format) {
        eprintln!("hdastar: {e}");
        return EXIT_CONFIG;
    }
    exit_code(&report.outcome)
}
