//! Parallel best-first search over sliding-tile puzzles: hash-distributed A*
//! (HDA*), its synchronous and random-distribution contrasts, serial A* and
//! IDA* with a transposition table, transposition-driven scheduling (TDS),
//! and an HDA*→TDS hybrid.

pub mod config;
pub mod error;
pub mod hda;
pub mod hybrid;
pub mod metrics;
pub mod problem;
pub mod puzzle;
pub mod runtime;
pub mod search;
pub mod tds;
pub mod termination;
pub mod transport;

pub use config::{Algorithm, SearchConfig, TransportKind, DEFAULT_PACK_SIZE};
pub use error::{ConfigError, MetricError, PuzzleError, TransportError};
pub use hda::{hda_star, hda_star_random, pra_star_sync, HdaWorker};
pub use hybrid::hybrid;
pub use metrics::{Outcome, RunReport, SuiteReport, WorkerStats};
pub use problem::{owner, Problem};
pub use puzzle::{
    parse_instance, write_instance, Heuristic, Manhattan, Move, PackedState, PatternDatabase, PatternPartition, TileState,
    ZobristTable,
};
pub use search::{astar, idastar_tt, idastar_tt_from, SerialOptions, TranspositionTable};
pub use tds::{tds, TdsWorker};

/// Run one algorithm. Serial algorithms use only the node budget and trace
/// settings of `config`.
pub fn run(algorithm: Algorithm, problem: &Problem, config: &SearchConfig) -> Result<RunReport, ConfigError> {
    let serial = SerialOptions { node_budget: config.node_budget, tt_capacity: None, trace: config.trace };
    match algorithm {
        Algorithm::Astar => Ok(astar(problem, serial)),
        Algorithm::IdastarTt => Ok(idastar_tt(problem, serial)),
        Algorithm::Hda => hda_star(problem, config),
        Algorithm::HdaRandom => hda_star_random(problem, config),
        Algorithm::PraSync => pra_star_sync(problem, config),
        Algorithm::Tds => tds(problem, config, None),
        Algorithm::Hybrid => hybrid(problem, config),
    }
}
