//! Sliding-tile domain: states, moves, heuristics and Zobrist keys.

pub mod heuristic;
pub mod instance;
pub mod pdb;
pub mod state;
pub mod zobrist;

pub use heuristic::{Heuristic, Manhattan};
pub use instance::{parse_instance, parse_instances, random_instance, random_instances, random_walk_instance, write_instance};
pub use pdb::{PatternDatabase, PatternPartition};
pub use state::{parse_path, path_string, Move, PackedState, Slide, TileState, MAX_CELLS};
pub use zobrist::{ZobristTable, DEFAULT_ZOBRIST_SEED};
