use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PuzzleError {
    #[error("unsupported board dimensions {width}x{height}")]
    BadDimensions { width: usize, height: usize },
    #[error("expected {expected} tiles, found {found}")]
    WrongTileCount { expected: usize, found: usize },
    #[error("tile {tile} out of range for a board of {cells} cells")]
    TileOutOfRange { tile: usize, cells: usize },
    #[error("tile {tile} appears more than once")]
    DuplicateTile { tile: usize },
    #[error("instance is unsolvable (wrong permutation parity)")]
    Unsolvable,
    #[error("cannot infer a square board from {count} tiles")]
    NotSquare { count: usize },
    #[error("invalid token {token:?}")]
    BadToken { token: String },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("pattern database would need {entries} entries")]
    PdbTooLarge { entries: u64 },
    #[error("pattern database file: {0}")]
    PdbFile(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransportError {
    #[error("worker {to} is no longer receiving")]
    Disconnected { to: usize },
    #[error("rendezvous with worker {to} not completed after {waited_ms} ms")]
    Watchdog { to: usize, waited_ms: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("worker count must be at least 1")]
    NoWorkers,
    #[error("pack size must be at least 1")]
    ZeroPackSize,
    #[error("{algorithm} cannot run on the {transport} transport")]
    TransportMismatch { algorithm: String, transport: String },
    #[error("start and heuristic are built for different boards")]
    BoardMismatch,
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("baseline expansion count is zero")]
    ZeroBaseline,
    #[error("no expansions recorded")]
    NoExpansions,
    #[error("non-positive argument: {0}")]
    NonPositive(&'static str),
}
