use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use hdastar::puzzle::{parse_instances, Heuristic, DEFAULT_ZOBRIST_SEED};
use hdastar::{Manhattan, PatternDatabase, PatternPartition, Problem, PuzzleError, TileState, ZobristTable};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HeuristicSpec {
    Manhattan,
    Pdb(PatternPartition),
}

impl FromStr for HeuristicSpec {
    type Err = PuzzleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "manhattan" {
            return Ok(HeuristicSpec::Manhattan);
        }
        match s.strip_prefix("pdb:") {
            Some(spec) => Ok(HeuristicSpec::Pdb(PatternPartition::parse(spec)?)),
            None => Err(PuzzleError::InvalidPartition(format!("unknown heuristic {s:?}"))),
        }
    }
}

impl fmt::Display for HeuristicSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeuristicSpec::Manhattan => f.write_str("manhattan"),
            HeuristicSpec::Pdb(p) => write!(f, "pdb:{p}"),
        }
    }
}

#[derive(Debug)]
pub enum LoadError {
    /// The permutation cannot reach the goal.
    Unsolvable(String),
    Invalid(String),
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoadError::Unsolvable(m) | LoadError::Invalid(m) => f.write_str(m),
        }
    }
}

/// The `index`-th instance in a file.
pub fn read_instance(path: &Path, index: usize) -> Result<TileState, LoadError> {
    let text = fs::read_to_string(path).map_err(|e| LoadError::Invalid(format!("{}: {e}", path.display())))?;
    let all = parse_instances(&text).map_err(|e| match e {
        PuzzleError::Unsolvable => LoadError::Unsolvable(format!("{}: {e}", path.display())),
        e => LoadError::Invalid(format!("{}: {e}", path.display())),
    })?;
    let count = all.len();
    all.into_iter()
        .nth(index)
        .ok_or_else(|| LoadError::Invalid(format!("{}: no instance {index} ({count} in file)", path.display())))
}

/// Every instance in a file.
pub fn read_all(path: &Path) -> Result<Vec<TileState>, LoadError> {
    let text = fs::read_to_string(path).map_err(|e| LoadError::Invalid(format!("{}: {e}", path.display())))?;
    parse_instances(&text).map_err(|e| LoadError::Invalid(format!("{}: {e}", path.display())))
}

pub fn heuristic_for(spec: &HeuristicSpec, width: usize, height: usize, cache: Option<&Path>) -> Result<Arc<dyn Heuristic>, LoadError> {
    let invalid = |e: PuzzleError| LoadError::Invalid(e.to_string());
    Ok(match spec {
        HeuristicSpec::Manhattan => Arc::new(Manhattan::new(width, height)),
        HeuristicSpec::Pdb(partition) => {
            let db = match cache {
                Some(dir) => PatternDatabase::load_or_build(dir, partition, width, height),
                None => PatternDatabase::build(partition, width, height),
            };
            Arc::new(db.map_err(invalid)?)
        }
    })
}

pub fn problem(start: TileState, heuristic: Arc<dyn Heuristic>, zobrist_seed: Option<u64>, name: String) -> Problem {
    let z = Arc::new(ZobristTable::new(zobrist_seed.unwrap_or(DEFAULT_ZOBRIST_SEED)));
    Problem::new(start, heuristic, z).named(name)
}
