use std::sync::Arc;

use crate::puzzle::{Heuristic, Manhattan, TileState, ZobristTable};

/// A start state plus the shared, read-only search tables.
#[derive(Clone)]
pub struct Problem {
    pub start: TileState,
    pub heuristic: Arc<dyn Heuristic>,
    pub zobrist: Arc<ZobristTable>,
    pub instance: String,
}

impl Problem {
    pub fn new(start: TileState, heuristic: Arc<dyn Heuristic>, zobrist: Arc<ZobristTable>) -> Self {
        Problem { start, heuristic, zobrist, instance: start.to_string() }
    }

    /// Manhattan heuristic and the default Zobrist table.
    pub fn manhattan(start: TileState) -> Self {
        Problem::new(start, Arc::new(Manhattan::for_state(&start)), Arc::new(ZobristTable::default()))
    }

    pub fn named(mut self, instance: impl Into<String>) -> Self {
        self.instance = instance.into();
        self
    }

    pub fn h(&self, s: &TileState) -> u32 {
        self.heuristic.estimate(s)
    }
}

impl std::fmt::Debug for Problem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Problem")
            .field("start", &self.start)
            .field("heuristic", &self.heuristic.name())
            .field("instance", &self.instance)
            .finish()
    }
}

/// Worker owning a key: `key mod p`.
pub fn owner(key: u64, p: usize) -> usize {
    (key % p as u64) as usize
}
