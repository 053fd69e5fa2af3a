use std::collections::HashMap;

use super::store::{KeyBuildHasher, Keyed};

/// Fraction of entries freed by one replacement round.
pub const REPLACEMENT_FRACTION: f64 = 0.30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TtEntry {
    pub g: u32,
    /// Iteration that stored `g`; entries from other iterations never prune.
    pub iteration: u32,
    pub last_access: u64,
    pub frequency: u64,
}

/// Transposition table for iterative deepening. When an insertion finds the
/// table full, the 30% least frequently accessed entries are dropped first
/// (older last access goes first on equal frequency).
#[derive(Debug, Clone)]
pub struct TranspositionTable {
    capacity: Option<usize>,
    entries: HashMap<Keyed, TtEntry, KeyBuildHasher>,
    clock: u64,
    evictions: u64,
    replacement_rounds: u64,
}

impl TranspositionTable {
    /// `None` means unbounded.
    pub fn new(capacity: Option<usize>) -> Self {
        TranspositionTable {
            capacity: capacity.map(|c| c.max(1)),
            entries: HashMap::default(),
            clock: 0,
            evictions: 0,
            replacement_rounds: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn capacity(&self) -> Option<usize> {
        self.capacity
    }

    pub fn evictions(&self) -> u64 {
        self.evictions
    }

    pub fn replacement_rounds(&self) -> u64 {
        self.replacement_rounds
    }

    pub fn entry(&self, node: &Keyed) -> Option<&TtEntry> {
        self.entries.get(node)
    }

    pub fn contains(&self, node: &Keyed) -> bool {
        self.entries.contains_key(node)
    }

    fn tick(&mut self) -> u64 {
        self.clock += 1;
        self.clock
    }

    /// Stored `g` for this iteration, if any. A hit on any iteration counts as
    /// an access.
    pub fn probe(&mut self, node: &Keyed, iteration: u32) -> Option<u32> {
        let now = self.tick();
        let e = self.entries.get_mut(node)?;
        e.last_access = now;
        e.frequency += 1;
        (e.iteration == iteration).then_some(e.g)
    }

    /// Record `g` for this iteration, evicting first if a new entry would
    /// exceed capacity.
    pub fn store(&mut self, node: Keyed, g: u32, iteration: u32) {
        let now = self.tick();
        if let Some(e) = self.entries.get_mut(&node) {
            e.g = g;
            e.iteration = iteration;
            e.last_access = now;
            e.frequency += 1;
            return;
        }
        if let Some(cap) = self.capacity {
            if self.entries.len() >= cap {
                self.replace();
            }
        }
        self.entries.insert(node, TtEntry { g, iteration, last_access: now, frequency: 1 });
    }

    /// Free ⌈0.3·len⌉ entries with the lowest (frequency, last access).
    pub fn replace(&mut self) {
        let count = self.entries.len();
        let evict = (count as f64 * REPLACEMENT_FRACTION).ceil() as usize;
        if evict == 0 {
            return;
        }
        let mut ranked: Vec<(u64, u64, Keyed)> =
            self.entries.iter().map(|(k, e)| (e.frequency, e.last_access, *k)).collect();
        if evict < ranked.len() {
            ranked.select_nth_unstable_by(evict - 1, |a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        }
        for (_, _, k) in ranked.into_iter().take(evict) {
            self.entries.remove(&k);
        }
        self.evictions += evict as u64;
        self.replacement_rounds += 1;
    }

    pub fn keys(&self) -> impl Iterator<Item = &Keyed> {
        self.entries.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Keyed, &TtEntry)> {
        self.entries.iter()
    }
}
