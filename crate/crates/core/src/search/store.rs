//! Open and closed lists for one search process.
//!
//! States are keyed by their Zobrist key for hashing but compared in full, so
//! a key collision never merges two distinct states.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::hash::{BuildHasherDefault, Hash, Hasher};

use crate::puzzle::{Move, TileState};

/// Hasher that passes a precomputed 64-bit key straight through.
#[derive(Default)]
pub struct KeyHasher(u64);

impl Hasher for KeyHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = self.0.rotate_left(8) ^ b as u64;
        }
    }

    fn write_u64(&mut self, n: u64) {
        self.0 = n;
    }
}

pub type KeyBuildHasher = BuildHasherDefault<KeyHasher>;

/// A state together with its Zobrist key.
#[derive(Debug, Clone, Copy)]
pub struct Keyed {
    pub key: u64,
    pub state: TileState,
}

impl Keyed {
    pub fn new(key: u64, state: TileState) -> Self {
        Keyed { key, state }
    }
}

impl PartialEq for Keyed {
    fn eq(&self, other: &Self) -> bool {
        self.state == other.state
    }
}

impl Eq for Keyed {}

impl Hash for Keyed {
    fn hash<H: Hasher>(&self, h: &mut H) {
        h.write_u64(self.key);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeRecord {
    pub g: u32,
    /// Cached on first sight and never recomputed.
    pub h: u32,
    /// Blank move that produced this state at its current `g`.
    pub via: Option<Move>,
    pub open: bool,
    pub expanded: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integration {
    New,
    /// Open entry lowered to a cheaper `g`.
    Improved,
    /// Closed entry moved back to open with a cheaper `g`.
    Reopened,
    Duplicate,
}

#[derive(Debug, Clone, Copy)]
struct OpenEntry {
    f: u32,
    g: u32,
    seq: u64,
    node: Keyed,
}

impl PartialEq for OpenEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for OpenEntry {}

impl PartialOrd for OpenEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OpenEntry {
    // max-heap: smaller f first, then larger g, then most recent insertion
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .cmp(&self.f)
            .then(self.g.cmp(&other.g))
            .then(self.seq.cmp(&other.seq))
    }
}

/// A node taken off the open list.
#[derive(Debug, Clone, Copy)]
pub struct Popped {
    pub node: Keyed,
    pub g: u32,
    pub h: u32,
    pub via: Option<Move>,
    /// The state had already been expanded at least once.
    pub reopened: bool,
}

impl Popped {
    pub fn f(&self) -> u32 {
        self.g + self.h
    }
}

/// Open list ordered by (f ascending, g descending) with lazy deletion, plus
/// the closed map. Both share one table so that a state is stored once.
#[derive(Default)]
pub struct LocalSearch {
    nodes: HashMap<Keyed, NodeRecord, KeyBuildHasher>,
    open: BinaryHeap<OpenEntry>,
    seq: u64,
}

impl LocalSearch {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of stored states (open and closed).
    pub fn stored(&self) -> usize {
        self.nodes.len()
    }

    pub fn get(&self, node: &Keyed) -> Option<&NodeRecord> {
        self.nodes.get(node)
    }

    /// Look up by state alone; the key is recomputed by the caller.
    pub fn record(&self, key: u64, state: TileState) -> Option<&NodeRecord> {
        self.nodes.get(&Keyed::new(key, state))
    }

    fn push(&mut self, node: Keyed, g: u32, h: u32) {
        self.seq += 1;
        self.open.push(OpenEntry { f: g + h, g, seq: self.seq, node });
    }

    /// Duplicate check and insertion. `h` is evaluated only for states never
    /// seen before.
    pub fn integrate(&mut self, node: Keyed, g: u32, via: Option<Move>, h: impl FnOnce() -> u32) -> Integration {
        match self.nodes.get_mut(&node) {
            None => {
                let h = h();
                self.nodes.insert(node, NodeRecord { g, h, via, open: true, expanded: false });
                self.push(node, g, h);
                Integration::New
            }
            Some(r) if r.g <= g => Integration::Duplicate,
            Some(r) => {
                r.g = g;
                r.via = via;
                let h = r.h;
                let outcome = if r.open {
                    Integration::Improved
                } else {
                    r.open = true;
                    Integration::Reopened
                };
                self.push(node, g, h);
                outcome
            }
        }
    }

    fn clean_top(&mut self) {
        while let Some(top) = self.open.peek() {
            match self.nodes.get(&top.node) {
                Some(r) if r.open && r.g == top.g => return,
                _ => {
                    self.open.pop();
                }
            }
        }
    }

    /// Smallest f on the open list.
    pub fn min_f(&mut self) -> Option<u32> {
        self.clean_top();
        self.open.peek().map(|e| e.f)
    }

    /// True if some open node has `f < bound` (any open node when `bound`
    /// is `None`).
    pub fn has_work_below(&mut self, bound: Option<u32>) -> bool {
        match (self.min_f(), bound) {
            (None, _) => false,
            (Some(_), None) => true,
            (Some(f), Some(b)) => f < b,
        }
    }

    /// Pop the best open node whose f is below `bound`. Nodes at or above the
    /// bound stay on the list.
    pub fn pop(&mut self, bound: Option<u32>) -> Option<Popped> {
        if !self.has_work_below(bound) {
            return None;
        }
        let e = self.open.pop().expect("clean_top left a live entry");
        let r = self.nodes.get_mut(&e.node).expect("live entry has a record");
        r.open = false;
        let reopened = r.expanded;
        r.expanded = true;
        Some(Popped { node: e.node, g: r.g, h: r.h, via: r.via, reopened })
    }

    /// Live open entries, for audits.
    pub fn open_len(&self) -> usize {
        self.nodes.values().filter(|r| r.open).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::puzzle::ZobristTable;

    fn keyed(z: &ZobristTable, s: TileState) -> Keyed {
        Keyed::new(z.hash(&s), s)
    }

    #[test]
    fn pop_order_prefers_low_f_then_high_g() {
        let z = ZobristTable::default();
        let g = TileState::goal(3, 3);
        let succ: Vec<TileState> = g.successors().map(|(s, _)| s).collect();
        let mut ls = LocalSearch::new();
        ls.integrate(keyed(&z, g), 0, None, || 5);
        ls.integrate(keyed(&z, succ[0]), 2, None, || 3);
        ls.integrate(keyed(&z, succ[1]), 1, None, || 3);
        assert_eq!(ls.pop(None).unwrap().node.state, succ[1]);
        assert_eq!(ls.pop(None).unwrap().node.state, succ[0]);
        assert_eq!(ls.pop(None).unwrap().node.state, g);
        assert!(ls.pop(None).is_none());
    }

    #[test]
    fn duplicate_and_reopen_rules() {
        let z = ZobristTable::default();
        let s = keyed(&z, TileState::goal(3, 3));
        let mut ls = LocalSearch::new();
        let mut calls = 0;
        assert_eq!(ls.integrate(s, 10, None, || { calls += 1; 4 }), Integration::New);
        assert_eq!(ls.integrate(s, 10, None, || { calls += 1; 4 }), Integration::Duplicate);
        assert_eq!(ls.integrate(s, 9, Some(Move::Up), || { calls += 1; 4 }), Integration::Improved);
        let p = ls.pop(None).unwrap();
        assert_eq!((p.g, p.h, p.reopened), (9, 4, false));
        assert_eq!(ls.integrate(s, 12, None, || 99), Integration::Duplicate);
        assert_eq!(ls.integrate(s, 8, Some(Move::Left), || { calls += 1; 99 }), Integration::Reopened);
        let p = ls.pop(None).unwrap();
        assert_eq!((p.g, p.h, p.reopened, p.via), (8, 4, true, Some(Move::Left)));
        assert_eq!(calls, 1, "h evaluated once");
        assert_eq!(ls.stored(), 1);
    }

    #[test]
    fn bound_leaves_nodes_in_place() {
        let z = ZobristTable::default();
        let mut ls = LocalSearch::new();
        ls.integrate(keyed(&z, TileState::goal(3, 3)), 3, None, || 7);
        assert!(ls.pop(Some(10)).is_none());
        assert_eq!(ls.min_f(), Some(10));
        assert!(ls.pop(Some(11)).is_some());
    }

    #[test]
    fn colliding_keys_stay_distinct() {
        let g = TileState::goal(3, 3);
        let (t, _) = g.apply(Move::Right).unwrap();
        let mut ls = LocalSearch::new();
        assert_eq!(ls.integrate(Keyed::new(42, g), 1, None, || 0), Integration::New);
        assert_eq!(ls.integrate(Keyed::new(42, t), 1, None, || 0), Integration::New);
        assert_eq!(ls.stored(), 2);
    }
}
