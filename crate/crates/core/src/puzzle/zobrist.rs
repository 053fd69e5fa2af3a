use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::state::{Slide, TileState, MAX_CELLS};

/// Seed used when the caller does not pick one.
pub const DEFAULT_ZOBRIST_SEED: u64 = 0x5eed_0f_2a11;

/// Random 64-bit words indexed by (tile, position). Row 0 (the blank) is all
/// zero, so the key depends only on where the numbered tiles are.
#[derive(Clone)]
pub struct ZobristTable {
    entries: Box<[[u64; MAX_CELLS]; MAX_CELLS]>,
    seed: u64,
}

impl ZobristTable {
    pub fn new(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut entries = Box::new([[0u64; MAX_CELLS]; MAX_CELLS]);
        for row in entries.iter_mut().skip(1) {
            for e in row.iter_mut() {
                *e = rng.gen();
            }
        }
        ZobristTable { entries, seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn entry(&self, tile: u8, pos: usize) -> u64 {
        self.entries[tile as usize][pos]
    }

    pub fn hash(&self, s: &TileState) -> u64 {
        s.tiles()
            .iter()
            .enumerate()
            .fold(0u64, |k, (pos, &t)| k ^ self.entries[t as usize][pos])
    }

    /// Key of the child after `tile` slides from `from` to `to`.
    pub fn update(&self, key: u64, tile: u8, from: usize, to: usize) -> u64 {
        key ^ self.entries[tile as usize][from] ^ self.entries[tile as usize][to]
    }

    pub fn update_slide(&self, key: u64, slide: &Slide) -> u64 {
        self.update(key, slide.tile, slide.from, slide.to)
    }
}

impl Default for ZobristTable {
    fn default() -> Self {
        ZobristTable::new(DEFAULT_ZOBRIST_SEED)
    }
}

impl std::fmt::Debug for ZobristTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ZobristTable").field("seed", &self.seed).finish()
    }
}
