use std::sync::Arc;

use super::pdb::PatternDatabase;
use super::state::{TileState, MAX_CELLS};

/// An admissible, consistent estimate of the distance to the goal.
pub trait Heuristic: Send + Sync {
    fn estimate(&self, s: &TileState) -> u32;
    fn name(&self) -> String;
}

/// Sum of Manhattan distances of the numbered tiles to their goal cells.
#[derive(Debug, Clone)]
pub struct Manhattan {
    width: usize,
    height: usize,
    // dist[tile][pos]
    dist: Vec<[u8; MAX_CELLS]>,
}

impl Manhattan {
    pub fn new(width: usize, height: usize) -> Self {
        let cells = width * height;
        let mut dist = vec![[0u8; MAX_CELLS]; cells];
        for (tile, row) in dist.iter_mut().enumerate().skip(1) {
            for (pos, d) in row.iter_mut().enumerate().take(cells) {
                let dr = (tile / width).abs_diff(pos / width);
                let dc = (tile % width).abs_diff(pos % width);
                *d = (dr + dc) as u8;
            }
        }
        Manhattan { width, height, dist }
    }

    pub fn for_state(s: &TileState) -> Self {
        Manhattan::new(s.width(), s.height())
    }

    /// Manhattan distance summed over a subset of tiles only.
    pub fn restricted(&self, s: &TileState, tiles: &[u8]) -> u32 {
        let pos = s.positions();
        tiles.iter().map(|&t| self.dist[t as usize][pos[t as usize] as usize] as u32).sum()
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }
}

impl Heuristic for Manhattan {
    fn estimate(&self, s: &TileState) -> u32 {
        s.tiles()
            .iter()
            .enumerate()
            .map(|(pos, &t)| self.dist[t as usize][pos] as u32)
            .sum()
    }

    fn name(&self) -> String {
        "manhattan".into()
    }
}

impl Heuristic for PatternDatabase {
    fn estimate(&self, s: &TileState) -> u32 {
        self.lookup(s)
    }

    fn name(&self) -> String {
        format!("pdb:{}", self.partition())
    }
}

impl<H: Heuristic + ?Sized> Heuristic for Arc<H> {
    fn estimate(&self, s: &TileState) -> u32 {
        (**self).estimate(s)
    }

    fn name(&self) -> String {
        (**self).name()
    }
}

impl<H: Heuristic + ?Sized> Heuristic for &H {
    fn estimate(&self, s: &TileState) -> u32 {
        (**self).estimate(s)
    }

    fn name(&self) -> String {
        (**self).name()
    }
}
