use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::PuzzleError;

/// Largest supported board (5×5).
pub const MAX_CELLS: usize = 25;

/// Direction the blank travels. A path is written as the sequence of blank
/// moves, one letter each (`U`, `D`, `L`, `R`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Move {
    Up,
    Down,
    Left,
    Right,
}

impl Move {
    pub const ALL: [Move; 4] = [Move::Up, Move::Down, Move::Left, Move::Right];

    pub fn inverse(self) -> Move {
        match self {
            Move::Up => Move::Down,
            Move::Down => Move::Up,
            Move::Left => Move::Right,
            Move::Right => Move::Left,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Move::Up => 'U',
            Move::Down => 'D',
            Move::Left => 'L',
            Move::Right => 'R',
        }
    }

    pub fn from_letter(c: char) -> Option<Move> {
        match c {
            'U' | 'u' => Some(Move::Up),
            'D' | 'd' => Some(Move::Down),
            'L' | 'l' => Some(Move::Left),
            'R' | 'r' => Some(Move::Right),
            _ => None,
        }
    }
}

/// Render a move sequence as a `UDLR` string.
pub fn path_string(path: &[Move]) -> String {
    path.iter().map(|m| m.letter()).collect()
}

/// Parse a `UDLR` string.
pub fn parse_path(text: &str) -> Option<Vec<Move>> {
    text.chars().map(Move::from_letter).collect()
}

/// Result of sliding the blank once.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Slide {
    pub mv: Move,
    /// Tile that moved into the old blank cell.
    pub tile: u8,
    /// Cell the tile left (the new blank cell).
    pub from: usize,
    /// Cell the tile entered (the old blank cell).
    pub to: usize,
}

/// A sliding-tile configuration. `tiles[pos]` is the tile at board position
/// `pos` in row-major order; 0 is the blank. The goal has the blank at
/// position 0 followed by tiles in ascending order.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct TileState {
    tiles: [u8; MAX_CELLS],
    width: u8,
    height: u8,
    blank: u8,
}

impl TileState {
    /// Build a state, checking the permutation invariant. Solvability is not
    /// checked here; see [`TileState::is_solvable`].
    pub fn new(width: usize, height: usize, tiles: &[u8]) -> Result<Self, PuzzleError> {
        if width == 0 || height == 0 || width * height > MAX_CELLS || width * height < 2 {
            return Err(PuzzleError::BadDimensions { width, height });
        }
        let cells = width * height;
        if tiles.len() != cells {
            return Err(PuzzleError::WrongTileCount { expected: cells, found: tiles.len() });
        }
        let mut seen = [false; MAX_CELLS];
        let mut buf = [0u8; MAX_CELLS];
        let mut blank = 0;
        for (pos, &t) in tiles.iter().enumerate() {
            let ti = t as usize;
            if ti >= cells {
                return Err(PuzzleError::TileOutOfRange { tile: ti, cells });
            }
            if seen[ti] {
                return Err(PuzzleError::DuplicateTile { tile: ti });
            }
            seen[ti] = true;
            buf[pos] = t;
            if t == 0 {
                blank = pos;
            }
        }
        Ok(TileState { tiles: buf, width: width as u8, height: height as u8, blank: blank as u8 })
    }

    pub fn goal(width: usize, height: usize) -> Self {
        let tiles: Vec<u8> = (0..(width * height) as u8).collect();
        TileState::new(width, height, &tiles).expect("goal layout is a valid permutation")
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    pub fn height(&self) -> usize {
        self.height as usize
    }

    pub fn cells(&self) -> usize {
        self.width() * self.height()
    }

    pub fn blank(&self) -> usize {
        self.blank as usize
    }

    pub fn tiles(&self) -> &[u8] {
        &self.tiles[..self.cells()]
    }

    pub fn tile_at(&self, pos: usize) -> u8 {
        self.tiles[pos]
    }

    pub fn is_goal(&self) -> bool {
        self.tiles().iter().enumerate().all(|(pos, &t)| t as usize == pos)
    }

    /// Positions indexed by tile.
    pub fn positions(&self) -> [u8; MAX_CELLS] {
        let mut pos = [0u8; MAX_CELLS];
        for (p, &t) in self.tiles().iter().enumerate() {
            pos[t as usize] = p as u8;
        }
        pos
    }

    pub fn same_board(&self, other: &TileState) -> bool {
        self.width == other.width && self.height == other.height
    }

    /// Parity test against the blank-first goal. For odd widths the inversion
    /// count must be even; for even widths inversions plus the blank's row
    /// must be even.
    pub fn is_solvable(&self) -> bool {
        let tiles: Vec<u8> = self.tiles().iter().copied().filter(|&t| t != 0).collect();
        let mut inversions = 0usize;
        for i in 0..tiles.len() {
            for j in i + 1..tiles.len() {
                if tiles[i] > tiles[j] {
                    inversions += 1;
                }
            }
        }
        if self.width() % 2 == 1 {
            inversions % 2 == 0
        } else {
            (inversions + self.blank() / self.width()) % 2 == 0
        }
    }

    /// Cell the blank would move to, if the move stays on the board.
    pub fn target(&self, mv: Move) -> Option<usize> {
        let w = self.width();
        let b = self.blank();
        let (row, col) = (b / w, b % w);
        match mv {
            Move::Up if row > 0 => Some(b - w),
            Move::Down if row + 1 < self.height() => Some(b + w),
            Move::Left if col > 0 => Some(b - 1),
            Move::Right if col + 1 < w => Some(b + 1),
            _ => None,
        }
    }

    /// Slide the blank; `None` when the move leaves the board.
    pub fn apply(&self, mv: Move) -> Option<(TileState, Slide)> {
        let to = self.target(mv)?;
        let mut next = *self;
        let tile = next.tiles[to];
        next.tiles[self.blank()] = tile;
        next.tiles[to] = 0;
        next.blank = to as u8;
        Some((next, Slide { mv, tile, from: to, to: self.blank() }))
    }

    /// Apply a whole path, failing on the first illegal move.
    pub fn apply_path(&self, path: &[Move]) -> Option<TileState> {
        path.iter().try_fold(*self, |s, &mv| s.apply(mv).map(|(n, _)| n))
    }

    /// All legal successors with the slide that produced them. Every edge
    /// has unit cost.
    pub fn successors(&self) -> impl Iterator<Item = (TileState, Slide)> + '_ {
        Move::ALL.iter().filter_map(move |&mv| self.apply(mv))
    }
}

impl fmt::Debug for TileState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TileState({}x{} {:?})", self.width, self.height, self.tiles())
    }
}

impl fmt::Display for TileState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for t in self.tiles() {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// A state squeezed into 5 bits per cell, as carried in work messages. The
/// board dimensions travel out of band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PackedState(pub u128);

impl PackedState {
    pub fn pack(s: &TileState) -> Self {
        let mut bits = 0u128;
        for (pos, &t) in s.tiles().iter().enumerate() {
            bits |= (t as u128) << (5 * pos);
        }
        PackedState(bits)
    }

    pub fn unpack(self, width: usize, height: usize) -> TileState {
        let cells = width * height;
        let mut tiles = [0u8; MAX_CELLS];
        let mut blank = 0;
        for (pos, tile) in tiles.iter_mut().enumerate().take(cells) {
            *tile = ((self.0 >> (5 * pos)) & 0x1f) as u8;
            if *tile == 0 {
                blank = pos;
            }
        }
        TileState { tiles, width: width as u8, height: height as u8, blank: blank as u8 }
    }
}
