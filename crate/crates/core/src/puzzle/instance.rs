//! Plain-text instances: whitespace-separated tiles in row-major order, 0 for
//! the blank, one instance per line. Blank lines and `#` comments are skipped.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::PuzzleError;

use super::state::{Move, TileState};

fn side_for(count: usize) -> Result<usize, PuzzleError> {
    match count {
        4 => Ok(2),
        9 => Ok(3),
        16 => Ok(4),
        25 => Ok(5),
        _ => Err(PuzzleError::NotSquare { count }),
    }
}

/// Parse one instance. The board is square with its side inferred from the
/// tile count; unsolvable permutations are rejected.
pub fn parse_instance(text: &str) -> Result<TileState, PuzzleError> {
    let tiles = text
        .split_whitespace()
        .map(|tok| tok.parse::<u8>().map_err(|_| PuzzleError::BadToken { token: tok.to_string() }))
        .collect::<Result<Vec<_>, _>>()?;
    let side = side_for(tiles.len())?;
    let s = TileState::new(side, side, &tiles)?;
    if !s.is_solvable() {
        return Err(PuzzleError::Unsolvable);
    }
    Ok(s)
}

pub fn write_instance(s: &TileState) -> String {
    s.to_string()
}

/// Parse a file of instances, one per non-empty, non-comment line.
pub fn parse_instances(text: &str) -> Result<Vec<TileState>, PuzzleError> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(parse_instance)
        .collect()
}

/// Uniformly random solvable instance.
pub fn random_instance(width: usize, height: usize, rng: &mut impl Rng) -> TileState {
    let mut tiles: Vec<u8> = (0..(width * height) as u8).collect();
    loop {
        tiles.shuffle(rng);
        let s = TileState::new(width, height, &tiles).expect("shuffle keeps a permutation");
        if s.is_solvable() {
            return s;
        }
    }
}

/// `count` seeded random solvable instances.
pub fn random_instances(width: usize, height: usize, count: usize, seed: u64) -> Vec<TileState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_instance(width, height, &mut rng)).collect()
}

/// Instance produced by a random walk of `steps` blank moves from the goal,
/// never immediately undoing the previous move.
pub fn random_walk_instance(width: usize, height: usize, steps: usize, rng: &mut impl Rng) -> TileState {
    let mut s = TileState::goal(width, height);
    let mut last: Option<Move> = None;
    for _ in 0..steps {
        let options: Vec<Move> = Move::ALL
            .iter()
            .copied()
            .filter(|&m| Some(m.inverse()) != last && s.target(m).is_some())
            .collect();
        let mv = *options.choose(rng).expect("every cell has a non-reversing move");
        s = s.apply(mv).unwrap().0;
        last = Some(mv);
    }
    s
}
