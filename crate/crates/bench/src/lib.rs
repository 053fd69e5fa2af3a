//! Fixed workloads shared by the benches.

use hdastar::puzzle::random_walk_instance;
use hdastar::{astar, Problem, SerialOptions, TileState};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Seeded 15-puzzle walks whose serial A* expansion count falls in `band`.
pub fn fifteen_puzzles(seed: u64, band: (u64, u64), count: usize) -> Vec<TileState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let s = random_walk_instance(4, 4, 120, &mut rng);
        if out.contains(&s) {
            continue;
        }
        let e = astar(&Problem::manhattan(s), SerialOptions::default()).total_expanded();
        if (band.0..=band.1).contains(&e) {
            out.push(s);
        }
    }
    out
}

/// The default bench workload: a few instances in the 5k to 50k expansion range.
pub fn workload() -> Vec<Problem> {
    fifteen_puzzles(77, (5_000, 50_000), 3).into_iter().enumerate().map(|(i, s)| Problem::manhattan(s).named(format!("walk-{i}"))).collect()
}
