#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};
use std::sync::OnceLock;

use hdastar::puzzle::{random_instances, TileState};

/// Exact distance to the goal for every reachable 8-puzzle state, by
/// uninformed breadth-first search backwards from the goal.
pub fn eight_puzzle_distances() -> &'static HashMap<TileState, u32> {
    static TABLE: OnceLock<HashMap<TileState, u32>> = OnceLock::new();
    TABLE.get_or_init(|| bfs_from_goal(3, 3))
}

pub fn bfs_from_goal(width: usize, height: usize) -> HashMap<TileState, u32> {
    let goal = TileState::goal(width, height);
    let mut dist = HashMap::new();
    dist.insert(goal, 0);
    let mut queue = VecDeque::from([goal]);
    while let Some(s) = queue.pop_front() {
        let d = dist[&s];
        for (t, _) in s.successors() {
            dist.entry(t).or_insert_with(|| {
                queue.push_back(t);
                d + 1
            });
        }
    }
    dist
}

pub fn bfs_cost(s: &TileState) -> u32 {
    eight_puzzle_distances()[s]
}

/// The fixed set of seeded random 8-puzzle instances used across tests.
pub fn eight_puzzles(count: usize) -> Vec<TileState> {
    random_instances(3, 3, count, 20_240_601)
}
