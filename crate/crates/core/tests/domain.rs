mod common;

use std::collections::HashSet;

use hdastar::puzzle::{random_walk_instance, Heuristic, Manhattan, Move, PatternDatabase, PatternPartition, TileState, ZobristTable};
use hdastar::{parse_instance, write_instance, PackedState};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{bfs_from_goal, eight_puzzle_distances};

fn walk(width: usize, height: usize, steps: usize, seed: u64) -> TileState {
    random_walk_instance(width, height, steps, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn board() -> impl Strategy<Value = TileState> {
    (2usize..=5, 2usize..=5, 0usize..300, any::<u64>()).prop_map(|(w, h, steps, seed)| walk(w, h, steps, seed))
}

fn eight_pdb() -> PatternDatabase {
    PatternDatabase::build(&PatternPartition::parse("1,2,3,4;5,6,7,8").unwrap(), 3, 3).unwrap()
}

proptest! {
    #[test]
    fn every_move_has_an_inverse(s in board()) {
        for (t, slide) in s.successors() {
            prop_assert_eq!(t.apply(slide.mv.inverse()).map(|x| x.0), Some(s));
            prop_assert!(t.successors().any(|(back, _)| back == s));
            prop_assert_eq!(t.tile_at(slide.to), slide.tile);
            prop_assert_eq!(t.blank(), slide.from);
        }
    }

    #[test]
    fn packing_round_trips(s in board()) {
        prop_assert_eq!(PackedState::pack(&s).unpack(s.width(), s.height()), s);
        if s.width() == s.height() {
            prop_assert_eq!(parse_instance(&write_instance(&s)).unwrap(), s);
        }
    }

    #[test]
    fn incremental_keys_match_full_hash(seed in any::<u64>(), zseed in any::<u64>(), steps in 1usize..400) {
        let z = ZobristTable::new(zseed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = TileState::goal(4, 4);
        let mut key = z.hash(&s);
        for _ in 0..steps {
            let options: Vec<_> = s.successors().collect();
            let (t, slide) = options[rand::Rng::gen_range(&mut rng, 0..options.len())];
            key = z.update_slide(key, &slide);
            s = t;
            prop_assert_eq!(key, z.hash(&s));
        }
    }

    #[test]
    fn manhattan_changes_by_one_per_move(s in board()) {
        let m = Manhattan::for_state(&s);
        let h = m.estimate(&s);
        for (t, _) in s.successors() {
            prop_assert_eq!(h.abs_diff(m.estimate(&t)), 1);
        }
    }

    #[test]
    fn walks_replay_through_paths(s in board(), moves in prop::collection::vec(0usize..4, 0..50)) {
        let mut cur = s;
        let mut done = Vec::new();
        for i in moves {
            let mv = Move::ALL[i];
            if let Some((t, _)) = cur.apply(mv) {
                cur = t;
                done.push(mv);
            }
        }
        prop_assert_eq!(s.apply_path(&done), Some(cur));
    }
}

#[test]
fn parity_matches_reachability() {
    let reachable = bfs_from_goal(3, 2);
    assert_eq!(reachable.len(), 360);
    let mut tiles: Vec<u8> = (0..6).collect();
    let mut seen = 0;
    permutohedron_like(&mut tiles, 0, &mut |t| {
        let s = TileState::new(3, 2, t).unwrap();
        assert_eq!(s.is_solvable(), reachable.contains_key(&s), "{s}");
        seen += 1;
    });
    assert_eq!(seen, 720);
}

fn permutohedron_like(v: &mut Vec<u8>, k: usize, f: &mut impl FnMut(&[u8])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutohedron_like(v, k + 1, f);
        v.swap(k, i);
    }
}

#[test]
fn manhattan_never_overestimates_on_eight_puzzle() {
    let m = Manhattan::new(3, 3);
    for (s, &d) in eight_puzzle_distances() {
        assert!(m.estimate(s) <= d, "{s}");
    }
}

#[test]
fn pdb_is_admissible_and_consistent_on_every_eight_puzzle_state() {
    let pdb = eight_pdb();
    let m = Manhattan::new(3, 3);
    let groups = pdb.partition().groups().to_vec();
    let dist = eight_puzzle_distances();
    assert_eq!(dist.len(), 181_440);
    for (s, &d) in dist {
        let h = pdb.lookup(s);
        assert!(h <= d, "{s}: pdb {h} > optimal {d}");
        for (i, g) in groups.iter().enumerate() {
            assert!(pdb.group_value(i, s) >= m.restricted(s, g));
        }
        for (t, _) in s.successors() {
            assert!(h <= pdb.lookup(&t) + 1, "{s} -> {t}");
        }
    }
    assert_eq!(pdb.lookup(&TileState::goal(3, 3)), 0);
}

#[test]
fn single_group_pdb_is_exact() {
    // one group holding every tile abstracts nothing away
    let pdb = PatternDatabase::build(&PatternPartition::parse("1,2,3,4,5").unwrap(), 3, 2).unwrap();
    for (s, d) in bfs_from_goal(3, 2) {
        assert_eq!(pdb.lookup(&s), d, "{s}");
    }
}

#[test]
fn pdb_dominates_manhattan_on_fifteen_puzzle_samples() {
    let part = PatternPartition::parse("1,2,3,4;5,6,7,8;9,10,11,12;13,14,15").unwrap();
    let pdb = PatternDatabase::build(&part, 4, 4).unwrap();
    let m = Manhattan::new(4, 4);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut seen = HashSet::new();
    for _ in 0..200 {
        let s = random_walk_instance(4, 4, 120, &mut rng);
        seen.insert(s);
        assert!(pdb.lookup(&s) >= m.estimate(&s));
        for (t, _) in s.successors() {
            assert!(pdb.lookup(&s) <= pdb.lookup(&t) + 1);
        }
    }
    assert!(seen.len() > 150);
}

#[test]
fn partition_specs_are_validated() {
    assert!(PatternPartition::parse("1,2,3,4;5,6,7,8").unwrap().validate(9).is_ok());
    assert!(PatternPartition::parse("1,2,3;5,6,7,8").unwrap().validate(9).is_err());
    assert!(PatternPartition::parse("1,2,3,4;4,5,6,7,8").unwrap().validate(9).is_err());
    assert!(PatternPartition::parse("0,1,2,3;4,5,6,7,8").unwrap().validate(9).is_err());
    assert!(PatternPartition::parse("1,2,x").is_err());
}
