use std::time::Instant;

use crate::config::Algorithm;
use crate::metrics::{ConfigEcho, Outcome, RunReport, WorkerStats};
use crate::problem::Problem;
use crate::puzzle::{Move, TileState};

use super::store::{Integration, Keyed, LocalSearch};

#[derive(Debug, Clone, Copy, Default)]
pub struct SerialOptions {
    /// Stored-state (open + closed) limit.
    pub node_budget: Option<u64>,
    /// Transposition-table capacity for IDA*; falls back to `node_budget`.
    pub tt_capacity: Option<usize>,
    pub trace: bool,
}

/// Walk parent links back from `goal` using `lookup`, which returns the blank
/// move that produced a state at its best known `g`.
pub(crate) fn walk_back(start: &TileState, goal: TileState, cost: u32, mut lookup: impl FnMut(&TileState) -> Option<Move>) -> Option<Vec<Move>> {
    let mut path = Vec::with_capacity(cost as usize);
    let mut cur = goal;
    while cur != *start {
        if path.len() > cost as usize {
            return None;
        }
        let mv = lookup(&cur)?;
        path.push(mv);
        cur = cur.apply(mv.inverse())?.0;
    }
    path.reverse();
    Some(path)
}

/// Textbook A*: pop by (f, deeper g first), goal test at pop, duplicates
/// resolved on full-state equality.
pub fn astar(problem: &Problem, opts: SerialOptions) -> RunReport {
    let clock = Instant::now();
    let start = problem.start;
    let z = &problem.zobrist;
    let mut stats = WorkerStats::traced(opts.trace);
    let mut search = LocalSearch::new();
    let h0 = problem.h(&start);
    stats.heuristic_calls += 1;
    search.integrate(Keyed::new(z.hash(&start), start), 0, None, || h0);

    let mut report = RunReport::new(Algorithm::Astar, problem.instance.clone(), 1);
    report.initial_h = h0;
    report.config = ConfigEcho {
        pack_size: 0,
        seed: 0,
        zobrist_seed: z.seed(),
        node_budget: opts.node_budget,
        transport: "none".into(),
        heuristic: problem.heuristic.name(),
    };

    let outcome = loop {
        let Some(node) = search.pop(None) else { break Outcome::Unsolvable };
        if node.node.state.is_goal() {
            let path = walk_back(&start, node.node.state, node.g, |s| {
                search.record(z.hash(s), *s).and_then(|r| r.via)
            })
            .expect("parent links reach the start");
            report.set_solution(node.g, &path);
            break Outcome::Solved;
        }
        stats.record_expansion(node.node.key, &node.node.state, node.g, node.h, node.reopened, None);
        let skip = node.via.map(Move::inverse);
        for (succ, slide) in node.node.state.successors() {
            if Some(slide.mv) == skip {
                continue;
            }
            stats.generated += 1;
            let key = z.update_slide(node.node.key, &slide);
            let r = search.integrate(Keyed::new(key, succ), node.g + 1, Some(slide.mv), || {
                stats.heuristic_calls += 1;
                problem.h(&succ)
            });
            if r == Integration::Duplicate {
                stats.duplicates_received += 1;
            }
        }
        stats.note_stored(search.stored());
        if opts.node_budget.is_some_and(|b| search.stored() as u64 > b) {
            break Outcome::MemoryFailure { f_min: search.min_f() };
        }
    };
    report.outcome = outcome;
    stats.wall_time_s = clock.elapsed().as_secs_f64();
    report.wall_time_s = stats.wall_time_s;
    report.per_worker = vec![stats];
    report.compute_derived();
    report
}
