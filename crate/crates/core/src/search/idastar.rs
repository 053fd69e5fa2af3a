use std::time::Instant;

use crate::config::Algorithm;
use crate::metrics::{ConfigEcho, Outcome, RunReport, WorkerStats};
use crate::problem::Problem;
use crate::puzzle::{Move, TileState};

use super::astar::SerialOptions;
use super::store::Keyed;
use super::tt::TranspositionTable;

struct Ida<'a> {
    problem: &'a Problem,
    tt: TranspositionTable,
    stats: WorkerStats,
    threshold: u32,
    iteration: u32,
    min_pruned: Option<u32>,
    path: Vec<Move>,
}

impl Ida<'_> {
    /// Depth-first probe under the current threshold. Threshold pruning comes
    /// first, then the table check.
    fn visit(&mut self, node: Keyed, g: u32, h: u32) -> bool {
        let f = g + h;
        if f > self.threshold {
            self.min_pruned = Some(self.min_pruned.map_or(f, |m| m.min(f)));
            return false;
        }
        if self.tt.probe(&node, self.iteration).is_some_and(|stored| stored <= g) {
            self.stats.duplicates_received += 1;
            return false;
        }
        self.tt.store(node, g, self.iteration);
        self.stats.record_tt_insert(self.iteration, &node.state);
        self.stats.note_stored(self.tt.len());
        if node.state.is_goal() {
            return true;
        }
        self.stats.record_expansion(node.key, &node.state, g, h, false, None);
        let skip = self.path.last().map(|m| m.inverse());
        for (succ, slide) in node.state.successors() {
            if Some(slide.mv) == skip {
                continue;
            }
            self.stats.generated += 1;
            self.stats.heuristic_calls += 1;
            let sh = self.problem.h(&succ);
            let key = self.problem.zobrist.update_slide(node.key, &slide);
            self.path.push(slide.mv);
            if self.visit(Keyed::new(key, succ), g + 1, sh) {
                return true;
            }
            self.path.pop();
        }
        false
    }
}

/// IDA* with a transposition table. The first threshold is h(start); each
/// next one is the smallest f pruned in the previous iteration.
pub fn idastar_tt(problem: &Problem, opts: SerialOptions) -> RunReport {
    idastar_tt_from(problem, opts, None)
}

/// As [`idastar_tt`], optionally starting from a given threshold.
pub fn idastar_tt_from(problem: &Problem, opts: SerialOptions, initial_threshold: Option<u32>) -> RunReport {
    let clock = Instant::now();
    let start: TileState = problem.start;
    let h0 = problem.h(&start);
    let capacity = opts.tt_capacity.or(opts.node_budget.map(|b| b as usize));
    let mut ida = Ida {
        problem,
        tt: TranspositionTable::new(capacity),
        stats: WorkerStats::traced(opts.trace),
        threshold: initial_threshold.unwrap_or(h0).max(h0),
        iteration: 0,
        min_pruned: None,
        path: Vec::new(),
    };
    ida.stats.heuristic_calls += 1;
    let root = Keyed::new(problem.zobrist.hash(&start), start);

    let mut report = RunReport::new(Algorithm::IdastarTt, problem.instance.clone(), 1);
    report.initial_h = h0;
    report.config = ConfigEcho {
        pack_size: 0,
        seed: 0,
        zobrist_seed: problem.zobrist.seed(),
        node_budget: opts.node_budget,
        transport: "none".into(),
        heuristic: problem.heuristic.name(),
    };

    let outcome = loop {
        report.thresholds.push(ida.threshold);
        ida.min_pruned = None;
        ida.path.clear();
        if ida.visit(root, 0, h0) {
            let path = std::mem::take(&mut ida.path);
            report.set_solution(path.len() as u32, &path);
            break Outcome::Solved;
        }
        match ida.min_pruned {
            Some(next) => {
                ida.threshold = next;
                ida.iteration += 1;
            }
            None => break Outcome::Unsolvable,
        }
    };
    report.outcome = outcome;
    ida.stats.wall_time_s = clock.elapsed().as_secs_f64();
    report.wall_time_s = ida.stats.wall_time_s;
    report.per_worker = vec![ida.stats];
    report.compute_derived();
    report
}
