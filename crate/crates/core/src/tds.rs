//! Transposition-driven scheduling: distributed IDA* in which every
//! generated node travels to the owner of its key. The owner checks it
//! against its shard of the transposition table and, if it survives, pushes
//! it on a local LIFO stack.
//!
//! Iterations are separated by termination probes started by worker 0. The
//! probe gathers the smallest pruned f and any goal cost; worker 0 then
//! either stops or announces the next threshold. Every message carries its
//! iteration, so a worker that hears of a newer one from any source switches
//! to it at once.

use crate::config::{Algorithm, SearchConfig};
use crate::error::{ConfigError, TransportError};
use crate::hda::check_transport;
use crate::metrics::{Outcome, RunReport, WorkerStats};
use crate::problem::{owner, Problem};
use crate::puzzle::{Move, PackedState};
use crate::runtime::{echo, execute, AbortKind, RunEnd, SearchWorker, Step};
use crate::search::{Keyed, TranspositionTable};
use crate::termination::{summarize, LocalView, ProbeAction, TerminationState};
use crate::transport::{ControlMessage, Emitted, Endpoint, Message, PackingBuffer, Probe, SearchEpoch, Stamp, TdsItem, WorkMessage};

/// What happened to a node arriving at its owner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Routed {
    Pushed,
    PrunedDuplicate,
    PrunedThreshold,
}

#[derive(Debug, Clone)]
struct StackNode {
    node: Keyed,
    g: u32,
    h: u32,
    path: Vec<Move>,
    /// Stored over a costlier visit in the same iteration.
    revisit: bool,
}

/// How worker 0 closed the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Decision {
    Solved,
    Unsolvable,
}

pub struct TdsWorker {
    id: usize,
    p: usize,
    problem: Problem,
    h0: u32,
    start_key: u64,
    stack: Vec<StackNode>,
    tt: TranspositionTable,
    epoch: SearchEpoch,
    min_pruned: Option<u32>,
    buffer: PackingBuffer<TdsItem>,
    term: TerminationState,
    stats: WorkerStats,
    incumbent: Option<u32>,
    goal_path: Option<Vec<Move>>,
    stack_limit: usize,
    thresholds: Vec<u32>,
    next_epoch: Option<SearchEpoch>,
    decision: Option<(Decision, Probe)>,
}

/// Smallest pruned f gathered from every worker; `None` means nothing was
/// pruned, so the instance has no solution.
pub fn next_threshold(pruned: &[Option<u32>]) -> Option<u32> {
    pruned.iter().flatten().copied().min()
}

impl TdsWorker {
    pub fn new(id: usize, p: usize, problem: Problem, config: &SearchConfig, initial_threshold: u32) -> Self {
        let start = problem.start;
        let start_key = problem.zobrist.hash(&start);
        let h0 = problem.h(&start);
        let epoch = SearchEpoch { iteration: 0, threshold: initial_threshold };
        let mut w = TdsWorker {
            id,
            p,
            h0,
            start_key,
            stack: Vec::new(),
            tt: TranspositionTable::new(config.per_worker_budget().map(|b| b as usize)),
            epoch,
            min_pruned: None,
            buffer: PackingBuffer::new(p, config.pack_size),
            term: TerminationState::new(id, p),
            stats: WorkerStats::traced(config.trace),
            incumbent: None,
            goal_path: None,
            stack_limit: config.stack_limit,
            thresholds: vec![initial_threshold],
            next_epoch: None,
            decision: None,
            problem,
        };
        w.stats.heuristic_calls += 1;
        w.seed_start();
        w
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn epoch(&self) -> SearchEpoch {
        self.epoch
    }

    pub fn min_pruned_f(&self) -> Option<u32> {
        self.min_pruned
    }

    pub fn table(&self) -> &TranspositionTable {
        &self.tt
    }

    pub fn stats(&self) -> &WorkerStats {
        &self.stats
    }

    fn seed_start(&mut self) {
        if owner(self.start_key, self.p) == self.id {
            let start = self.problem.start;
            self.route_and_check(Keyed::new(self.start_key, start), 0, self.h0, Vec::new());
        }
    }

    /// Threshold check, then the transposition table; survivors go on the
    /// stack.
    pub fn route_and_check(&mut self, node: Keyed, g: u32, h: u32, path: Vec<Move>) -> Routed {
        let f = g + h;
        if f > self.epoch.threshold {
            self.min_pruned = Some(self.min_pruned.map_or(f, |m| m.min(f)));
            return Routed::PrunedThreshold;
        }
        let iteration = self.epoch.iteration;
        self.stats.record_tt_arrival(iteration, &node.state, g);
        let seen = self.tt.probe(&node, iteration);
        if seen.is_some_and(|stored| stored <= g) {
            self.stats.duplicates_received += 1;
            return Routed::PrunedDuplicate;
        }
        self.tt.store(node, g, iteration);
        self.stats.record_tt_insert(iteration, &node.state);
        self.stats.note_stored(self.tt.len());
        self.stack.push(StackNode { node, g, h, path, revisit: seen.is_some() });
        Routed::Pushed
    }

    /// Switch to a newer iteration, dropping whatever was left of the old one.
    fn adopt(&mut self, epoch: SearchEpoch) {
        if epoch.iteration <= self.epoch.iteration {
            return;
        }
        self.epoch = epoch;
        self.stack.clear();
        self.min_pruned = None;
        self.thresholds.push(epoch.threshold);
        self.seed_start();
    }

    fn stamp(&self) -> Stamp {
        Stamp { sender: self.id, timestamp: self.term.clock(), epoch: self.epoch }
    }

    fn account(&mut self, e: Emitted) {
        self.term.on_work_sent(e);
        self.stats.messages_sent += e.messages;
        self.stats.states_sent += e.states;
    }

    fn view(&self) -> LocalView {
        LocalView {
            quiescent: self.stack.is_empty() && self.buffer.is_empty(),
            min_pruned_f: self.min_pruned,
            incumbent: self.incumbent,
            epoch: self.epoch,
        }
    }

    fn receive_work(&mut self, w: WorkMessage<TdsItem>) {
        self.term.on_work_received(w.timestamp, w.items.len());
        self.stats.messages_received += 1;
        self.stats.states_received += w.items.len() as u64;
        self.adopt(w.epoch);
        if w.epoch != self.epoch {
            return;
        }
        let (width, height) = (self.problem.start.width(), self.problem.start.height());
        for item in w.items {
            let state = item.state.unpack(width, height);
            let key = self.problem.zobrist.hash(&state);
            self.route_and_check(Keyed::new(key, state), item.g, item.h, item.path);
        }
    }

    fn note_incumbent(&mut self, cost: u32) {
        if self.incumbent.is_none_or(|c| cost < c) {
            self.incumbent = Some(cost);
        }
    }

    fn handle(&mut self, msg: Message<TdsItem>, ep: &mut dyn Endpoint<TdsItem>) -> Result<Option<Step>, TransportError> {
        match msg {
            Message::Work(w) => self.receive_work(w),
            Message::Control(ControlMessage::Incumbent { cost, .. }) => self.note_incumbent(cost),
            Message::Control(ControlMessage::Threshold(epoch)) => self.adopt(epoch),
            Message::Control(ControlMessage::Probe(probe)) => {
                self.adopt(probe.search_epoch);
                match self.term.handle(probe, self.view()) {
                    ProbeAction::Forward { to, probe } => ep.send(to, Message::Control(ControlMessage::Probe(probe)))?,
                    ProbeAction::Verdict { success: true, probe } => return Ok(Some(self.decide(probe))),
                    ProbeAction::Verdict { success: false, .. } => {}
                }
            }
            Message::Control(ControlMessage::Abort { .. }) => {}
        }
        Ok(None)
    }

    /// The current iteration is over everywhere.
    fn decide(&mut self, probe: Probe) -> Step {
        if probe.incumbent.is_some() {
            self.decision = Some((Decision::Solved, probe));
            return Step::Finished;
        }
        match next_threshold(&[probe.min_pruned_f]) {
            None => {
                self.decision = Some((Decision::Unsolvable, probe));
                Step::Finished
            }
            Some(t) => {
                self.next_epoch = Some(SearchEpoch { iteration: self.epoch.iteration + 1, threshold: t });
                Step::Verdict
            }
        }
    }

    fn announce(&mut self, epoch: SearchEpoch, ep: &mut dyn Endpoint<TdsItem>) -> Result<(), TransportError> {
        for other in (0..self.p).filter(|&o| o != self.id) {
            ep.send(other, Message::Control(ControlMessage::Threshold(epoch)))?;
        }
        self.adopt(epoch);
        Ok(())
    }

    fn expand(&mut self, n: StackNode, ep: &mut dyn Endpoint<TdsItem>) -> Result<(), TransportError> {
        self.stats.record_expansion(n.node.key, &n.node.state, n.g, n.h, n.revisit, self.incumbent);
        let skip = n.path.last().map(|m| m.inverse());
        for (succ, slide) in n.node.state.successors() {
            if Some(slide.mv) == skip {
                continue;
            }
            self.stats.generated += 1;
            self.stats.heuristic_calls += 1;
            let g = n.g + 1;
            let h = self.problem.h(&succ);
            // the threshold test happens here already so that pruned nodes
            // cost no message
            if g + h > self.epoch.threshold {
                self.min_pruned = Some(self.min_pruned.map_or(g + h, |m| m.min(g + h)));
                continue;
            }
            if self.incumbent.is_some_and(|c| g + h >= c) {
                continue;
            }
            let key = self.problem.zobrist.update_slide(n.node.key, &slide);
            let mut path = n.path.clone();
            path.push(slide.mv);
            let dest = owner(key, self.p);
            if dest == self.id {
                self.route_and_check(Keyed::new(key, succ), g, h, path);
            } else {
                let item = TdsItem { state: PackedState::pack(&succ), g, h, path };
                let stamp = self.stamp();
                let e = self.buffer.send_state(dest, item, stamp, ep)?;
                self.account(e);
            }
        }
        Ok(())
    }

    fn found_goal(&mut self, n: StackNode, ep: &mut dyn Endpoint<TdsItem>) -> Result<(), TransportError> {
        self.note_incumbent(n.g);
        self.goal_path = Some(n.path);
        for other in (0..self.p).filter(|&o| o != self.id) {
            ep.send(other, Message::Control(ControlMessage::Incumbent { cost: n.g, from: self.id }))?;
        }
        Ok(())
    }
}

impl SearchWorker for TdsWorker {
    type Item = TdsItem;

    fn step(&mut self, ep: &mut dyn Endpoint<TdsItem>) -> Result<Step, TransportError> {
        if let Some(epoch) = self.next_epoch.take() {
            self.announce(epoch, ep)?;
            return Ok(Step::Busy);
        }
        while let Some(msg) = ep.poll() {
            if let Some(step) = self.handle(msg, ep)? {
                return Ok(step);
            }
        }
        if let Some(n) = self.stack.pop() {
            if self.incumbent.is_some_and(|c| n.g + n.h >= c) {
                return Ok(Step::Busy);
            }
            if n.node.state.is_goal() {
                self.found_goal(n, ep)?;
            } else {
                self.expand(n, ep)?;
            }
            if self.stack.len() > self.stack_limit {
                return Ok(Step::Abort(AbortKind::Failed(format!("worker {} stack exceeded {} nodes", self.id, self.stack_limit))));
            }
            return Ok(Step::Busy);
        }
        let stamp = self.stamp();
        let e = self.buffer.flush_all(stamp, ep)?;
        self.account(e);
        if self.id == 0 && !self.term.has_outstanding_probe() {
            let (to, probe) = self.term.initiate(self.view());
            ep.send(to, Message::Control(ControlMessage::Probe(probe)))?;
        }
        Ok(Step::Idle)
    }

    fn flush(&mut self, ep: &mut dyn Endpoint<TdsItem>) -> Result<(), TransportError> {
        let stamp = self.stamp();
        let e = self.buffer.flush_all(stamp, ep)?;
        self.account(e);
        Ok(())
    }

    fn absorb(&mut self, msg: Message<TdsItem>) {
        if let Message::Work(w) = msg {
            self.term.on_work_received(w.timestamp, w.items.len());
            self.stats.messages_received += 1;
            self.stats.states_received += w.items.len() as u64;
        }
    }

    fn incumbent(&self) -> Option<u32> {
        self.incumbent
    }

    fn buffered(&self) -> usize {
        self.buffer.buffered()
    }

    fn has_pending(&mut self, _bound: Option<u32>) -> bool {
        !self.stack.is_empty()
    }

    fn stats_mut(&mut self) -> &mut WorkerStats {
        &mut self.stats
    }
}

/// TDS from `initial_threshold`, or from h(start) when none is given.
pub fn tds(problem: &Problem, config: &SearchConfig, initial_threshold: Option<u32>) -> Result<RunReport, ConfigError> {
    config.validate()?;
    check_transport(Algorithm::Tds, config.transport)?;
    let p = config.workers;
    let h0 = problem.h(&problem.start);
    let mut report = RunReport::new(Algorithm::Tds, problem.instance.clone(), p);
    report.initial_h = h0;
    report.config = echo(problem, config, config.pack_size);
    if !problem.start.is_solvable() {
        report.outcome = Outcome::Unsolvable;
        return Ok(report);
    }
    let threshold = initial_threshold.unwrap_or(h0).max(h0);
    let workers: Vec<TdsWorker> = (0..p).map(|id| TdsWorker::new(id, p, problem.clone(), config, threshold)).collect();
    let mut result = execute(workers, config);
    let workers = &mut result.workers;
    report.thresholds = workers[0].thresholds.clone();
    report.outcome = match &result.end {
        RunEnd::Finished => {
            let probes = workers[0].term.probes_initiated();
            let (decision, probe) = workers
                .iter()
                .find_map(|w| w.decision.clone())
                .expect("worker 0 decided");
            report.termination = Some(summarize(&probe, probes));
            match decision {
                Decision::Solved => {
                    let path = workers
                        .iter()
                        .filter_map(|w| w.goal_path.as_ref())
                        .min_by_key(|p| p.len())
                        .expect("a worker holds the goal path")
                        .clone();
                    report.set_solution(path.len() as u32, &path);
                    Outcome::Solved
                }
                Decision::Unsolvable => Outcome::Unsolvable,
            }
        }
        RunEnd::MemoryFailure => Outcome::MemoryFailure { f_min: None },
        RunEnd::Aborted(why) => Outcome::Aborted { reason: why.clone() },
    };
    report.wall_time_s = result.wall_time_s;
    report.audit = result.audit;
    report.per_worker = result.workers.into_iter().map(|w| w.stats).collect();
    report.compute_derived();
    Ok(report)
}
