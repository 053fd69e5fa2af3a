//! Hash-distributed A* and its two contrast variants: random work
//! distribution and synchronous (rendezvous) sends with one state per
//! message.
//!
//! Each worker owns the states whose Zobrist key maps to it. A worker drains
//! its inbox, merging arriving states into its open and closed lists, then
//! expands its best open node and routes every successor to the owner. States
//! it owns itself are merged directly without a message.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{Algorithm, SearchConfig, TransportKind};
use crate::error::{ConfigError, TransportError};
use crate::metrics::{Outcome, RunReport, WorkerStats};
use crate::problem::{owner, Problem};
use crate::runtime::{execute, AbortKind, RunEnd, SearchWorker, Step};
use crate::search::astar::walk_back;
use crate::search::{Integration, Keyed, LocalSearch};
use crate::termination::{summarize, LocalView, ProbeAction, TerminationState};
use crate::transport::{ControlMessage, Emitted, Endpoint, HdaItem, Message, PackingBuffer, Probe, Stamp, WorkMessage};
use crate::puzzle::{Move, PackedState, TileState};

/// Where generated states go.
#[derive(Debug, Clone)]
pub enum Distribution {
    /// To the owner of the state's Zobrist key.
    Hash,
    /// To a uniformly random worker; duplicates are caught only locally.
    Random(ChaCha8Rng),
}

pub struct HdaWorker {
    id: usize,
    p: usize,
    problem: Problem,
    search: LocalSearch,
    buffer: PackingBuffer<HdaItem>,
    term: TerminationState,
    stats: WorkerStats,
    budget: Option<u64>,
    incumbent: Option<u32>,
    distribution: Distribution,
    final_probe: Option<Probe>,
}

impl HdaWorker {
    pub fn new(id: usize, p: usize, problem: Problem, config: &SearchConfig, pack_size: usize, distribution: Distribution) -> Self {
        let mut w = HdaWorker {
            id,
            p,
            search: LocalSearch::new(),
            buffer: PackingBuffer::new(p, pack_size),
            term: TerminationState::new(id, p),
            stats: WorkerStats::traced(config.trace),
            budget: config.per_worker_budget(),
            incumbent: None,
            distribution,
            final_probe: None,
            problem,
        };
        let start = w.problem.start;
        let key = w.problem.zobrist.hash(&start);
        if owner(key, p) == id {
            w.stats.heuristic_calls += 1;
            let h = w.problem.h(&start);
            w.search.integrate(Keyed::new(key, start), 0, None, || h);
        }
        w
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn search(&self) -> &LocalSearch {
        &self.search
    }

    pub fn stats(&self) -> &WorkerStats {
        &self.stats
    }

    pub fn termination(&self) -> &TerminationState {
        &self.term
    }

    /// Smallest f on this worker's open list.
    pub fn frontier_min(&mut self) -> Option<u32> {
        self.search.min_f()
    }

    fn stamp(&self) -> Stamp {
        Stamp { sender: self.id, timestamp: self.term.clock(), epoch: Default::default() }
    }

    fn account(&mut self, e: Emitted) {
        self.term.on_work_sent(e);
        self.stats.messages_sent += e.messages;
        self.stats.states_sent += e.states;
    }

    fn quiescent(&mut self) -> bool {
        self.buffer.is_empty() && !self.search.has_work_below(self.incumbent)
    }

    fn view(&mut self) -> LocalView {
        LocalView { quiescent: self.quiescent(), incumbent: self.incumbent, ..Default::default() }
    }

    /// Duplicate check of one state; `h` is computed only if it is new here.
    fn integrate(&mut self, node: Keyed, g: u32, via: Option<Move>, h: Option<u32>) {
        let problem = &self.problem;
        let stats = &mut self.stats;
        let outcome = self.search.integrate(node, g, via, || {
            h.unwrap_or_else(|| {
                stats.heuristic_calls += 1;
                problem.h(&node.state)
            })
        });
        if outcome == Integration::Duplicate {
            self.stats.duplicates_received += 1;
        }
    }

    fn receive_work(&mut self, w: WorkMessage<HdaItem>) {
        self.term.on_work_received(w.timestamp, w.items.len());
        self.stats.messages_received += 1;
        self.stats.states_received += w.items.len() as u64;
        let (width, height) = (self.problem.start.width(), self.problem.start.height());
        for item in w.items {
            let state = item.state.unpack(width, height);
            let key = self.problem.zobrist.hash(&state);
            self.integrate(Keyed::new(key, state), item.g, item.via, Some(item.h));
        }
    }

    fn note_incumbent(&mut self, cost: u32) {
        if self.incumbent.is_none_or(|c| cost < c) {
            self.incumbent = Some(cost);
        }
    }

    /// Returns `Some(Step::Finished)` when this worker's own probe succeeded.
    fn handle(&mut self, msg: Message<HdaItem>, ep: &mut dyn Endpoint<HdaItem>) -> Result<Option<Step>, TransportError> {
        match msg {
            Message::Work(w) => self.receive_work(w),
            Message::Control(ControlMessage::Incumbent { cost, .. }) => self.note_incumbent(cost),
            Message::Control(ControlMessage::Probe(probe)) => {
                let view = self.view();
                match self.term.handle(probe, view) {
                    ProbeAction::Forward { to, probe } => ep.send(to, Message::Control(ControlMessage::Probe(probe)))?,
                    ProbeAction::Verdict { success: true, probe } => {
                        self.final_probe = Some(probe);
                        return Ok(Some(Step::Finished));
                    }
                    ProbeAction::Verdict { success: false, .. } => {}
                }
            }
            Message::Control(ControlMessage::Threshold(_) | ControlMessage::Abort { .. }) => {}
        }
        Ok(None)
    }

    fn expand(&mut self, node: crate::search::Popped, ep: &mut dyn Endpoint<HdaItem>) -> Result<(), TransportError> {
        let Keyed { key, state } = node.node;
        self.stats.record_expansion(key, &state, node.g, node.h, node.reopened, self.incumbent);
        let skip = node.via.map(Move::inverse);
        for (succ, slide) in state.successors() {
            if Some(slide.mv) == skip {
                continue;
            }
            self.stats.generated += 1;
            let skey = self.problem.zobrist.update_slide(key, &slide);
            let dest = match &mut self.distribution {
                Distribution::Hash => owner(skey, self.p),
                Distribution::Random(rng) => rng.gen_range(0..self.p),
            };
            if dest == self.id {
                self.integrate(Keyed::new(skey, succ), node.g + 1, Some(slide.mv), None);
            } else {
                self.stats.heuristic_calls += 1;
                let item = HdaItem { state: PackedState::pack(&succ), g: node.g + 1, h: self.problem.h(&succ), via: Some(slide.mv) };
                let stamp = self.stamp();
                let e = self.buffer.send_state(dest, item, stamp, ep)?;
                self.account(e);
            }
        }
        Ok(())
    }

    fn found_goal(&mut self, cost: u32, ep: &mut dyn Endpoint<HdaItem>) -> Result<(), TransportError> {
        self.note_incumbent(cost);
        for other in (0..self.p).filter(|&o| o != self.id) {
            ep.send(other, Message::Control(ControlMessage::Incumbent { cost, from: self.id }))?;
        }
        Ok(())
    }
}

impl SearchWorker for HdaWorker {
    type Item = HdaItem;

    fn step(&mut self, ep: &mut dyn Endpoint<HdaItem>) -> Result<Step, TransportError> {
        while let Some(msg) = ep.poll() {
            if let Some(step) = self.handle(msg, ep)? {
                return Ok(step);
            }
        }
        if let Some(node) = self.search.pop(self.incumbent) {
            if node.node.state.is_goal() {
                self.found_goal(node.g, ep)?;
            } else {
                self.expand(node, ep)?;
            }
            self.stats.note_stored(self.search.stored());
            if self.budget.is_some_and(|b| self.search.stored() as u64 > b) {
                return Ok(Step::Abort(AbortKind::Memory));
            }
            return Ok(Step::Busy);
        }
        let stamp = self.stamp();
        let e = self.buffer.flush_all(stamp, ep)?;
        self.account(e);
        if self.incumbent.is_some() && !self.term.has_outstanding_probe() {
            let view = self.view();
            let (to, probe) = self.term.initiate(view);
            ep.send(to, Message::Control(ControlMessage::Probe(probe)))?;
        }
        Ok(Step::Idle)
    }

    fn flush(&mut self, ep: &mut dyn Endpoint<HdaItem>) -> Result<(), TransportError> {
        let stamp = self.stamp();
        let e = self.buffer.flush_all(stamp, ep)?;
        self.account(e);
        Ok(())
    }

    fn absorb(&mut self, msg: Message<HdaItem>) {
        match msg {
            Message::Work(w) => self.receive_work(w),
            Message::Control(ControlMessage::Incumbent { cost, .. }) => self.note_incumbent(cost),
            Message::Control(_) => {}
        }
    }

    fn incumbent(&self) -> Option<u32> {
        self.incumbent
    }

    fn buffered(&self) -> usize {
        self.buffer.buffered()
    }

    fn has_pending(&mut self, bound: Option<u32>) -> bool {
        self.search.has_work_below(bound)
    }

    fn stats_mut(&mut self) -> &mut WorkerStats {
        &mut self.stats
    }
}

/// Walk back from the goal through every worker's records, always taking the
/// copy with the smallest `g`.
fn reconstruct(workers: &[HdaWorker], problem: &Problem, cost: u32) -> Option<Vec<Move>> {
    let start = problem.start;
    let goal = TileState::goal(start.width(), start.height());
    walk_back(&start, goal, cost, |s| {
        let key = problem.zobrist.hash(s);
        workers
            .iter()
            .filter_map(|w| w.search.record(key, *s))
            .min_by_key(|r| r.g)
            .and_then(|r| r.via)
    })
}

pub(crate) fn check_transport(algorithm: Algorithm, transport: TransportKind) -> Result<(), ConfigError> {
    let ok = match algorithm {
        Algorithm::PraSync => transport == TransportKind::Sync,
        _ => !matches!(transport, TransportKind::Sync),
    };
    if ok {
        Ok(())
    } else {
        Err(ConfigError::TransportMismatch { algorithm: algorithm.to_string(), transport: transport.to_string() })
    }
}

/// HDA* with Zobrist ownership.
pub fn hda_star(problem: &Problem, config: &SearchConfig) -> Result<RunReport, ConfigError> {
    run_family(problem, config, Algorithm::Hda)
}

/// Every generated state goes to a seeded random worker.
pub fn hda_star_random(problem: &Problem, config: &SearchConfig) -> Result<RunReport, ConfigError> {
    run_family(problem, config, Algorithm::HdaRandom)
}

/// Hash ownership with rendezvous sends of single states.
pub fn pra_star_sync(problem: &Problem, config: &SearchConfig) -> Result<RunReport, ConfigError> {
    run_family(problem, config, Algorithm::PraSync)
}

fn run_family(problem: &Problem, config: &SearchConfig, algorithm: Algorithm) -> Result<RunReport, ConfigError> {
    config.validate()?;
    check_transport(algorithm, config.transport)?;
    let p = config.workers;
    let pack_size = if algorithm == Algorithm::PraSync { 1 } else { config.pack_size };
    let mut report = RunReport::new(algorithm, problem.instance.clone(), p);
    report.initial_h = problem.h(&problem.start);
    report.config = crate::runtime::echo(problem, config, pack_size);
    if !problem.start.is_solvable() {
        report.outcome = Outcome::Unsolvable;
        return Ok(report);
    }

    let workers: Vec<HdaWorker> = (0..p)
        .map(|id| {
            let distribution = match algorithm {
                Algorithm::HdaRandom => Distribution::Random(ChaCha8Rng::seed_from_u64(config.seed ^ (id as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))),
                _ => Distribution::Hash,
            };
            HdaWorker::new(id, p, problem.clone(), config, pack_size, distribution)
        })
        .collect();
    let mut result = execute(workers, config);
    let workers = &mut result.workers;

    report.outcome = match &result.end {
        RunEnd::Finished => {
            let cost = workers.iter().filter_map(|w| w.incumbent).min().expect("probes start only with an incumbent");
            let path = reconstruct(workers, problem, cost).expect("parent links reach the start");
            report.set_solution(cost, &path);
            let probes: u64 = workers.iter().map(|w| w.term.probes_initiated()).sum();
            report.termination = workers.iter().find_map(|w| w.final_probe.as_ref()).map(|pr| summarize(pr, probes));
            Outcome::Solved
        }
        RunEnd::MemoryFailure => {
            let open_min = workers.iter_mut().filter_map(|w| w.frontier_min()).min();
            let incumbent = workers.iter().filter_map(|w| w.incumbent).min();
            let f_min = match (open_min, incumbent) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            };
            Outcome::MemoryFailure { f_min }
        }
        RunEnd::Aborted(why) => Outcome::Aborted { reason: why.clone() },
    };
    report.wall_time_s = result.wall_time_s;
    report.audit = result.audit;
    report.per_worker = result.workers.into_iter().map(|w| w.stats).collect();
    report.compute_derived();
    Ok(report)
}
