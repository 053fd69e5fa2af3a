//! Drives a set of search workers over one of the transports: OS threads for
//! the channel meshes, or a single-threaded round-robin scheduler for the
//! delay network.

use std::sync::atomic::{AtomicBool, AtomicU8, Ordering};
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::Instant;

use crate::config::{SearchConfig, TransportKind};
use crate::error::TransportError;
use crate::metrics::{AuditSummary, WorkerStats};
use crate::transport::{async_mesh, sync_mesh, DelayNetwork, Endpoint, Message};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    /// Did some work.
    Busy,
    /// Nothing to do until mail arrives.
    Idle,
    /// A termination probe just succeeded here. The worker acts on it at its
    /// next step, so the scheduler can audit the global state first.
    Verdict,
    /// The whole search is over.
    Finished,
    Abort(AbortKind),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AbortKind {
    /// The worker's share of the node budget is used up.
    Memory,
    Failed(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunEnd {
    Finished,
    MemoryFailure,
    Aborted(String),
}

pub trait SearchWorker: Send {
    type Item: Send;

    fn step(&mut self, ep: &mut dyn Endpoint<Self::Item>) -> Result<Step, TransportError>;
    /// Emit every buffered state.
    fn flush(&mut self, ep: &mut dyn Endpoint<Self::Item>) -> Result<(), TransportError>;
    /// Take in a message after the run stopped, ignoring the budget.
    fn absorb(&mut self, msg: Message<Self::Item>);
    fn incumbent(&self) -> Option<u32>;
    fn buffered(&self) -> usize;
    /// Work this worker would still do if `bound` were the global incumbent.
    fn has_pending(&mut self, bound: Option<u32>) -> bool;
    fn stats_mut(&mut self) -> &mut WorkerStats;
}

pub struct RunResult<W> {
    pub workers: Vec<W>,
    pub end: RunEnd,
    pub audit: Option<AuditSummary>,
    pub wall_time_s: f64,
}

/// Run until a worker finishes or aborts. After an abort, buffers are flushed
/// and every undelivered message is handed to its receiver.
pub fn execute<W: SearchWorker>(workers: Vec<W>, config: &SearchConfig) -> RunResult<W> {
    let p = workers.len();
    match config.transport {
        TransportKind::Async => run_threaded(workers, async_mesh(p), config, None),
        TransportKind::Sync => {
            let stop = Arc::new(AtomicBool::new(false));
            let eps = sync_mesh(p, config.sync_watchdog, Arc::clone(&stop));
            run_threaded(workers, eps, config, Some(stop))
        }
        TransportKind::Delay { seed, max_delay } => run_simulated(workers, seed, max_delay, config.max_sim_rounds),
    }
}

const RUNNING: u8 = 0;
const STOPPED: u8 = 1;

struct RunControl {
    state: AtomicU8,
    end: Mutex<Option<RunEnd>>,
    stop: Option<Arc<AtomicBool>>,
}

impl RunControl {
    fn running(&self) -> bool {
        self.state.load(Ordering::Acquire) == RUNNING
    }

    fn conclude(&self, end: RunEnd) {
        if self.state.compare_exchange(RUNNING, STOPPED, Ordering::AcqRel, Ordering::Acquire).is_ok() {
            *self.end.lock().unwrap() = Some(end);
        }
        if let Some(stop) = &self.stop {
            stop.store(true, Ordering::Release);
        }
    }
}

fn drain<W: SearchWorker>(worker: &mut W, ep: &mut dyn Endpoint<W::Item>) {
    while let Some(m) = ep.poll() {
        worker.absorb(m);
    }
}

pub fn run_threaded<W, E>(workers: Vec<W>, eps: Vec<E>, config: &SearchConfig, stop: Option<Arc<AtomicBool>>) -> RunResult<W>
where
    W: SearchWorker,
    E: Endpoint<W::Item> + Send,
{
    let clock = Instant::now();
    let ctl = RunControl { state: AtomicU8::new(RUNNING), end: Mutex::new(None), stop };
    let idle_wait = config.idle_wait;
    let yield_every = config.yield_every.max(1);
    let mut pairs: Vec<(W, E)> = thread::scope(|scope| {
        let handles: Vec<_> = workers
            .into_iter()
            .zip(eps)
            .map(|(mut w, mut ep)| {
                let ctl = &ctl;
                scope.spawn(move || {
                    let began = Instant::now();
                    let mut busy = 0u64;
                    while ctl.running() {
                        match w.step(&mut ep) {
                            Ok(Step::Busy | Step::Verdict) => {
                                busy += 1;
                                if busy % yield_every == 0 {
                                    thread::yield_now();
                                }
                            }
                            Ok(Step::Idle) => ep.wait(idle_wait),
                            Ok(Step::Finished) => ctl.conclude(RunEnd::Finished),
                            Ok(Step::Abort(AbortKind::Memory)) => ctl.conclude(RunEnd::MemoryFailure),
                            Ok(Step::Abort(AbortKind::Failed(why))) => ctl.conclude(RunEnd::Aborted(why)),
                            Err(e) => ctl.conclude(RunEnd::Aborted(e.to_string())),
                        }
                    }
                    w.stats_mut().wall_time_s = began.elapsed().as_secs_f64();
                    (w, ep)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker thread panicked")).collect()
    });
    let wall_time_s = clock.elapsed().as_secs_f64();
    let end = ctl.end.lock().unwrap().take().unwrap_or(RunEnd::Aborted("no verdict".into()));
    if end != RunEnd::Finished {
        for (w, ep) in pairs.iter_mut() {
            let _ = w.flush(ep);
        }
        for (w, ep) in pairs.iter_mut() {
            drain(w, ep);
        }
    }
    RunResult { workers: pairs.into_iter().map(|(w, _)| w).collect(), end, audit: None, wall_time_s }
}

fn audit_verdict<W: SearchWorker>(workers: &mut [W], net: &DelayNetwork<W::Item>, audit: &mut AuditSummary) {
    let best = workers.iter().filter_map(|w| w.incumbent()).min();
    audit.verdicts += 1;
    audit.in_flight_work_states = net.in_flight_work_states();
    audit.buffered_states = workers.iter().map(|w| w.buffered() as u64).sum();
    audit.workers_with_pending_work =
        workers.iter_mut().enumerate().filter_map(|(i, w)| w.has_pending(best).then_some(i)).collect();
    audit.states_sent = workers.iter_mut().map(|w| w.stats_mut().states_sent).sum();
    audit.states_received = workers.iter_mut().map(|w| w.stats_mut().states_received).sum();
    let dirty = audit.in_flight_work_states > 0
        || audit.buffered_states > 0
        || !audit.workers_with_pending_work.is_empty()
        || audit.states_sent != audit.states_received;
    if dirty {
        audit.violations += 1;
    }
}

/// Deterministic mode: each round steps every worker once in index order,
/// then advances the network clock.
pub fn run_simulated<W: SearchWorker>(mut workers: Vec<W>, seed: u64, max_delay: u64, max_rounds: u64) -> RunResult<W> {
    let clock = Instant::now();
    let p = workers.len();
    let mut net = DelayNetwork::new(p, seed, max_delay);
    let mut audit = AuditSummary::default();
    let mut end = RunEnd::Aborted(format!("no verdict within {max_rounds} rounds"));
    'rounds: for _ in 0..max_rounds {
        for i in 0..p {
            let step = workers[i].step(&mut net.endpoint(i));
            match step {
                Ok(Step::Busy | Step::Idle) => {}
                Ok(Step::Verdict) => audit_verdict(&mut workers, &net, &mut audit),
                Ok(Step::Finished) => {
                    audit_verdict(&mut workers, &net, &mut audit);
                    end = RunEnd::Finished;
                    break 'rounds;
                }
                Ok(Step::Abort(AbortKind::Memory)) => {
                    end = RunEnd::MemoryFailure;
                    break 'rounds;
                }
                Ok(Step::Abort(AbortKind::Failed(why))) => {
                    end = RunEnd::Aborted(why);
                    break 'rounds;
                }
                Err(e) => {
                    end = RunEnd::Aborted(e.to_string());
                    break 'rounds;
                }
            }
        }
        net.advance();
    }
    if end != RunEnd::Finished {
        for (i, w) in workers.iter_mut().enumerate() {
            let _ = w.flush(&mut net.endpoint(i));
        }
        for (i, w) in workers.iter_mut().enumerate() {
            for m in net.drain_all(i) {
                w.absorb(m);
            }
        }
    }
    let wall_time_s = clock.elapsed().as_secs_f64();
    for w in workers.iter_mut() {
        w.stats_mut().wall_time_s = wall_time_s;
    }
    RunResult { workers, end, audit: Some(audit), wall_time_s }
}

/// Configuration snapshot for a parallel run report.
pub(crate) fn echo(problem: &crate::problem::Problem, config: &SearchConfig, pack_size: usize) -> crate::metrics::ConfigEcho {
    crate::metrics::ConfigEcho {
        pack_size,
        seed: config.seed,
        zobrist_seed: problem.zobrist.seed(),
        node_budget: config.node_budget,
        transport: config.transport.to_string(),
        heuristic: problem.heuristic.name(),
    }
}
