//! Termination detection with Mattern's one-wave time algorithm.
//!
//! Every worker keeps a logical clock and counts the work messages it has
//! sent and received. An initiator advances its clock to `T` and sends a
//! probe around the ring 0, 1, …, p−1. Each visited worker raises its clock
//! to at least `T`, so work it sends afterwards is stamped `≥ T`. A worker
//! that has already received such a message cannot be part of a consistent
//! cut and fails the probe. When the probe returns, equal sent and received
//! totals together with quiescence everywhere mean nothing is left to do.

use crate::metrics::TerminationSummary;
use crate::transport::{Emitted, Probe, SearchEpoch, WorkerId};

/// What a worker reports about itself when a probe passes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LocalView {
    /// No buffered output and nothing left below the incumbent (or, for
    /// iterative deepening, an empty stack).
    pub quiescent: bool,
    pub min_pruned_f: Option<u32>,
    pub incumbent: Option<u32>,
    pub epoch: SearchEpoch,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProbeAction {
    Forward { to: WorkerId, probe: Probe },
    /// The probe came back to its initiator.
    Verdict { success: bool, probe: Probe },
}

#[derive(Debug, Clone, Copy)]
struct Outstanding {
    probe_epoch: u64,
    sent: u64,
    received: u64,
}

fn fold_min(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

#[derive(Debug, Clone)]
pub struct TerminationState {
    id: WorkerId,
    workers: usize,
    clock: u64,
    sent: u64,
    received: u64,
    states_sent: u64,
    states_received: u64,
    /// Largest timestamp of any work message received so far.
    max_received: Option<u64>,
    probe_epoch: u64,
    outstanding: Option<Outstanding>,
}

impl TerminationState {
    pub fn new(id: WorkerId, workers: usize) -> Self {
        TerminationState {
            id,
            workers: workers.max(1),
            clock: 0,
            sent: 0,
            received: 0,
            states_sent: 0,
            states_received: 0,
            max_received: None,
            probe_epoch: 0,
            outstanding: None,
        }
    }

    pub fn clock(&self) -> u64 {
        self.clock
    }

    pub fn sent(&self) -> u64 {
        self.sent
    }

    pub fn received(&self) -> u64 {
        self.received
    }

    pub fn probes_initiated(&self) -> u64 {
        self.probe_epoch
    }

    pub fn max_received_timestamp(&self) -> Option<u64> {
        self.max_received
    }

    pub fn has_outstanding_probe(&self) -> bool {
        self.outstanding.is_some()
    }

    fn next(&self) -> WorkerId {
        (self.id + 1) % self.workers
    }

    pub fn on_work_sent(&mut self, e: Emitted) {
        self.sent += e.messages;
        self.states_sent += e.states;
    }

    pub fn on_work_received(&mut self, timestamp: u64, states: usize) {
        self.received += 1;
        self.states_received += states as u64;
        self.max_received = Some(self.max_received.map_or(timestamp, |m| m.max(timestamp)));
    }

    fn clean_since(&self, t: u64) -> bool {
        self.max_received.map_or(true, |m| m < t)
    }

    /// Start a check. The clock moves past every timestamp seen so far, so a
    /// quiet system can pass on the first try.
    pub fn initiate(&mut self, view: LocalView) -> (WorkerId, Probe) {
        self.clock = self.clock.max(self.max_received.unwrap_or(0)) + 1;
        self.probe_epoch += 1;
        self.outstanding = Some(Outstanding { probe_epoch: self.probe_epoch, sent: self.sent, received: self.received });
        let probe = Probe {
            initiator: self.id,
            probe_epoch: self.probe_epoch,
            time: self.clock,
            max_clock: self.clock,
            sent: self.sent,
            received: self.received,
            states_sent: self.states_sent,
            states_received: self.states_received,
            all_quiescent: view.quiescent,
            min_pruned_f: view.min_pruned_f,
            incumbent: view.incumbent,
            search_epoch: view.epoch,
            hops: 1,
        };
        (self.next(), probe)
    }

    /// Process a probe. `view` must describe this worker after any epoch
    /// carried by the probe has been adopted.
    pub fn handle(&mut self, mut probe: Probe, view: LocalView) -> ProbeAction {
        let t = probe.time;
        if probe.initiator == self.id {
            self.clock = self.clock.max(probe.max_clock);
            let mine = self.outstanding.take_if(|o| o.probe_epoch == probe.probe_epoch);
            let unchanged = mine.is_some_and(|o| o.sent == self.sent && o.received == self.received);
            let success = unchanged
                && probe.all_quiescent
                && probe.sent == probe.received
                && probe.states_sent == probe.states_received
                && view.quiescent
                && view.epoch == probe.search_epoch
                && self.clean_since(t);
            return ProbeAction::Verdict { success, probe };
        }
        self.clock = self.clock.max(t);
        probe.max_clock = probe.max_clock.max(self.clock);
        probe.sent += self.sent;
        probe.received += self.received;
        probe.states_sent += self.states_sent;
        probe.states_received += self.states_received;
        probe.all_quiescent &= view.quiescent && self.clean_since(t) && view.epoch == probe.search_epoch;
        probe.min_pruned_f = fold_min(probe.min_pruned_f, view.min_pruned_f);
        probe.incumbent = fold_min(probe.incumbent, view.incumbent);
        probe.hops += 1;
        ProbeAction::Forward { to: self.next(), probe }
    }
}

/// Counters of a completed probe, for reports.
pub fn summarize(probe: &Probe, probes_initiated: u64) -> TerminationSummary {
    TerminationSummary {
        probes_initiated,
        messages_sent: probe.sent,
        messages_received: probe.received,
        states_sent: probe.states_sent,
        states_received: probe.states_received,
    }
}
