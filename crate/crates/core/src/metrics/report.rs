use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::config::Algorithm;
use crate::puzzle::{parse_path, Move, PackedState, TileState};

use super::{load_balance, merge_histograms, r_metrics, expansion_rate};

pub const REPORT_VERSION: u32 = 1;

/// One expansion as seen by a worker, kept only in traced runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpansionRecord {
    pub key: u64,
    pub state: PackedState,
    pub g: u32,
    pub f: u32,
    /// Incumbent known to the worker at the time.
    pub incumbent: Option<u32>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trace {
    pub expansions: Vec<ExpansionRecord>,
    /// (iteration, state) for every transposition-table insertion.
    pub tt_inserts: Vec<(u32, PackedState)>,
    /// (iteration, state, g) for every node that reached a table check.
    pub tt_arrivals: Vec<(u32, PackedState, u32)>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct WorkerStats {
    pub expanded: u64,
    pub generated: u64,
    pub duplicates_received: u64,
    pub reexpansions: u64,
    pub f_histogram: BTreeMap<u32, u64>,
    pub heuristic_calls: u64,
    pub messages_sent: u64,
    pub messages_received: u64,
    pub states_sent: u64,
    pub states_received: u64,
    pub peak_stored: u64,
    pub wall_time_s: f64,
    #[serde(skip)]
    pub trace: Option<Trace>,
}

impl WorkerStats {
    pub fn traced(on: bool) -> Self {
        WorkerStats { trace: on.then(Trace::default), ..Default::default() }
    }

    pub fn record_expansion(&mut self, key: u64, state: &TileState, g: u32, h: u32, reopened: bool, incumbent: Option<u32>) {
        self.expanded += 1;
        if reopened {
            self.reexpansions += 1;
        }
        *self.f_histogram.entry(g + h).or_insert(0) += 1;
        if let Some(t) = &mut self.trace {
            t.expansions.push(ExpansionRecord { key, state: PackedState::pack(state), g, f: g + h, incumbent });
        }
    }

    pub fn record_tt_insert(&mut self, iteration: u32, state: &TileState) {
        if let Some(t) = &mut self.trace {
            t.tt_inserts.push((iteration, PackedState::pack(state)));
        }
    }

    pub fn record_tt_arrival(&mut self, iteration: u32, state: &TileState, g: u32) {
        if let Some(t) = &mut self.trace {
            t.tt_arrivals.push((iteration, PackedState::pack(state), g));
        }
    }

    pub fn note_stored(&mut self, stored: usize) {
        self.peak_stored = self.peak_stored.max(stored as u64);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    Solved,
    MemoryFailure { f_min: Option<u32> },
    Unsolvable,
    Aborted { reason: String },
}

impl Outcome {
    pub fn is_solved(&self) -> bool {
        matches!(self, Outcome::Solved)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Solved => "solved",
            Outcome::MemoryFailure { .. } => "memory_failure",
            Outcome::Unsolvable => "unsolvable",
            Outcome::Aborted { .. } => "aborted",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DerivedMetrics {
    pub total_expanded: u64,
    pub total_generated: u64,
    pub total_reexpansions: u64,
    pub load_balance: Option<f64>,
    pub r_less: Option<f64>,
    pub r_equal: Option<f64>,
    pub r_greater: Option<f64>,
    pub r_reexpansion: Option<f64>,
    pub expansion_rate: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub pack_size: usize,
    pub seed: u64,
    pub zobrist_seed: u64,
    pub node_budget: Option<u64>,
    pub transport: String,
    pub heuristic: String,
}

/// Counters carried by the probe that ended the run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TerminationSummary {
    pub probes_initiated: u64,
    pub messages_sent: u64,
    pub messages_received: u64,
    pub states_sent: u64,
    pub states_received: u64,
}

/// Global checks made by the simulator each time a probe succeeded.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditSummary {
    /// Successful probes that were audited.
    pub verdicts: u64,
    /// Audited verdicts that found work still pending somewhere.
    pub violations: u64,
    /// The remaining fields describe the last audited verdict.
    pub in_flight_work_states: u64,
    pub buffered_states: u64,
    /// Workers holding open work with f below the incumbent.
    pub workers_with_pending_work: Vec<usize>,
    pub states_sent: u64,
    pub states_received: u64,
}

impl AuditSummary {
    pub fn clean(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub report_version: u32,
    pub algorithm: Algorithm,
    pub instance: String,
    pub p: usize,
    pub outcome: Outcome,
    pub cost: Option<u32>,
    /// Blank moves, one `UDLR` letter each.
    pub path: Option<String>,
    pub initial_h: u32,
    pub per_worker: Vec<WorkerStats>,
    pub derived: DerivedMetrics,
    pub config: ConfigEcho,
    pub wall_time_s: f64,
    /// Iteration thresholds for IDA*-family runs.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub thresholds: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub phases: Vec<RunReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub termination: Option<TerminationSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub audit: Option<AuditSummary>,
}

impl RunReport {
    pub fn new(algorithm: Algorithm, instance: impl Into<String>, p: usize) -> Self {
        RunReport {
            report_version: REPORT_VERSION,
            algorithm,
            instance: instance.into(),
            p,
            outcome: Outcome::Aborted { reason: "not run".into() },
            cost: None,
            path: None,
            initial_h: 0,
            per_worker: Vec::new(),
            derived: DerivedMetrics::default(),
            config: ConfigEcho::default(),
            wall_time_s: 0.0,
            thresholds: Vec::new(),
            phase: None,
            phases: Vec::new(),
            termination: None,
            audit: None,
        }
    }

    pub fn set_solution(&mut self, cost: u32, path: &[Move]) {
        self.outcome = Outcome::Solved;
        self.cost = Some(cost);
        self.path = Some(crate::puzzle::path_string(path));
    }

    pub fn path_moves(&self) -> Option<Vec<Move>> {
        self.path.as_deref().and_then(parse_path)
    }

    /// The reported path leads from `start` to the goal in exactly `cost`
    /// moves.
    pub fn path_checks(&self, start: &TileState) -> bool {
        match (self.cost, self.path_moves()) {
            (Some(c), Some(p)) => p.len() as u32 == c && start.apply_path(&p).is_some_and(|s| s.is_goal()),
            _ => false,
        }
    }

    pub fn total_expanded(&self) -> u64 {
        self.per_worker.iter().map(|w| w.expanded).sum()
    }

    pub fn f_histogram(&self) -> BTreeMap<u32, u64> {
        merge_histograms(self.per_worker.iter().map(|w| &w.f_histogram))
    }

    pub fn f_min(&self) -> Option<u32> {
        match &self.outcome {
            Outcome::MemoryFailure { f_min } => *f_min,
            _ => None,
        }
    }

    /// Fill `derived` from the per-worker stats and outcome.
    pub fn compute_derived(&mut self) {
        let expanded: Vec<u64> = self.per_worker.iter().map(|w| w.expanded).collect();
        let total: u64 = expanded.iter().sum();
        let reexp: u64 = self.per_worker.iter().map(|w| w.reexpansions).sum();
        let mut d = DerivedMetrics {
            total_expanded: total,
            total_generated: self.per_worker.iter().map(|w| w.generated).sum(),
            total_reexpansions: reexp,
            load_balance: load_balance(&expanded).ok(),
            expansion_rate: expansion_rate(total, self.wall_time_s, self.p.max(1)).ok(),
            ..Default::default()
        };
        if let (Some(c), true) = (self.cost, self.outcome.is_solved()) {
            if let Ok(r) = r_metrics(&self.f_histogram(), reexp, c) {
                d.r_less = Some(r.less);
                d.r_equal = Some(r.equal);
                d.r_greater = Some(r.greater);
                d.r_reexpansion = Some(r.reexpansion);
            }
        }
        self.derived = d;
    }
}
