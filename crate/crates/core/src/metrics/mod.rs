//! Per-worker counters, run reports, and the evaluation formulas: search
//! overhead, load balance, relative speedup and efficiency, the R-metrics,
//! and node expansion rate.

mod report;
mod suite;

pub use report::{
    AuditSummary, ConfigEcho, DerivedMetrics, ExpansionRecord, Outcome, RunReport, TerminationSummary, Trace,
    WorkerStats, REPORT_VERSION,
};
pub use suite::{run_search_overhead, GroupRow, PminEntry, SuiteReport, SuiteRow};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::MetricError;

/// Percentage of extra expansions over a baseline: `100 · (parallel/baseline − 1)`.
/// Negative when the parallel run expanded fewer states.
pub fn search_overhead(parallel_expanded: u64, baseline_expanded: u64) -> Result<f64, MetricError> {
    if baseline_expanded == 0 {
        return Err(MetricError::ZeroBaseline);
    }
    Ok(100.0 * (parallel_expanded as f64 / baseline_expanded as f64 - 1.0))
}

/// Maximum per-worker expansions over the mean.
pub fn load_balance(expanded: &[u64]) -> Result<f64, MetricError> {
    let total: u64 = expanded.iter().sum();
    if expanded.is_empty() || total == 0 {
        return Err(MetricError::NoExpansions);
    }
    let max = *expanded.iter().max().unwrap() as f64;
    let mean = total as f64 / expanded.len() as f64;
    Ok(max / mean)
}

/// Relative speedup `S = t_min / t_n` and efficiency `E = S / (n / p_min)`
/// measured against the smallest worker count that solved the instance.
pub fn relative_speedup_efficiency(t_min: f64, p_min: usize, t_n: f64, n: usize) -> Result<(f64, f64), MetricError> {
    if !(t_min > 0.0) {
        return Err(MetricError::NonPositive("t_min"));
    }
    if !(t_n > 0.0) {
        return Err(MetricError::NonPositive("t_n"));
    }
    if p_min == 0 || n == 0 {
        return Err(MetricError::NonPositive("worker count"));
    }
    let speedup = t_min / t_n;
    Ok((speedup, speedup / (n as f64 / p_min as f64)))
}

/// Fractions of expansions below, at and above the optimal cost, and the
/// re-expansion ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RMetrics {
    pub less: f64,
    pub equal: f64,
    pub greater: f64,
    pub reexpansion: f64,
}

pub fn r_metrics(f_histogram: &BTreeMap<u32, u64>, reexpansions: u64, c_star: u32) -> Result<RMetrics, MetricError> {
    let total: u64 = f_histogram.values().sum();
    if total == 0 {
        return Err(MetricError::NoExpansions);
    }
    let below: u64 = f_histogram.range(..c_star).map(|(_, n)| n).sum();
    let at = f_histogram.get(&c_star).copied().unwrap_or(0);
    let above = total - below - at;
    let t = total as f64;
    Ok(RMetrics {
        less: below as f64 / t,
        equal: at as f64 / t,
        greater: above as f64 / t,
        reexpansion: reexpansions as f64 / t,
    })
}

/// Merge per-worker f histograms.
pub fn merge_histograms<'a>(hists: impl IntoIterator<Item = &'a BTreeMap<u32, u64>>) -> BTreeMap<u32, u64> {
    let mut out = BTreeMap::new();
    for h in hists {
        for (&f, &n) in h {
            *out.entry(f).or_insert(0) += n;
        }
    }
    out
}

/// Expansions per second per worker: total time is wall time times `p`.
pub fn expansion_rate(total_expanded: u64, wall_time_s: f64, p: usize) -> Result<f64, MetricError> {
    if !(wall_time_s > 0.0) {
        return Err(MetricError::NonPositive("wall_time"));
    }
    if p == 0 {
        return Err(MetricError::NonPositive("worker count"));
    }
    Ok(total_expanded as f64 / (wall_time_s * p as f64))
}

/// Expansion rate at `p` workers relative to the rate at `p_min`.
pub fn expansion_rate_ratio(rate_p: f64, rate_p_min: f64) -> Result<f64, MetricError> {
    if !(rate_p_min > 0.0) {
        return Err(MetricError::NonPositive("baseline rate"));
    }
    Ok(rate_p / rate_p_min)
}
