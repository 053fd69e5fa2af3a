use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::config::Algorithm;

use super::report::{RunReport, REPORT_VERSION};
use super::{expansion_rate_ratio, relative_speedup_efficiency, search_overhead};

/// Smallest worker count that solved an instance with a given algorithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PminEntry {
    pub instance: String,
    pub algorithm: Algorithm,
    pub p_min: Option<usize>,
    pub t_min: Option<f64>,
    pub expanded_at_p_min: Option<f64>,
}

/// Aggregate over all runs (seeds) of one (instance, algorithm, p).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteRow {
    pub instance: String,
    pub algorithm: Algorithm,
    pub p: usize,
    pub runs: usize,
    pub solved: usize,
    pub mean_wall_time_s: Option<f64>,
    pub mean_expanded: Option<f64>,
    pub speedup: Option<f64>,
    pub efficiency: Option<f64>,
    pub search_overhead: Option<f64>,
    pub load_balance: Option<f64>,
    pub r_less: Option<f64>,
    pub r_equal: Option<f64>,
    pub r_greater: Option<f64>,
    pub r_reexpansion: Option<f64>,
    pub expansion_rate: Option<f64>,
    pub expansion_rate_ratio: Option<f64>,
}

/// Averages over instances sharing the same p_min.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupRow {
    pub algorithm: Algorithm,
    pub p_min: usize,
    pub p: usize,
    pub instances: usize,
    pub mean_efficiency: Option<f64>,
    pub mean_search_overhead: Option<f64>,
    pub mean_load_balance: Option<f64>,
    pub mean_expansion_rate_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub report_version: u32,
    pub runs: Vec<RunReport>,
    pub p_min: Vec<PminEntry>,
    pub rows: Vec<SuiteRow>,
    pub groups: Vec<GroupRow>,
}

fn mean(values: impl IntoIterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.into_iter().fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

fn mean_opt(values: impl IntoIterator<Item = Option<f64>>) -> Option<f64> {
    mean(values.into_iter().flatten())
}

impl SuiteReport {
    pub fn from_runs(runs: Vec<RunReport>) -> Self {
        let mut cells: BTreeMap<(String, Algorithm, usize), Vec<&RunReport>> = BTreeMap::new();
        for r in &runs {
            cells.entry((r.instance.clone(), r.algorithm, r.p)).or_default().push(r);
        }

        let mut rows: Vec<SuiteRow> = cells
            .iter()
            .map(|((inst, algo, p), rs)| {
                let solved: Vec<&&RunReport> = rs.iter().filter(|r| r.outcome.is_solved()).collect();
                let all = solved.len() == rs.len();
                let pick = |f: &dyn Fn(&RunReport) -> Option<f64>| if all { mean_opt(solved.iter().map(|r| f(r))) } else { None };
                SuiteRow {
                    instance: inst.clone(),
                    algorithm: *algo,
                    p: *p,
                    runs: rs.len(),
                    solved: solved.len(),
                    mean_wall_time_s: pick(&|r| Some(r.wall_time_s)),
                    mean_expanded: pick(&|r| Some(r.total_expanded() as f64)),
                    speedup: None,
                    efficiency: None,
                    search_overhead: None,
                    load_balance: pick(&|r| r.derived.load_balance),
                    r_less: pick(&|r| r.derived.r_less),
                    r_equal: pick(&|r| r.derived.r_equal),
                    r_greater: pick(&|r| r.derived.r_greater),
                    r_reexpansion: pick(&|r| r.derived.r_reexpansion),
                    expansion_rate: pick(&|r| r.derived.expansion_rate),
                    expansion_rate_ratio: None,
                }
            })
            .collect();

        // rows are sorted by (instance, algorithm, p), so the first solved row
        // of each (instance, algorithm) is the baseline
        let mut p_min: Vec<PminEntry> = Vec::new();
        let mut baseline: BTreeMap<(String, Algorithm), SuiteRow> = BTreeMap::new();
        for row in &rows {
            let key = (row.instance.clone(), row.algorithm);
            if !baseline.contains_key(&key) && row.mean_wall_time_s.is_some() {
                baseline.insert(key.clone(), row.clone());
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for row in &rows {
            let key = (row.instance.clone(), row.algorithm);
            if seen.insert(key.clone()) {
                let b = baseline.get(&key);
                p_min.push(PminEntry {
                    instance: row.instance.clone(),
                    algorithm: row.algorithm,
                    p_min: b.map(|b| b.p),
                    t_min: b.and_then(|b| b.mean_wall_time_s),
                    expanded_at_p_min: b.and_then(|b| b.mean_expanded),
                });
            }
        }

        for row in rows.iter_mut() {
            let Some(b) = baseline.get(&(row.instance.clone(), row.algorithm)) else { continue };
            if row.p < b.p {
                continue;
            }
            if let (Some(t_min), Some(t_n)) = (b.mean_wall_time_s, row.mean_wall_time_s) {
                if let Ok((s, e)) = relative_speedup_efficiency(t_min, b.p, t_n, row.p) {
                    row.speedup = Some(s);
                    row.efficiency = Some(e);
                }
            }
            if let (Some(base), Some(n)) = (b.mean_expanded, row.mean_expanded) {
                if base > 0.0 {
                    row.search_overhead = Some(100.0 * (n / base - 1.0));
                }
            }
            if let (Some(rb), Some(rp)) = (b.expansion_rate, row.expansion_rate) {
                row.expansion_rate_ratio = expansion_rate_ratio(rp, rb).ok();
            }
        }

        let mut grouped: BTreeMap<(Algorithm, usize, usize), Vec<&SuiteRow>> = BTreeMap::new();
        for row in &rows {
            if let Some(b) = baseline.get(&(row.instance.clone(), row.algorithm)) {
                if row.p >= b.p {
                    grouped.entry((row.algorithm, b.p, row.p)).or_default().push(row);
                }
            }
        }
        let groups = grouped
            .into_iter()
            .map(|((algorithm, p_min, p), rs)| GroupRow {
                algorithm,
                p_min,
                p,
                instances: rs.len(),
                mean_efficiency: mean_opt(rs.iter().map(|r| r.efficiency)),
                mean_search_overhead: mean_opt(rs.iter().map(|r| r.search_overhead)),
                mean_load_balance: mean_opt(rs.iter().map(|r| r.load_balance)),
                mean_expansion_rate_ratio: mean_opt(rs.iter().map(|r| r.expansion_rate_ratio)),
            })
            .collect();

        SuiteReport { report_version: REPORT_VERSION, runs, p_min, rows, groups }
    }

    pub fn p_min_for(&self, instance: &str, algorithm: Algorithm) -> Option<usize> {
        self.p_min
            .iter()
            .find(|e| e.instance == instance && e.algorithm == algorithm)
            .and_then(|e| e.p_min)
    }

    pub fn row(&self, instance: &str, algorithm: Algorithm, p: usize) -> Option<&SuiteRow> {
        self.rows
            .iter()
            .find(|r| r.instance == instance && r.algorithm == algorithm && r.p == p)
    }
}

/// Search overhead of one run against another, as a convenience for tests
/// and tables.
pub fn run_search_overhead(run: &RunReport, baseline: &RunReport) -> Option<f64> {
    search_overhead(run.total_expanded(), baseline.total_expanded()).ok()
}
