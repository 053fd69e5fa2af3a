//! HDA* under a node budget, falling back to TDS when memory runs out. The
//! TDS phase starts its first iteration at the smallest f left on any open
//! list, skipping every threshold below it.

use crate::config::{Algorithm, SearchConfig};
use crate::error::ConfigError;
use crate::hda::hda_star;
use crate::metrics::{Outcome, RunReport, WorkerStats};
use crate::problem::Problem;
use crate::tds::tds;

fn merge_stats(a: &WorkerStats, b: &WorkerStats) -> WorkerStats {
    let mut f_histogram = a.f_histogram.clone();
    for (f, n) in &b.f_histogram {
        *f_histogram.entry(*f).or_insert(0) += n;
    }
    WorkerStats {
        expanded: a.expanded + b.expanded,
        generated: a.generated + b.generated,
        duplicates_received: a.duplicates_received + b.duplicates_received,
        reexpansions: a.reexpansions + b.reexpansions,
        f_histogram,
        heuristic_calls: a.heuristic_calls + b.heuristic_calls,
        messages_sent: a.messages_sent + b.messages_sent,
        messages_received: a.messages_received + b.messages_received,
        states_sent: a.states_sent + b.states_sent,
        states_received: a.states_received + b.states_received,
        peak_stored: a.peak_stored.max(b.peak_stored),
        wall_time_s: a.wall_time_s + b.wall_time_s,
        trace: None,
    }
}

pub fn hybrid(problem: &Problem, config: &SearchConfig) -> Result<RunReport, ConfigError> {
    let mut first = hda_star(problem, config)?;
    first.algorithm = Algorithm::Hybrid;
    first.phase = Some("hda".into());
    let Outcome::MemoryFailure { f_min } = first.outcome else {
        return Ok(first);
    };
    let mut second = tds(problem, config, f_min)?;
    second.algorithm = Algorithm::Hybrid;
    second.phase = Some("tds".into());

    let mut report = RunReport::new(Algorithm::Hybrid, problem.instance.clone(), config.workers);
    report.initial_h = first.initial_h;
    report.config = second.config.clone();
    report.outcome = second.outcome.clone();
    report.cost = second.cost;
    report.path = second.path.clone();
    report.thresholds = second.thresholds.clone();
    report.termination = second.termination.clone();
    report.phase = Some("hda+tds".into());
    report.wall_time_s = first.wall_time_s + second.wall_time_s;
    report.per_worker = first.per_worker.iter().zip(&second.per_worker).map(|(a, b)| merge_stats(a, b)).collect();
    report.compute_derived();
    report.phases = vec![first, second];
    Ok(report)
}
