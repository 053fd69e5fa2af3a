use std::io::Write;

use hdastar::{RunReport, WorkerStats};

const WORKER_FIELDS: [&str; 11] = [
    "expanded",
    "generated",
    "duplicates_received",
    "reexpansions",
    "heuristic_calls",
    "messages_sent",
    "messages_received",
    "states_sent",
    "states_received",
    "peak_stored",
    "wall_time_s",
];

const RUN_FIELDS: [&str; 27] = [
    "report_version",
    "algorithm",
    "instance",
    "p",
    "outcome",
    "f_min",
    "cost",
    "path",
    "initial_h",
    "wall_time_s",
    "phase",
    "thresholds",
    "total_expanded",
    "total_generated",
    "total_reexpansions",
    "load_balance",
    "r_less",
    "r_equal",
    "r_greater",
    "r_reexpansion",
    "expansion_rate",
    "pack_size",
    "seed",
    "zobrist_seed",
    "node_budget",
    "transport",
    "heuristic",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

pub fn header(max_p: usize) -> Vec<String> {
    let mut h: Vec<String> = RUN_FIELDS.iter().map(|s| s.to_string()).collect();
    for i in 0..max_p {
        h.extend(WORKER_FIELDS.iter().map(|f| format!("{f}_{i}")));
    }
    h
}

fn worker_cells(w: &WorkerStats) -> [String; 11] {
    [
        w.expanded.to_string(),
        w.generated.to_string(),
        w.duplicates_received.to_string(),
        w.reexpansions.to_string(),
        w.heuristic_calls.to_string(),
        w.messages_sent.to_string(),
        w.messages_received.to_string(),
        w.states_sent.to_string(),
        w.states_received.to_string(),
        w.peak_stored.to_string(),
        w.wall_time_s.to_string(),
    ]
}

pub fn row(r: &RunReport, max_p: usize) -> Vec<String> {
    let d = &r.derived;
    let thresholds: Vec<String> = r.thresholds.iter().map(|t| t.to_string()).collect();
    let mut row = vec![
        r.report_version.to_string(),
        r.algorithm.to_string(),
        r.instance.clone(),
        r.p.to_string(),
        r.outcome.label().to_string(),
        opt(match r.outcome {
            hdastar::Outcome::MemoryFailure { f_min } => f_min,
            _ => None,
        }),
        opt(r.cost),
        r.path.clone().unwrap_or_default(),
        r.initial_h.to_string(),
        r.wall_time_s.to_string(),
        r.phase.clone().unwrap_or_default(),
        thresholds.join(" "),
        d.total_expanded.to_string(),
        d.total_generated.to_string(),
        d.total_reexpansions.to_string(),
        opt(d.load_balance),
        opt(d.r_less),
        opt(d.r_equal),
        opt(d.r_greater),
        opt(d.r_reexpansion),
        opt(d.expansion_rate),
        r.config.pack_size.to_string(),
        r.config.seed.to_string(),
        r.config.zobrist_seed.to_string(),
        opt(r.config.node_budget),
        r.config.transport.clone(),
        r.config.heuristic.clone(),
    ];
    for i in 0..max_p {
        match r.per_worker.get(i) {
            Some(w) => row.extend(worker_cells(w)),
            None => row.extend(std::iter::repeat(String::new()).take(WORKER_FIELDS.len())),
        }
    }
    row
}

/// One header and one row per run; worker columns pad to the widest run.
pub fn write_csv<W: Write>(out: W, runs: &[RunReport]) -> csv::Result<()> {
    let max_p = runs.iter().map(|r| r.per_worker.len()).max().unwrap_or(0);
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header(max_p))?;
    for r in runs {
        w.write_record(row(r, max_p))?;
    }
    w.flush()?;
    Ok(())
}
