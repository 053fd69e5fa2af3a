use std::collections::HashMap;
use std::fs;
use std::io::{self, Write};
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use hdastar::puzzle::Heuristic;
use hdastar::{Algorithm, Outcome, RunReport, SearchConfig, SuiteReport, TileState, TransportKind, DEFAULT_PACK_SIZE};
use serde::Deserialize;

use crate::args::{Format, SuiteArgs};
use crate::load::{self, HeuristicSpec};
use crate::{default_transport, EXIT_CONFIG, EXIT_SOLVED};

fn one() -> Vec<usize> {
    vec![1]
}

fn zero() -> Vec<u64> {
    vec![0]
}

fn default_packs() -> Vec<usize> {
    vec![DEFAULT_PACK_SIZE]
}

fn manhattan() -> String {
    "manhattan".into()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    /// Instance files, relative to the config file.
    pub instances: Vec<PathBuf>,
    pub algorithms: Vec<String>,
    #[serde(default = "one")]
    pub workers: Vec<usize>,
    #[serde(default = "zero")]
    pub seeds: Vec<u64>,
    #[serde(default = "default_packs")]
    pub pack_sizes: Vec<usize>,
    #[serde(default = "manhattan")]
    pub heuristic: String,
    /// Total budget, split evenly.
    pub node_budget: Option<u64>,
    /// Budget per worker; the total grows with p.
    pub node_budget_per_worker: Option<u64>,
    /// async, sync, delay (seeded by the run seed) or delay:<seed>
    pub transport: Option<String>,
    pub zobrist_seed: Option<u64>,
    pub pdb_cache: Option<PathBuf>,
    pub output: Option<PathBuf>,
}

struct Plan {
    instances: Vec<(String, TileState)>,
    algorithms: Vec<Algorithm>,
    heuristic: HeuristicSpec,
}

fn plan(cfg: &SuiteConfig, base: &Path) -> Result<Plan, String> {
    if cfg.node_budget.is_some() && cfg.node_budget_per_worker.is_some() {
        return Err("set node_budget or node_budget_per_worker, not both".into());
    }
    if cfg.workers.iter().any(|&p| p == 0) || cfg.pack_sizes.iter().any(|&n| n == 0) {
        return Err("workers and pack sizes must be at least 1".into());
    }
    let algorithms = cfg.algorithms.iter().map(|a| a.parse::<Algorithm>().map_err(|e| e.to_string())).collect::<Result<Vec<_>, _>>()?;
    let heuristic: HeuristicSpec = cfg.heuristic.parse().map_err(|e: hdastar::PuzzleError| e.to_string())?;
    if let Some(t) = &cfg.transport {
        if t != "delay" {
            t.parse::<TransportKind>().map_err(|e| e.to_string())?;
        }
    }
    let mut instances = Vec::new();
    for rel in &cfg.instances {
        let path = base.join(rel);
        let states = load::read_all(&path).map_err(|e| e.to_string())?;
        let many = states.len() > 1;
        for (i, s) in states.into_iter().enumerate() {
            let name = if many { format!("{}#{i}", rel.display()) } else { rel.display().to_string() };
            instances.push((name, s));
        }
    }
    if instances.is_empty() || algorithms.is_empty() {
        return Err("suite needs at least one instance and one algorithm".into());
    }
    Ok(Plan { instances, algorithms, heuristic })
}

fn transport(cfg: &SuiteConfig, algorithm: Algorithm, seed: u64) -> TransportKind {
    match cfg.transport.as_deref() {
        None => default_transport(algorithm),
        Some("delay") => format!("delay:{seed}").parse().expect("delay transport"),
        Some(t) => t.parse().expect("validated transport"),
    }
}

fn aborted(algorithm: Algorithm, instance: &str, p: usize, reason: String) -> RunReport {
    let mut r = RunReport::new(algorithm, instance, p);
    r.outcome = Outcome::Aborted { reason };
    r
}

fn run_one(problem: &hdastar::Problem, algorithm: Algorithm, config: &SearchConfig) -> RunReport {
    let p = config.workers;
    match panic::catch_unwind(AssertUnwindSafe(|| hdastar::run(algorithm, problem, config))) {
        Ok(Ok(r)) => r,
        Ok(Err(e)) => aborted(algorithm, &problem.instance, p, e.to_string()),
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            aborted(algorithm, &problem.instance, p, msg)
        }
    }
}

pub fn run_suite(cfg: &SuiteConfig, base: &Path) -> Result<SuiteReport, String> {
    let plan = plan(cfg, base)?;
    let mut heuristics: HashMap<(usize, usize), Arc<dyn Heuristic>> = HashMap::new();
    let mut runs = Vec::new();
    let label_pack = cfg.pack_sizes.len() > 1;
    let cache = cfg.pdb_cache.as_ref().map(|d| base.join(d));

    for (name, start) in &plan.instances {
        let dims = (start.width(), start.height());
        let h = match heuristics.get(&dims) {
            Some(h) => h.clone(),
            None => {
                let h = load::heuristic_for(&plan.heuristic, dims.0, dims.1, cache.as_deref()).map_err(|e| e.to_string())?;
                heuristics.insert(dims, h.clone());
                h
            }
        };
        for &pack in &cfg.pack_sizes {
            let label = if label_pack { format!("{name} pack={pack}") } else { name.clone() };
            let problem = load::problem(*start, h.clone(), cfg.zobrist_seed, label);
            for &algorithm in &plan.algorithms {
                let workers: &[usize] = if algorithm.is_serial() { &[1] } else { &cfg.workers };
                for &p in workers {
                    for &seed in &cfg.seeds {
                        let budget = cfg.node_budget.or(cfg.node_budget_per_worker.map(|b| b * p as u64));
                        let config = SearchConfig::default()
                            .with_workers(p)
                            .with_pack_size(pack)
                            .with_budget(budget)
                            .with_seed(seed)
                            .with_transport(transport(cfg, algorithm, seed));
                        let r = run_one(&problem, algorithm, &config);
                        eprintln!(
                            "{} {} p={} seed={} -> {} ({:.3}s)",
                            r.instance,
                            algorithm,
                            p,
                            seed,
                            r.outcome.label(),
                            r.wall_time_s
                        );
                        runs.push(r);
                    }
                }
            }
        }
    }
    Ok(SuiteReport::from_runs(runs))
}

pub fn run(a: SuiteArgs) -> u8 {
    let text = match fs::read_to_string(&a.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("hdastar: {}: {e}", a.config.display());
            return EXIT_CONFIG;
        }
    };
    let cfg: SuiteConfig = match toml::from_str(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("hdastar: {}: {e}", a.config.display());
            return EXIT_CONFIG;
        }
    };
    let base = a.config.parent().map(Path::to_path_buf).unwrap_or_default();
    let report = match run_suite(&cfg, &base) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("hdastar: {e}");
            return EXIT_CONFIG;
        }
    };
    let output = a.output.clone().or_else(|| cfg.output.as_ref().map(|o| base.join(o)));
    let written = match output {
        Some(path) => fs::File::create(&path).and_then(|f| write(io::BufWriter::new(f), &report, a.format)),
        None => write(io::stdout().lock(), &report, a.format),
    };
    match written {
        Ok(()) => EXIT_SOLVED,
        Err(e) => {
            eprintln!("hdastar: {e}");
            EXIT_CONFIG
        }
    }
}

fn write<W: Write>(mut out: W, report: &SuiteReport, format: Format) -> io::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, report)?;
            writeln!(out)?;
            out.flush()
        }
        Format::Csv => crate::output::write_csv(out, &report.runs).map_err(io::Error::other),
    }
}
