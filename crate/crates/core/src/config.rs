use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;

pub const DEFAULT_PACK_SIZE: usize = 100;
pub const DEFAULT_MAX_DELAY: u64 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Astar,
    IdastarTt,
    Hda,
    HdaRandom,
    PraSync,
    Tds,
    Hybrid,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::Astar,
        Algorithm::IdastarTt,
        Algorithm::Hda,
        Algorithm::HdaRandom,
        Algorithm::PraSync,
        Algorithm::Tds,
        Algorithm::Hybrid,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Astar => "astar",
            Algorithm::IdastarTt => "idastar-tt",
            Algorithm::Hda => "hda",
            Algorithm::HdaRandom => "hda-random",
            Algorithm::PraSync => "pra-sync",
            Algorithm::Tds => "tds",
            Algorithm::Hybrid => "hybrid",
        }
    }

    pub fn is_serial(self) -> bool {
        matches!(self, Algorithm::Astar | Algorithm::IdastarTt)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| ConfigError::Invalid(format!("unknown algorithm {s:?}")))
    }
}

/// Message substrate for the parallel algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TransportKind {
    /// Threads with non-blocking sends and polled receives.
    Async,
    /// Threads with rendezvous sends for work messages.
    Sync,
    /// Single-threaded round-robin simulation; each message is delayed by a
    /// seeded number of scheduler rounds.
    Delay { seed: u64, max_delay: u64 },
}

impl fmt::Display for TransportKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransportKind::Async => f.write_str("async"),
            TransportKind::Sync => f.write_str("sync"),
            TransportKind::Delay { seed, max_delay } if *max_delay == DEFAULT_MAX_DELAY => write!(f, "delay:{seed}"),
            TransportKind::Delay { seed, max_delay } => write!(f, "delay:{seed}:{max_delay}"),
        }
    }
}

impl FromStr for TransportKind {
    type Err = ConfigError;

    /// `async`, `sync`, `delay:<seed>` or `delay:<seed>:<max-delay>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ConfigError::Invalid(format!("unknown transport {s:?}"));
        match s {
            "async" => Ok(TransportKind::Async),
            "sync" => Ok(TransportKind::Sync),
            _ => {
                let rest = s.strip_prefix("delay:").ok_or_else(bad)?;
                let mut parts = rest.split(':');
                let seed = parts.next().and_then(|p| p.parse().ok()).ok_or_else(bad)?;
                let max_delay = match parts.next() {
                    Some(p) => p.parse().map_err(|_| bad())?,
                    None => DEFAULT_MAX_DELAY,
                };
                if parts.next().is_some() || max_delay == 0 {
                    return Err(bad());
                }
                Ok(TransportKind::Delay { seed, max_delay })
            }
        }
    }
}

/// Knobs shared by every algorithm. Serial algorithms ignore the parallel
/// ones.
#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub workers: usize,
    pub pack_size: usize,
    /// Total stored-state budget, split evenly across workers.
    pub node_budget: Option<u64>,
    /// Seed for random work distribution.
    pub seed: u64,
    pub transport: TransportKind,
    /// Keep per-worker expansion and table-insert traces.
    pub trace: bool,
    /// TDS per-worker stack limit; exceeding it aborts the run.
    pub stack_limit: usize,
    /// Round limit for the simulated transport.
    pub max_sim_rounds: u64,
    pub sync_watchdog: Duration,
    /// How long an idle thread blocks waiting for mail before re-checking
    /// the run state.
    pub idle_wait: Duration,
    /// A busy thread yields its core after this many steps.
    pub yield_every: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            workers: 1,
            pack_size: DEFAULT_PACK_SIZE,
            node_budget: None,
            seed: 0,
            transport: TransportKind::Async,
            trace: false,
            stack_limit: 50_000_000,
            max_sim_rounds: 200_000_000,
            sync_watchdog: Duration::from_secs(60),
            idle_wait: Duration::from_micros(500),
            yield_every: 16,
        }
    }
}

impl SearchConfig {
    pub fn with_workers(mut self, p: usize) -> Self {
        self.workers = p;
        self
    }

    pub fn with_transport(mut self, t: TransportKind) -> Self {
        self.transport = t;
        self
    }

    pub fn with_budget(mut self, budget: Option<u64>) -> Self {
        self.node_budget = budget;
        self
    }

    pub fn with_pack_size(mut self, n: usize) -> Self {
        self.pack_size = n;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_trace(mut self, on: bool) -> Self {
        self.trace = on;
        self
    }

    /// Per-worker share of the node budget (at least 1).
    pub fn per_worker_budget(&self) -> Option<u64> {
        self.node_budget.map(|b| (b / self.workers.max(1) as u64).max(1))
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.workers == 0 {
            return Err(ConfigError::NoWorkers);
        }
        if self.pack_size == 0 {
            return Err(ConfigError::ZeroPackSize);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("bfs".parse::<Algorithm>().is_err());
    }

    #[test]
    fn transport_parsing() {
        assert_eq!("async".parse::<TransportKind>().unwrap(), TransportKind::Async);
        assert_eq!("sync".parse::<TransportKind>().unwrap(), TransportKind::Sync);
        assert_eq!(
            "delay:7".parse::<TransportKind>().unwrap(),
            TransportKind::Delay { seed: 7, max_delay: DEFAULT_MAX_DELAY }
        );
        assert_eq!("delay:7:9".parse::<TransportKind>().unwrap(), TransportKind::Delay { seed: 7, max_delay: 9 });
        for bad in ["delay", "delay:x", "delay:1:0", "tcp"] {
            assert!(bad.parse::<TransportKind>().is_err(), "{bad}");
        }
        assert_eq!(TransportKind::Delay { seed: 3, max_delay: DEFAULT_MAX_DELAY }.to_string(), "delay:3");
    }

    #[test]
    fn budget_split() {
        let c = SearchConfig::default().with_workers(4).with_budget(Some(10));
        assert_eq!(c.per_worker_budget(), Some(2));
        assert_eq!(SearchConfig::default().with_workers(8).with_budget(Some(3)).per_worker_budget(), Some(1));
    }
}
