//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

mod common;

use std::collections::{BTreeMap, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use hdastar::metrics::{
    expansion_rate, expansion_rate_ratio, load_balance, r_metrics, relative_speedup_efficiency, search_overhead,
};
use hdastar::puzzle::{random_instance, random_walk_instance, TileState};
use hdastar::search::{Keyed, TranspositionTable, REPLACEMENT_FRACTION};
use hdastar::{
    astar, idastar_tt, owner, run, Algorithm, Outcome, Problem, RunReport, SearchConfig, SerialOptions, TransportKind,
    ZobristTable,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use common::{bfs_cost, eight_puzzles};

// pinned thresholds
const ORACLE_INSTANCES: usize = 50;
const SAFETY_SCENARIOS: u64 = 200;
const TDS_INSTANCES: usize = 30;
const DUPLICATE_INSTANCES: usize = 10;
const DUPLICATE_BUDGET: u64 = 200_000;
const DUPLICATE_BAND: (u64, u64) = (20_000, 80_000);
const LB_RANGE: (f64, f64) = (1.0, 1.3);
const HYBRID_INSTANCES: usize = 5;
const HYBRID_BUDGET: u64 = 2_000;
const HYBRID_BAND: (u64, u64) = (5_000, 40_000);
const ZOBRIST_STEPS: usize = 1_000_000;
const CHI_KEYS: usize = 1_000_000;
const CHI_ALPHA: f64 = 0.001;
// χ² critical values at α = 0.001 for 3 and 11 degrees of freedom
const CHI_CRITICAL: [(usize, f64); 2] = [(4, 16.266), (12, 31.264)];
const REPLACEMENT_CASES: u32 = 200;
const TIMING_REPEATS: usize = 5;
const TOL: f64 = 1e-9;

type Verdict = Result<String, String>;

fn ensure(ok: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(why())
    }
}

fn delay(seed: u64, max_delay: u64) -> TransportKind {
    TransportKind::Delay { seed, max_delay }
}

fn cfg(p: usize, t: TransportKind) -> SearchConfig {
    SearchConfig::default().with_workers(p).with_transport(t)
}

/// Conservation records gathered from every parallel run in the suite.
#[derive(Default)]
struct Conservation {
    runs: usize,
    probes: usize,
    failures: Vec<String>,
}

impl Conservation {
    fn check(&mut self, label: &str, r: &RunReport) {
        if r.algorithm.is_serial() {
            return;
        }
        for phase in &r.phases {
            self.check(label, phase);
        }
        if !r.phases.is_empty() {
            return;
        }
        self.runs += 1;
        let sent: u64 = r.per_worker.iter().map(|w| w.states_sent).sum();
        let recv: u64 = r.per_worker.iter().map(|w| w.states_received).sum();
        if sent != recv {
            self.failures.push(format!("{label}: workers sent {sent} states, received {recv}"));
        }
        if let Some(t) = &r.termination {
            self.probes += 1;
            if t.states_sent != t.states_received || t.messages_sent != t.messages_received {
                self.failures.push(format!("{label}: probe saw {t:?}"));
            }
        }
        if let Some(a) = &r.audit {
            self.probes += a.verdicts as usize;
            if a.violations > 0 {
                self.failures.push(format!("{label}: {} audited verdicts had pending work", a.violations));
            }
        }
    }
}

fn optimality(cons: &mut Conservation) -> Verdict {
    let mut runs = 0;
    let mut fallbacks = 0;
    let mut nontrivial = 0;
    for (i, s) in eight_puzzles(ORACLE_INSTANCES).into_iter().enumerate() {
        let p = Problem::manhattan(s);
        let c = bfs_cost(&s);
        let mut matrix: Vec<(String, Algorithm, SearchConfig)> = vec![
            ("astar".into(), Algorithm::Astar, SearchConfig::default()),
            ("idastar-tt".into(), Algorithm::IdastarTt, SearchConfig::default()),
        ];
        for w in [1, 2, 4, 8] {
            matrix.push((format!("hda p={w}"), Algorithm::Hda, cfg(w, TransportKind::Async)));
        }
        matrix.push(("hda-random p=4".into(), Algorithm::HdaRandom, cfg(4, TransportKind::Async).with_seed(i as u64)));
        matrix.push(("pra-sync p=4".into(), Algorithm::PraSync, cfg(4, TransportKind::Sync)));
        for w in [1, 2, 4] {
            matrix.push((format!("tds p={w}"), Algorithm::Tds, cfg(w, TransportKind::Async)));
        }
        matrix.push(("hybrid p=4".into(), Algorithm::Hybrid, cfg(4, TransportKind::Async).with_budget(Some(16))));
        for (label, algo, c2) in matrix {
            let r = run(algo, &p, &c2).map_err(|e| format!("{label}: {e}"))?;
            runs += 1;
            ensure(r.cost == Some(c), || format!("{s} {label}: cost {:?}, oracle {c}", r.cost))?;
            ensure(r.path_checks(&s), || format!("{s} {label}: path does not check"))?;
            if algo == Algorithm::Hybrid && c > 0 {
                nontrivial += 1;
                if r.phase.as_deref() == Some("hda+tds") {
                    fallbacks += 1;
                }
            }
            cons.check(&format!("c1 {s} {label}"), &r);
        }
    }
    ensure(fallbacks == nontrivial, || format!("hybrid fell back on only {fallbacks}/{nontrivial} instances"))?;
    Ok(format!("{runs} runs over {ORACLE_INSTANCES} instances equal BFS; hybrid fell back to TDS on {fallbacks}"))
}

fn serial_purity() -> Verdict {
    for s in eight_puzzles(ORACLE_INSTANCES) {
        let r = astar(&Problem::manhattan(s), SerialOptions::default());
        let d = &r.derived;
        ensure(d.r_greater == Some(0.0) && d.r_reexpansion == Some(0.0), || format!("{s}: {d:?}"))?;
    }
    Ok(format!("R_> = 0 and R_r = 0 on {ORACLE_INSTANCES} instances"))
}

fn check_owners(label: &str, r: &RunReport, p: &Problem) -> Result<u64, String> {
    let (w, h) = (p.start.width(), p.start.height());
    let mut n = 0;
    for (id, stats) in r.per_worker.iter().enumerate() {
        let trace = stats.trace.as_ref().ok_or_else(|| format!("{label}: no trace"))?;
        for e in &trace.expansions {
            let key = p.zobrist.hash(&e.state.unpack(w, h));
            ensure(owner(key, r.p) == id, || format!("{label}: state expanded at {id}, owned by {}", owner(key, r.p)))?;
            n += 1;
        }
    }
    Ok(n)
}

fn ownership(cons: &mut Conservation) -> Verdict {
    let mut checked = 0;
    let mut runs = 0;
    let mut problems: Vec<Problem> = eight_puzzles(ORACLE_INSTANCES).into_iter().map(Problem::manhattan).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    problems.extend((0..4).map(|_| Problem::manhattan(random_walk_instance(4, 4, 60, &mut rng))));
    for (i, p) in problems.iter().enumerate() {
        let seed = i as u64;
        let hw = [2, 3, 4, 8][i % 4];
        let tw = [2, 3, 4][i % 3];
        for (algo, w) in [(Algorithm::Hda, hw), (Algorithm::Tds, tw), (Algorithm::Hybrid, hw)] {
            let mut c = cfg(w, delay(seed, 4)).with_trace(true);
            if algo == Algorithm::Hybrid {
                c = c.with_budget(Some(24));
            }
            let r = run(algo, p, &c).map_err(|e| e.to_string())?;
            let label = format!("c3 {} {algo} p={w}", p.start);
            if r.phases.is_empty() {
                checked += check_owners(&label, &r, p)?;
            }
            for phase in &r.phases {
                checked += check_owners(&label, phase, p)?;
            }
            cons.check(&label, &r);
            runs += 1;
        }
    }
    Ok(format!("{checked} traced expansions in {runs} deterministic runs all at their owner"))
}

fn termination_safety(cons: &mut Conservation) -> Verdict {
    let instances = eight_puzzles(ORACLE_INSTANCES);
    let mut verdicts = 0;
    let mut failed_probes = 0;
    for i in 0..SAFETY_SCENARIOS {
        let s = instances[i as usize % instances.len()];
        let p = Problem::manhattan(s);
        let workers = 2 + (i % 7) as usize;
        let max_delay = 1 + (i / 7) % 16;
        let pack = [1, 3, 10, 100][(i % 4) as usize];
        let algo = [Algorithm::Hda, Algorithm::Hda, Algorithm::HdaRandom, Algorithm::Tds][(i / 3 % 4) as usize];
        let c = cfg(workers, delay(i, max_delay)).with_pack_size(pack).with_seed(i);
        let r = run(algo, &p, &c).map_err(|e| e.to_string())?;
        let label = format!("scenario {i} {algo} p={workers} delay<={max_delay} pack={pack}");
        ensure(r.outcome.is_solved(), || format!("{label}: {:?}", r.outcome))?;
        ensure(r.cost == Some(bfs_cost(&s)), || format!("{label}: wrong cost"))?;
        let audit = r.audit.clone().ok_or_else(|| format!("{label}: no audit"))?;
        ensure(audit.verdicts >= 1, || format!("{label}: no audited verdict"))?;
        ensure(audit.violations == 0, || format!("{label}: {audit:?}"))?;
        verdicts += audit.verdicts;
        failed_probes += r.termination.as_ref().map_or(0, |t| t.probes_initiated.saturating_sub(1));
        cons.check(&label, &r);
    }
    Ok(format!("{SAFETY_SCENARIOS} scenarios terminated, {verdicts} audited verdicts clean, {failed_probes} probes failed and the search went on"))
}

fn conservation(cons: &Conservation) -> Verdict {
    ensure(cons.failures.is_empty(), || cons.failures.join("; "))?;
    ensure(cons.runs > 0, || "no parallel runs recorded".into())?;
    Ok(format!("{} parallel runs, {} successful probes, sent = received everywhere", cons.runs, cons.probes))
}

fn tds_bound(cons: &mut Conservation) -> Verdict {
    for (i, s) in eight_puzzles(TDS_INSTANCES).into_iter().enumerate() {
        let p = Problem::manhattan(s);
        let c = bfs_cost(&s);
        let u = c - p.h(&s) + 1;
        let serial = idastar_tt(&p, SerialOptions::default());
        let t = if i % 2 == 0 { TransportKind::Async } else { delay(i as u64, 4) };
        let r = run(Algorithm::Tds, &p, &cfg(4, t)).map_err(|e| e.to_string())?;
        let th = &r.thresholds;
        ensure(r.cost == Some(c), || format!("{s}: cost {:?} vs {c}", r.cost))?;
        ensure(th.len() as u32 <= u, || format!("{s}: {} iterations > u = {u}", th.len()))?;
        ensure(th.windows(2).all(|w| w[0] < w[1]), || format!("{s}: thresholds {th:?}"))?;
        ensure(th.last() == Some(&c), || format!("{s}: final threshold {:?} vs {c}", th.last()))?;
        ensure(*th == serial.thresholds, || format!("{s}: {th:?} vs serial {:?}", serial.thresholds))?;
        cons.check(&format!("c6 {s}"), &r);
    }
    Ok(format!("{TDS_INSTANCES} instances: iterations <= u, increasing, final = c*, same as idastar-tt"))
}

/// Random-walk 15-puzzles whose serial A* expansion count falls in `band`.
fn fifteen_puzzles(seed: u64, band: (u64, u64), count: usize) -> Vec<(TileState, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    while out.len() < count {
        let s = random_walk_instance(4, 4, 200, &mut rng);
        if !seen.insert(s) {
            continue;
        }
        let a = astar(&Problem::manhattan(s), SerialOptions { node_budget: Some(400_000), ..Default::default() });
        let n = a.total_expanded();
        if a.outcome.is_solved() && band.0 <= n && n <= band.1 {
            out.push((s, a.cost.unwrap()));
        }
    }
    out
}

fn duplicate_detection(cons: &mut Conservation) -> Verdict {
    let mut lines = Vec::new();
    for (s, c) in fifteen_puzzles(77, DUPLICATE_BAND, DUPLICATE_INSTANCES) {
        let p = Problem::manhattan(s);
        let conf = cfg(4, delay(7, 4)).with_budget(Some(DUPLICATE_BUDGET)).with_seed(7);
        let h = run(Algorithm::Hda, &p, &conf).map_err(|e| e.to_string())?;
        let r = run(Algorithm::HdaRandom, &p, &conf).map_err(|e| e.to_string())?;
        ensure(h.cost == Some(c) && r.cost == Some(c), || format!("{s}: hda {:?}, random {:?}", h.outcome, r.outcome))?;
        let (he, re) = (h.total_expanded(), r.total_expanded());
        let lb = h.derived.load_balance.unwrap_or(f64::NAN);
        ensure(re > he, || format!("{s}: random {re} <= hda {he}"))?;
        ensure(LB_RANGE.0 <= lb && lb <= LB_RANGE.1, || format!("{s}: load balance {lb}"))?;
        lines.push(format!("{:.3}", re as f64 / he as f64));
        cons.check("c7 hda", &h);
        cons.check("c7 random", &r);
    }
    Ok(format!("random/hda expansion ratios [{}]", lines.join(", ")))
}

fn hybrid_handoff(cons: &mut Conservation) -> Verdict {
    let mut lines = Vec::new();
    for (i, (s, c)) in fifteen_puzzles(31, HYBRID_BAND, HYBRID_INSTANCES).into_iter().enumerate() {
        let p = Problem::manhattan(s);
        let h0 = p.h(&s);
        let conf = cfg(4, delay(i as u64, 4)).with_budget(Some(HYBRID_BUDGET));
        let r = run(Algorithm::Hybrid, &p, &conf).map_err(|e| e.to_string())?;
        ensure(r.phase.as_deref() == Some("hda+tds"), || format!("{s}: budget did not force a fallback"))?;
        let Outcome::MemoryFailure { f_min: Some(f) } = r.phases[0].outcome else {
            return Err(format!("{s}: first phase {:?}", r.phases[0].outcome));
        };
        ensure(h0 <= f && f <= c, || format!("{s}: f_min {f} outside [{h0}, {c}]"))?;
        ensure(r.cost == Some(c), || format!("{s}: cost {:?} vs {c}", r.cost))?;
        ensure(r.path_checks(&s), || format!("{s}: path does not check"))?;
        let plain = run(Algorithm::Tds, &p, &cfg(4, delay(i as u64, 4))).map_err(|e| e.to_string())?;
        let tail: Vec<u32> = plain.thresholds.iter().copied().filter(|&t| t >= f).collect();
        ensure(r.thresholds.first() == Some(&f), || format!("{s}: TDS phase starts at {:?}, f_min {f}", r.thresholds.first()))?;
        ensure(r.thresholds == tail, || format!("{s}: {:?} vs plain tail {tail:?}", r.thresholds))?;
        lines.push(format!("h0={h0} f_min={f} c*={c}"));
        cons.check("c8 hybrid", &r);
        cons.check("c8 tds", &plain);
    }
    Ok(lines.join("; "))
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOL
}

fn metric_formulas() -> Verdict {
    let so = [(100, 100, 0.0), (200, 100, 100.0), (110, 100, 10.0), (80, 100, -20.0)];
    for (par, base, want) in so {
        let got = search_overhead(par, base).map_err(|e| e.to_string())?;
        ensure(close(got, want), || format!("SO({par},{base}) = {got}"))?;
    }
    ensure(search_overhead(1, 0).is_err(), || "zero baseline accepted".into())?;
    let lb: [(&[u64], f64); 3] = [(&[50, 50], 1.0), (&[3, 1], 1.5), (&[10, 10, 10, 30], 2.0)];
    for (counts, want) in lb {
        let got = load_balance(counts).map_err(|e| e.to_string())?;
        ensure(close(got, want), || format!("LB({counts:?}) = {got}"))?;
    }
    ensure(load_balance(&[0, 0]).is_err(), || "all-zero load balance accepted".into())?;
    let se = [
        ((10.0, 12, 5.0, 24), (2.0, 1.0)),
        ((7.5, 4, 7.5, 4), (1.0, 1.0)),
        ((22.65, 12, 3.86, 144), (5.867875647668393, 0.48898963730569944)),
    ];
    for ((tm, pm, tn, n), (s, e)) in se {
        let (gs, ge) = relative_speedup_efficiency(tm, pm, tn, n).map_err(|e| e.to_string())?;
        ensure(close(gs, s) && close(ge, e), || format!("S/E({tm},{pm},{tn},{n}) = {gs}, {ge}"))?;
    }
    let hist = BTreeMap::from([(9, 5), (10, 3), (11, 2)]);
    let r = r_metrics(&hist, 1, 10).map_err(|e| e.to_string())?;
    ensure(close(r.less, 0.5) && close(r.equal, 0.3) && close(r.greater, 0.2) && close(r.reexpansion, 0.1), || format!("{r:?}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..1000 {
        let h: BTreeMap<u32, u64> = (0..rng.gen_range(1..20)).map(|_| (rng.gen_range(0..60), rng.gen_range(1..10_000))).collect();
        let c = rng.gen_range(0..60);
        let m = r_metrics(&h, 0, c).map_err(|e| e.to_string())?;
        ensure((m.less + m.equal + m.greater - 1.0).abs() <= 1e-12, || format!("R sum off for {h:?}"))?;
    }
    let rate = expansion_rate(1000, 2.0, 1).map_err(|e| e.to_string())?;
    ensure(close(rate, 500.0), || format!("rate {rate}"))?;
    let rate4 = expansion_rate(6000, 1.5, 4).map_err(|e| e.to_string())?;
    ensure(close(rate4, 1000.0), || format!("rate {rate4}"))?;
    ensure(close(expansion_rate_ratio(rate, rate).unwrap(), 1.0), || "ratio".into())?;
    ensure(close(expansion_rate_ratio(rate4, rate).unwrap(), 2.0), || "ratio".into())?;
    Ok("SO, LB, S/E, R_*, expansion rate reproduce hand values".into())
}

fn zobrist_quality() -> Verdict {
    let z = ZobristTable::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut s = TileState::goal(4, 4);
    let mut key = z.hash(&s);
    for step in 0..ZOBRIST_STEPS {
        let options: Vec<_> = s.successors().collect();
        let (t, slide) = options[rng.gen_range(0..options.len())];
        key = z.update_slide(key, &slide);
        s = t;
        ensure(key == z.hash(&s), || format!("incremental key diverged at step {step}"))?;
    }
    let keys: Vec<u64> = (0..CHI_KEYS).map(|_| z.hash(&random_instance(4, 4, &mut rng))).collect();
    let mut stats = Vec::new();
    for (p, pinned) in CHI_CRITICAL {
        let critical = ChiSquared::new((p - 1) as f64).unwrap().inverse_cdf(1.0 - CHI_ALPHA);
        ensure((critical - pinned).abs() < 1e-3, || format!("critical value {critical} vs pinned {pinned}"))?;
        let mut bins = vec![0u64; p];
        for &k in &keys {
            bins[owner(k, p)] += 1;
        }
        let expected = CHI_KEYS as f64 / p as f64;
        let chi2: f64 = bins.iter().map(|&o| (o as f64 - expected).powi(2) / expected).sum();
        ensure(chi2 < critical, || format!("p={p}: chi2 {chi2:.3} >= {critical:.3}"))?;
        stats.push(format!("p={p} chi2={chi2:.2}<{critical:.3}"));
    }
    Ok(format!("{ZOBRIST_STEPS} incremental steps exact; {}", stats.join(", ")))
}

/// Distinct 4×4 boards by Lehmer code.
fn board(i: u32) -> Keyed {
    let mut pool: Vec<u8> = (0..16).collect();
    let mut rest = i as u64;
    let mut tiles = Vec::with_capacity(16);
    for radix in (1..=16u64).rev() {
        tiles.push(pool.remove((rest % radix) as usize));
        rest /= radix;
    }
    let s = TileState::new(4, 4, &tiles).unwrap();
    Keyed::new(ZobristTable::default().hash(&s), s)
}

fn replacement_policy() -> Verdict {
    let mut runner = TestRunner::new_with_rng(
        Config { cases: REPLACEMENT_CASES, failure_persistence: None, ..Config::default() },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    let strategy = (10usize..=1000, prop::collection::vec(any::<u32>(), 0..4000), any::<u32>(), 1usize..4);
    let mut rounds = 0u64;
    runner
        .run(&strategy, |(cap, accesses, seed, cycles)| {
            let mut tt = TranspositionTable::new(Some(cap));
            let mut next = seed;
            let mut fresh = || {
                next = next.wrapping_add(2_654_435_761);
                board(next)
            };
            let mut live: Vec<Keyed> = Vec::new();
            while tt.len() < cap {
                let k = fresh();
                tt.store(k, 1, 0);
                live.push(k);
            }
            for cycle in 0..cycles {
                for a in accesses.iter().skip(cycle) {
                    let k = live[*a as usize % live.len()];
                    tt.probe(&k, 0);
                }
                let mut ranked: Vec<(u64, u64, Keyed)> = tt.iter().map(|(k, e)| (e.frequency, e.last_access, *k)).collect();
                ranked.sort_by_key(|r| (r.0, r.1));
                let evict = (ranked.len() as f64 * REPLACEMENT_FRACTION).ceil() as usize;
                let expected: HashSet<Keyed> = ranked[evict..].iter().map(|r| r.2).collect();
                let k = fresh();
                prop_assume!(!tt.contains(&k));
                tt.store(k, 1, 0);
                let survivors: HashSet<Keyed> = tt.keys().copied().filter(|x| *x != k).collect();
                prop_assert_eq!(&survivors, &expected);
                live = tt.keys().copied().collect();
                while tt.len() < cap {
                    let k = fresh();
                    if !tt.contains(&k) {
                        tt.store(k, 1, 0);
                        live.push(k);
                    }
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    rounds += REPLACEMENT_CASES as u64;
    Ok(format!("{rounds} generated tables, capacities 10-1000, survivors equal the sorted complement"))
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

fn sync_vs_async() -> Verdict {
    let (s, c) = fifteen_puzzles(77, DUPLICATE_BAND, 1)[0];
    let p = Problem::manhattan(s);
    let mut times = BTreeMap::new();
    for (algo, t) in [(Algorithm::PraSync, TransportKind::Sync), (Algorithm::Hda, TransportKind::Async)] {
        let mut v = Vec::new();
        for _ in 0..TIMING_REPEATS {
            let r = run(algo, &p, &cfg(4, t).with_seed(7)).map_err(|e| e.to_string())?;
            ensure(r.cost == Some(c), || format!("{algo}: cost {:?}", r.cost))?;
            v.push(r.wall_time_s);
        }
        times.insert(algo, median(v));
    }
    let (pra, hda) = (times[&Algorithm::PraSync], times[&Algorithm::Hda]);
    ensure(pra >= hda, || format!("pra-sync median {pra:.4}s < hda median {hda:.4}s"))?;
    Ok(format!("median wall time pra-sync {pra:.4}s >= hda {hda:.4}s on {s}"))
}

fn main() -> ExitCode {
    let mut cons = Conservation::default();
    let mut failed = 0;
    let mut report = |n: usize, name: &str, f: &mut dyn FnMut() -> Verdict| {
        let clock = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(|| f())).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = clock.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("criterion {n:>2} PASS  {name} ({secs:.1}s): {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {name} ({secs:.1}s): {why}");
            }
        }
    };
    report(1, "optimality agreement", &mut || optimality(&mut cons));
    report(2, "serial purity", &mut serial_purity);
    report(3, "ownership", &mut || ownership(&mut cons));
    report(4, "termination safety", &mut || termination_safety(&mut cons));
    report(6, "tds iteration bound", &mut || tds_bound(&mut cons));
    report(7, "duplicate detection value", &mut || duplicate_detection(&mut cons));
    report(8, "hybrid handoff", &mut || hybrid_handoff(&mut cons));
    report(5, "conservation", &mut || conservation(&cons));
    report(9, "metric formulas", &mut metric_formulas);
    report(10, "zobrist quality", &mut zobrist_quality);
    report(11, "replacement policy", &mut replacement_policy);
    report(12, "sync vs async direction", &mut sync_vs_async);
    if failed == 0 {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
