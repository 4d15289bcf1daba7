//! The fuzzing driver: generates samples, runs every dynamic check on them,
//! shrinks failures and merges results in seed order.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::thread;

use cctrack_core::capture_analysis::deref_count;
use cctrack_core::eval::Mutation;
use cctrack_core::{Checker, Extensions};

use crate::bridge;
use crate::gen::{generate, ContextMode, GenConfig, Sample};
use crate::laws::{self, LawReport};
use crate::report::Counterexample;
use crate::shrink::shrink;
use crate::soundness::{self, Clause, Violation};

#[derive(Clone, Debug)]
pub struct FuzzConfig {
    pub seed: u64,
    pub count: usize,
    pub max_depth: usize,
    pub extensions: Extensions,
    pub contexts: ContextMode,
    /// Step limit per sample.
    pub fuel: u64,
    /// Deliberately broken evaluator, for testing the harness itself.
    pub mutation: Option<Mutation>,
    /// Also run the algebraic law suites with `count` instances each.
    pub laws: bool,
    pub shrink: bool,
    pub threads: usize,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            seed: 0,
            count: 1000,
            max_depth: 4,
            extensions: Extensions::none(),
            contexts: ContextMode::Mixed,
            fuel: 5_000,
            mutation: None,
            laws: true,
            shrink: true,
            threads: thread::available_parallelism()
                .map_or(1, |n| n.get())
                .min(8),
        }
    }
}

/// Aggregate counters over all samples.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct Stats {
    pub samples: u64,
    pub closed: u64,
    pub rejected: u64,
    pub done: u64,
    pub stuck: u64,
    pub out_of_fuel: u64,
    pub dangling: u64,
    pub steps: u64,
    pub states: u64,
    pub preservation_checks: u64,
    pub progress_checks: u64,
    pub capture_predictions: u64,
    pub decompositions_checked: u64,
    pub beta_checks: u64,
    pub erasure_checks: u64,
    pub embedding_checks: u64,
    pub region_programs: u64,
}

impl Stats {
    fn merge(&mut self, o: &Stats) {
        self.samples += o.samples;
        self.closed += o.closed;
        self.rejected += o.rejected;
        self.done += o.done;
        self.stuck += o.stuck;
        self.out_of_fuel += o.out_of_fuel;
        self.dangling += o.dangling;
        self.steps += o.steps;
        self.states += o.states;
        self.preservation_checks += o.preservation_checks;
        self.progress_checks += o.progress_checks;
        self.capture_predictions += o.capture_predictions;
        self.decompositions_checked += o.decompositions_checked;
        self.beta_checks += o.beta_checks;
        self.erasure_checks += o.erasure_checks;
        self.embedding_checks += o.embedding_checks;
        self.region_programs += o.region_programs;
    }
}

#[derive(Clone, Debug)]
pub struct FuzzReport {
    pub stats: Stats,
    /// Typing rules used while checking samples, generation strategies
    /// (prefixed `gen:`) and `sc-var` dereference steps.
    pub coverage: BTreeMap<String, u64>,
    /// Samples that violated a property, shrunk, one per sample and clause.
    pub violations: Vec<Counterexample>,
    pub laws: Vec<LawReport>,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.laws.iter().all(LawReport::passed)
    }

    pub fn violations_of(&self, clause: Clause) -> usize {
        self.violations
            .iter()
            .filter(|c| c.clause == clause)
            .count()
    }

    pub fn coverage_of(&self, key: &str) -> u64 {
        self.coverage.get(key).copied().unwrap_or(0)
    }

    pub fn summary(&self) -> String {
        let s = &self.stats;
        let mut out = String::new();
        writeln!(
            out,
            "samples: {} ({} closed, {} candidates rejected by the checker)",
            s.samples, s.closed, s.rejected
        )
        .unwrap();
        writeln!(
            out,
            "outcomes: {} done, {} stuck, {} out of fuel, {} dangling; {} steps",
            s.done, s.stuck, s.out_of_fuel, s.dangling, s.steps
        )
        .unwrap();
        writeln!(
            out,
            "checks: {} preservation, {} progress, {} capture prediction, {} decomposition, {} beta-v residual, {} erasure, {} embedding",
            s.preservation_checks,
            s.progress_checks,
            s.capture_predictions,
            s.decompositions_checked,
            s.beta_checks,
            s.erasure_checks,
            s.embedding_checks
        )
        .unwrap();
        let cov: Vec<String> = self
            .coverage
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        writeln!(out, "coverage: {}", cov.join(" ")).unwrap();
        for l in &self.laws {
            let status = if l.passed() { "ok" } else { "FAILED" };
            writeln!(out, "law {}: {} instances, {status}", l.law, l.instances).unwrap();
            for f in &l.failures {
                writeln!(out, "  {f}").unwrap();
            }
        }
        for v in &self.violations {
            writeln!(
                out,
                "violation {} (seed {}): {}",
                v.clause, v.sample.seed, v.detail
            )
            .unwrap();
        }
        writeln!(
            out,
            "result: {}",
            if self.passed() { "pass" } else { "FAIL" }
        )
        .unwrap();
        out
    }
}

/// The seed of sample `i`.
pub fn sample_seed(base: u64, i: usize) -> u64 {
    base.wrapping_mul(0x5851_F42D_4C95_7F2D)
        .wrapping_add(i as u64)
}

struct Chunk {
    stats: Stats,
    coverage: BTreeMap<String, u64>,
    violations: Vec<(usize, Counterexample)>,
}

pub fn run(cfg: &FuzzConfig) -> FuzzReport {
    let threads = cfg.threads.max(1).min(cfg.count.max(1));
    let per = cfg.count.div_ceil(threads);
    let chunks: Vec<Chunk> = thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|w| {
                let lo = (w * per).min(cfg.count);
                let hi = ((w + 1) * per).min(cfg.count);
                scope.spawn(move || run_range(cfg, lo, hi))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });

    let mut stats = Stats::default();
    let mut coverage = BTreeMap::new();
    let mut violations = Vec::new();
    for c in chunks {
        stats.merge(&c.stats);
        for (k, v) in c.coverage {
            *coverage.entry(k).or_default() += v;
        }
        violations.extend(c.violations);
    }
    violations.sort_by_key(|(i, cx)| (*i, cx.clause));
    let laws = if cfg.laws {
        laws::check_all(cfg.seed, cfg.count)
    } else {
        Vec::new()
    };
    FuzzReport {
        stats,
        coverage,
        violations: violations.into_iter().map(|(_, c)| c).collect(),
        laws,
    }
}

fn run_range(cfg: &FuzzConfig, lo: usize, hi: usize) -> Chunk {
    let checker = Checker::new(cfg.extensions);
    let gen_cfg = GenConfig {
        max_depth: cfg.max_depth,
        extensions: cfg.extensions,
        contexts: cfg.contexts,
    };
    let mut stats = Stats::default();
    let mut coverage: BTreeMap<String, u64> = BTreeMap::new();
    let mut violations = Vec::new();
    let derefs_before = deref_count();
    for i in lo..hi {
        let seed = sample_seed(cfg.seed, i);
        let (sample, gstats) = generate(seed, &gen_cfg, &checker);
        stats.samples += 1;
        stats.rejected += gstats.rejected;
        for (k, v) in gstats.strategies {
            *coverage.entry(format!("gen:{k}")).or_default() += v;
        }
        if sample.is_closed() {
            stats.closed += 1;
        }
        if sample.term.extensions_used().regions {
            stats.region_programs += 1;
        }
        let found = check_sample(&sample, &checker, cfg, &mut stats);
        for v in found {
            let clause = v.clause;
            let (sample, detail) = if cfg.shrink {
                let small = shrink(&sample, &checker, |s| {
                    violations_of(s, &checker, cfg)
                        .iter()
                        .any(|w| w.clause == clause)
                });
                let detail = violations_of(&small, &checker, cfg)
                    .into_iter()
                    .find(|w| w.clause == clause)
                    .map_or(v.detail.clone(), |w| w.detail);
                (small, detail)
            } else {
                (sample.clone(), v.detail.clone())
            };
            violations.push((
                i,
                Counterexample {
                    clause,
                    detail,
                    sample,
                },
            ));
        }
    }
    for (rule, n) in checker.coverage().rules {
        *coverage.entry(rule.to_string()).or_default() += n;
    }
    *coverage.entry("sc-var".to_string()).or_default() += deref_count() - derefs_before;
    Chunk {
        stats,
        coverage,
        violations,
    }
}

/// Runs all per-sample checks, updating `stats`.
fn check_sample(
    sample: &Sample,
    checker: &Checker,
    cfg: &FuzzConfig,
    stats: &mut Stats,
) -> Vec<Violation> {
    let r = soundness::run(sample, checker, cfg.fuel, cfg.mutation);
    stats.steps += r.steps;
    stats.states += r.states;
    stats.preservation_checks += r.preservation_checks;
    stats.decompositions_checked += r.decompositions_checked;
    stats.beta_checks += r.beta_checks;
    stats.done += u64::from(r.done);
    stats.stuck += u64::from(r.stuck.is_some());
    stats.out_of_fuel += u64::from(r.out_of_fuel);
    stats.dangling += u64::from(r.dangling());
    stats.progress_checks += u64::from(r.progress_checked);
    stats.capture_predictions += u64::from(r.capture_predicted);
    let mut out = r.violations;
    if let Some(vs) = bridge::check(sample, checker) {
        stats.erasure_checks += 1;
        if !vs.iter().any(|v| v.clause == Clause::Erasure) {
            stats.embedding_checks += 1;
        }
        out.extend(vs);
    }
    out
}

fn violations_of(sample: &Sample, checker: &Checker, cfg: &FuzzConfig) -> Vec<Violation> {
    check_sample(sample, checker, cfg, &mut Stats::default())
}
