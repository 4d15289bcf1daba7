//! Behaviour of the fuzzing driver: reproducibility, coverage, and that
//! deliberately broken evaluators are caught and shrunk.

use cctrack_core::eval::Mutation;
use cctrack_core::frontend::parse_program;
use cctrack_core::{Checker, Extensions};
use cctrack_harness::fuzz::{run, sample_seed};
use cctrack_harness::{generate, Clause, ContextMode, FuzzConfig, GenConfig};

fn config(count: usize) -> FuzzConfig {
    FuzzConfig {
        seed: 7,
        count,
        laws: false,
        ..FuzzConfig::default()
    }
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let one = run(&FuzzConfig {
        threads: 1,
        ..config(300)
    });
    let four = run(&FuzzConfig {
        threads: 4,
        ..config(300)
    });
    assert_eq!(one.stats, four.stats);
    assert_eq!(one.coverage, four.coverage);
    assert!(one.passed(), "{}", one.summary());
}

#[test]
fn sample_seeds_are_distinct() {
    let seeds: std::collections::BTreeSet<u64> = (0..1000).map(|i| sample_seed(42, i)).collect();
    assert_eq!(seeds.len(), 1000);
}

#[test]
fn closed_samples_have_empty_contexts() {
    let checker = Checker::core();
    let cfg = GenConfig {
        contexts: ContextMode::Closed,
        ..GenConfig::default()
    };
    for seed in 0..200 {
        let (sample, _) = generate(seed, &cfg, &checker);
        assert!(sample.is_closed());
        assert_eq!(
            checker.synth(&sample.context, &sample.term).unwrap(),
            sample.ty
        );
    }
}

#[test]
fn coverage_reaches_every_core_rule() {
    let report = run(&config(1000));
    for key in ["var", "abs", "tabs", "app", "tapp", "sub", "sc-var"] {
        assert!(report.coverage_of(key) > 0, "{key} never exercised");
    }
    assert!(report.coverage.keys().any(|k| k.starts_with("gen:")));
    assert!(report.stats.preservation_checks > 0);
    assert!(report.stats.capture_predictions > 0);
    assert!(report.stats.erasure_checks > 0);
}

#[test]
fn extension_constructs_are_generated() {
    let report = run(&FuzzConfig {
        extensions: Extensions::all(),
        ..config(500)
    });
    assert!(report.passed(), "{}", report.summary());
    assert!(report.stats.region_programs > 0);
    assert_eq!(report.stats.dangling, 0);
    for key in [
        "handle-return",
        "return",
        "region",
        "new",
        "deref",
        "handle-effect",
        "do",
    ] {
        assert!(report.coverage_of(key) > 0, "{key} never exercised");
    }
}

#[test]
fn skipped_capture_substitution_is_caught_and_shrunk() {
    let report = run(&FuzzConfig {
        mutation: Some(Mutation::SkipCaptureSubst),
        ..config(400)
    });
    assert!(!report.passed());
    let cx = report
        .violations
        .iter()
        .find(|c| c.clause == Clause::BetaResidual)
        .expect("a beta residual violation");
    // The counterexample is a runnable program.
    let program =
        parse_program(&cx.to_source(), Extensions::none()).expect("counterexample parses");
    assert!(program.elaborate().main.is_some());
    assert!(
        cx.sample.term.size() <= 40,
        "not shrunk: {}",
        cx.sample.term
    );
}

#[test]
fn skipped_type_substitution_is_caught() {
    let report = run(&FuzzConfig {
        mutation: Some(Mutation::SkipTypeSubst),
        ..config(1000)
    });
    assert!(
        report.violations_of(Clause::Preservation) > 0,
        "{}",
        report.summary()
    );
}
