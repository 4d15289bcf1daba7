//! Dynamic checks of the soundness theorems on one generated program.

use std::fmt;

use cctrack_core::capture_analysis::{cv, subcapture};
use cctrack_core::eval::{Evaluator, Mutation, Outcome, StepResult, StuckReason};
use cctrack_core::{CaptureSet, Checker};

use crate::gen::Sample;
use crate::oracle::{beta_residual, state_decompositions};

/// Which property a violation breaks.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Clause {
    Preservation,
    Progress,
    CapturePrediction,
    Determinism,
    BetaResidual,
    Erasure,
    Embedding,
}

impl Clause {
    pub fn tag(self) -> &'static str {
        match self {
            Clause::Preservation => "preservation",
            Clause::Progress => "progress",
            Clause::CapturePrediction => "capture-prediction",
            Clause::Determinism => "determinism",
            Clause::BetaResidual => "beta-residual",
            Clause::Erasure => "erasure",
            Clause::Embedding => "embedding",
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Violation {
    pub clause: Clause,
    pub detail: String,
}

/// What happened while running one sample.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct RunReport {
    pub steps: u64,
    pub done: bool,
    pub stuck: Option<StuckReason>,
    pub out_of_fuel: bool,
    pub states: u64,
    pub preservation_checks: u64,
    pub decompositions_checked: u64,
    pub beta_checks: u64,
    pub progress_checked: bool,
    pub capture_predicted: bool,
    pub violations: Vec<Violation>,
}

impl RunReport {
    pub fn dangling(&self) -> bool {
        self.stuck == Some(StuckReason::DanglingDeref)
    }

    fn violate(&mut self, clause: Clause, detail: impl Into<String>) {
        if !self.violations.iter().any(|v| v.clause == clause) {
            self.violations.push(Violation {
                clause,
                detail: detail.into(),
            });
        }
    }
}

/// Evaluates the sample and checks, at every step, that the type is
/// preserved and that exactly one decomposition exists; at the end, that a
/// closed program did not get stuck and that a value's free variables are
/// predicted by its type.
pub fn run(sample: &Sample, checker: &Checker, fuel: u64, mutation: Option<Mutation>) -> RunReport {
    let mut report = RunReport::default();
    let ctx = &sample.context;
    let evaluator = Evaluator {
        fuel,
        mutation,
        ..Evaluator::new(sample.extensions)
    };
    let result = evaluator.run_with(&sample.term, |state| {
        report.states += 1;
        if state.step_count > 0 {
            report.preservation_checks += 1;
            if let Err(e) = checker.check(ctx, &state.term, &sample.ty) {
                report.violate(
                    Clause::Preservation,
                    format!("step {}: {e}", state.step_count),
                );
            }
        }
        if !state.is_done() {
            report.decompositions_checked += 1;
            let n = state_decompositions(state);
            let stuck_here = matches!(state.clone().step(), StepResult::Stuck(..));
            if n != 1 && !(n == 0 && stuck_here) {
                report.violate(
                    Clause::Determinism,
                    format!("step {}: {n} decompositions", state.step_count),
                );
            }
            if let Some(residual) = beta_residual(state, mutation) {
                report.beta_checks += 1;
                if residual {
                    report.violate(
                        Clause::BetaResidual,
                        format!("step {}: parameter survives beta-v", state.step_count),
                    );
                }
            }
        }
    });
    report.steps = result.steps;
    match &result.outcome {
        Outcome::Done(v) => {
            report.done = true;
            report.capture_predicted = true;
            let fv = CaptureSet::of(v.fv());
            let predicted =
                cv(&sample.ty, ctx).and_then(|c| subcapture(ctx, &fv, &c).map(|ok| (c, ok)));
            match predicted {
                Ok((_, true)) => {}
                Ok((c, false)) => report.violate(
                    Clause::CapturePrediction,
                    format!("value captures {fv}, type predicts {c}"),
                ),
                Err(e) => report.violate(Clause::CapturePrediction, e.to_string()),
            }
        }
        Outcome::Stuck(reason, _) => report.stuck = Some(*reason),
        Outcome::OutOfFuel => report.out_of_fuel = true,
    }
    if sample.is_closed() {
        report.progress_checked = true;
        if let Some(reason) = report.stuck {
            report.violate(
                Clause::Progress,
                format!("stuck ({reason}) after {} steps", report.steps),
            );
        }
    }
    report
}
