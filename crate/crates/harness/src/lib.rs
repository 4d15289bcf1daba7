//! Property-based checks of the calculus' metatheory: well-typed program
//! generation, per-step preservation, progress, capture prediction,
//! evaluator determinism, the F<: bridge lemmas and algebraic laws.

#![allow(clippy::result_large_err)]

pub mod bridge;
pub mod fuzz;
pub mod gen;
pub mod laws;
pub mod oracle;
pub mod report;
pub mod shrink;
pub mod soundness;

pub use fuzz::{FuzzConfig, FuzzReport};
pub use gen::{generate, ContextMode, GenConfig, Sample};
pub use report::Counterexample;
pub use soundness::Clause;
