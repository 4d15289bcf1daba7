//! Counterexamples and their source-file rendering.

use std::fmt::Write;

use cctrack_core::{Binding, Extensions};

use crate::gen::Sample;
use crate::soundness::Clause;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Counterexample {
    pub clause: Clause,
    pub detail: String,
    pub sample: Sample,
}

impl Counterexample {
    pub fn file_name(&self) -> String {
        format!("{}-{}.cc", self.clause, self.sample.seed)
    }

    /// A program that reproduces the failure when checked or evaluated.
    pub fn to_source(&self) -> String {
        let s = &self.sample;
        let mut out = String::new();
        writeln!(out, "-- {} violated (seed {})", self.clause, s.seed).unwrap();
        for line in self.detail.lines() {
            writeln!(out, "-- {line}").unwrap();
        }
        writeln!(out, "-- expected type: {}", s.ty).unwrap();
        let ext = s.extensions;
        if ext != Extensions::none() {
            let names: Vec<&str> = [
                (ext.returns, "returns"),
                (ext.regions, "regions"),
                (ext.effects, "effects"),
            ]
            .into_iter()
            .filter_map(|(on, n)| on.then_some(n))
            .collect();
            writeln!(out, "ext {}", names.join(", ")).unwrap();
        }
        for b in s.context.bindings() {
            match b {
                Binding::Term(x, t) => writeln!(out, "assume-term {x} : {t}").unwrap(),
                Binding::Type(x, t) => writeln!(out, "assume-type {x} <: {t}").unwrap(),
            }
        }
        writeln!(out, "main {}", s.term).unwrap();
        out
    }
}
