//! A checker and interpreter for a capture-tracking extension of System F<:.
//!
//! Every type carries a capture set bounding the variables a value of that
//! type may retain. The crate provides the syntax, subcapturing, subtyping,
//! polarity-aware well-formedness, type synthesis, a small-step evaluator with
//! three optional extensions (non-local returns, regions, effect handlers) and
//! a bridge to plain System F<:.

// Type errors carry the expected and found types; they are built only on
// failure paths, so their size does not matter.
#![allow(clippy::result_large_err)]

pub mod alpha;
pub mod capture;
pub mod capture_analysis;
pub mod context;
pub mod error;
pub mod eval;
pub mod frontend;
pub mod fsub;
pub mod name;
pub mod subst;
pub mod subtyping;
pub mod syntax;
pub mod typing;
pub mod wf;

use std::fmt;

pub use capture::CaptureSet;
pub use context::{Binding, Context};
pub use error::{ErrorKind, EscapeVia, Span, TypeError};
pub use name::Name;
pub use syntax::{Pretype, Term, Type};
pub use typing::Checker;

/// Which language extensions are enabled.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, Debug)]
pub struct Extensions {
    pub returns: bool,
    pub regions: bool,
    pub effects: bool,
}

impl Extensions {
    pub const fn none() -> Self {
        Extensions {
            returns: false,
            regions: false,
            effects: false,
        }
    }

    pub const fn all() -> Self {
        Extensions {
            returns: true,
            regions: true,
            effects: true,
        }
    }

    pub fn any(&self) -> bool {
        self.returns || self.regions || self.effects
    }

    pub fn union(self, other: Extensions) -> Extensions {
        Extensions {
            returns: self.returns || other.returns,
            regions: self.regions || other.regions,
            effects: self.effects || other.effects,
        }
    }

    /// The first extension used by `self` that `enabled` lacks.
    pub fn missing_from(&self, enabled: &Extensions) -> Option<&'static str> {
        if self.returns && !enabled.returns {
            Some("returns")
        } else if self.regions && !enabled.regions {
            Some("regions")
        } else if self.effects && !enabled.effects {
            Some("effects")
        } else {
            None
        }
    }

    /// Parses a comma-separated list such as `returns,regions`.
    pub fn parse_list(s: &str) -> Result<Extensions, String> {
        let mut ext = Extensions::none();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "returns" => ext.returns = true,
                "regions" => ext.regions = true,
                "effects" => ext.effects = true,
                "all" => ext = Extensions::all(),
                other => return Err(format!("unknown extension `{other}`")),
            }
        }
        Ok(ext)
    }
}

impl fmt::Display for Extensions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = [
            (self.returns, "returns"),
            (self.regions, "regions"),
            (self.effects, "effects"),
        ]
        .into_iter()
        .filter_map(|(on, n)| on.then_some(n))
        .collect();
        f.write_str(&names.join(","))
    }
}
