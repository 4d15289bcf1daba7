use std::fmt;

use crate::name::Name;
use crate::syntax::Type;

/// A region of source text. Lines and columns are 1-based.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub col: usize,
}

/// Which construct a capability tried to escape from.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EscapeVia {
    ReturnAnswer,
    RegionResult,
    EffectArgument,
    EffectAnswer,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ErrorKind {
    IllScoped,
    Polarity,
    Mismatch,
    NotAFunction,
    Escape { capability: Name, via: EscapeVia },
    ExtensionDisabled,
    Depth,
}

impl ErrorKind {
    /// Stable machine-readable tag.
    pub fn tag(&self) -> &'static str {
        match self {
            ErrorKind::IllScoped => "ill-scoped",
            ErrorKind::Polarity => "polarity",
            ErrorKind::Mismatch => "mismatch",
            ErrorKind::NotAFunction => "not-a-function",
            ErrorKind::Escape { .. } => "escape",
            ErrorKind::ExtensionDisabled => "extension-disabled",
            ErrorKind::Depth => "depth",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub struct TypeError {
    pub kind: ErrorKind,
    pub message: String,
    pub expected: Option<Type>,
    pub found: Option<Type>,
    pub span: Option<Span>,
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind.tag(), self.message)?;
        if let Some(e) = &self.expected {
            write!(f, "\n  expected: {e}")?;
        }
        if let Some(t) = &self.found {
            write!(f, "\n  found:    {t}")?;
        }
        Ok(())
    }
}

impl TypeError {
    pub fn new(kind: ErrorKind, message: impl Into<String>) -> Self {
        TypeError {
            kind,
            message: message.into(),
            expected: None,
            found: None,
            span: None,
        }
    }

    pub fn ill_scoped(message: impl Into<String>) -> Self {
        TypeError::new(ErrorKind::IllScoped, message)
    }

    pub fn depth() -> Self {
        TypeError::new(ErrorKind::Depth, "recursion depth limit exceeded")
    }

    pub fn mismatch(expected: &Type, found: &Type, message: impl Into<String>) -> Self {
        TypeError {
            expected: Some(expected.clone()),
            found: Some(found.clone()),
            ..TypeError::new(ErrorKind::Mismatch, message)
        }
    }

    pub fn escape(capability: &Name, via: EscapeVia, found: Option<&Type>) -> Self {
        let what = match via {
            EscapeVia::ReturnAnswer => "the answer type of its return block",
            EscapeVia::RegionResult => "the result type of its region",
            EscapeVia::EffectArgument => "the argument type of its effect",
            EscapeVia::EffectAnswer => "the answer type of its handler",
        };
        TypeError {
            found: found.cloned(),
            ..TypeError::new(
                ErrorKind::Escape {
                    capability: capability.clone(),
                    via,
                },
                format!("capability `{capability}` escapes through {what}"),
            )
        }
    }

    pub fn with_span(mut self, span: Span) -> Self {
        self.span.get_or_insert(span);
        self
    }

    /// The capability named by an escape error.
    pub fn escaping_capability(&self) -> Option<&Name> {
        match &self.kind {
            ErrorKind::Escape { capability, .. } => Some(capability),
            _ => None,
        }
    }
}
