use serde::Serialize;

use cctrack_core::frontend::{ParseError, Printer};
use cctrack_core::{Span, TypeError};

#[derive(Serialize, Clone, Copy, PartialEq, Eq, Debug)]
pub struct JsonSpan {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub col: usize,
}

impl From<Span> for JsonSpan {
    fn from(s: Span) -> Self {
        JsonSpan {
            start: s.start,
            end: s.end,
            line: s.line,
            col: s.col,
        }
    }
}

/// A machine-readable error report.
#[derive(Serialize, Clone, PartialEq, Eq, Debug)]
pub struct Diagnostic {
    pub kind: String,
    pub span: Option<JsonSpan>,
    pub message: String,
    pub expected: Option<String>,
    pub found: Option<String>,
}

impl Diagnostic {
    pub fn from_type_error(e: &TypeError, printer: &Printer<'_>) -> Self {
        Diagnostic {
            kind: e.kind.tag().to_string(),
            span: e.span.map(JsonSpan::from),
            message: e.message.clone(),
            expected: e.expected.as_ref().map(|t| printer.ty(t)),
            found: e.found.as_ref().map(|t| printer.ty(t)),
        }
    }

    pub fn from_parse_error(e: &ParseError) -> Self {
        Diagnostic {
            kind: "parse".to_string(),
            span: Some(e.span.into()),
            message: e.message.clone(),
            expected: (!e.expected.is_empty()).then(|| e.expected.join(" or ")),
            found: None,
        }
    }

    /// Human-readable rendering with a `file:line:col` prefix.
    pub fn render(&self, file: &str) -> String {
        let mut out = match self.span {
            Some(s) => format!(
                "{file}:{}:{}: {}: {}",
                s.line, s.col, self.kind, self.message
            ),
            None => format!("{file}: {}: {}", self.kind, self.message),
        };
        if let Some(e) = &self.expected {
            out.push_str(&format!("\n  expected: {e}"));
        }
        if let Some(f) = &self.found {
            out.push_str(&format!("\n  found:    {f}"));
        }
        out
    }
}

#[derive(Serialize, Clone, PartialEq, Eq, Debug)]
pub struct TypedDef {
    pub name: String,
    #[serde(rename = "type")]
    pub ty: String,
}

/// Output of `check --json`.
#[derive(Serialize, Clone, PartialEq, Eq, Debug)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum CheckReport {
    Ok {
        defs: Vec<TypedDef>,
        main: Option<String>,
    },
    Error {
        diagnostic: Diagnostic,
    },
}
