//! Surface syntax: lexing, parsing, printing and program elaboration.

pub mod lexer;
pub mod parser;
pub mod printer;
pub mod program;

use std::fmt;

use crate::error::Span;

pub use parser::{parse_program, parse_term, parse_type};
pub use printer::Printer;
pub use program::{Aliases, Decl, DeclKind, Program};

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub struct ParseError {
    pub message: String,
    pub expected: Vec<String>,
    pub span: Span,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.span.line, self.span.col, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(" or "))?;
        }
        Ok(())
    }
}
