use serde::Serialize;
use thiserror::Error;

use crate::syntax::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorKind {
    Unbound,
    Mismatch,
    NotAFunction,
    NotAPair,
    NotAType,
    NotInferable,
    Displacement,
    Duplicate,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("{message}")]
pub struct TypeError {
    pub kind: ErrorKind,
    pub message: String,
    /// Innermost source location of the offending subterm.
    pub span: Option<Span>,
}

impl TypeError {
    pub fn new(kind: ErrorKind, message: impl Into<String>) -> Self {
        TypeError {
            kind,
            message: message.into(),
            span: None,
        }
    }

    pub fn at(mut self, span: Span) -> Self {
        self.span.get_or_insert(span);
        self
    }
}
