//! Surface language: lexing, parsing and printing of `.cht` sources.

mod lexer;
mod parser;
mod printer;

use std::fmt;

use thiserror::Error;

pub use lexer::{tokenize, tokenize_with_docs, DocComment, Token, TokenKind, KEYWORDS, SYMBOLS};
pub use parser::{parse_module, parse_term};
pub use printer::print_term;

/// Byte offsets `[start, end)` into a source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord, serde::Serialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn join(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }

    pub fn contains(self, other: Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

/// Converts a byte offset into a 1-based `(line, column)` pair.
pub fn line_col(source: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(source.len());
    let before = &source[..offset];
    let line = before.matches('\n').count() + 1;
    let col = before.rfind('\n').map_or(offset, |i| offset - i - 1) + 1;
    (line, col)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("lex error at offset {offset}: {message}")]
pub struct LexError {
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error("parse error at {span}: expected {}", expected.join(" or "))]
    Parse { span: Span, expected: Vec<String> },
    #[error("duplicate declaration `{name}` at {span}")]
    DuplicateName { span: Span, name: String },
}

impl SyntaxError {
    pub fn span(&self) -> Span {
        match self {
            SyntaxError::Lex(e) => Span::new(e.offset, e.offset + 1),
            SyntaxError::Parse { span, .. } | SyntaxError::DuplicateName { span, .. } => *span,
        }
    }
}

/// A surface term. Equality is structural and ignores spans.
#[derive(Debug, Clone)]
pub struct SurfaceTerm {
    pub kind: Box<TermKind>,
    pub span: Span,
}

impl PartialEq for SurfaceTerm {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for SurfaceTerm {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermKind {
    /// A name, optionally displaced by `@k` (global constants only).
    Var {
        name: String,
        shift: u32,
    },
    Lam {
        binder: String,
        ann: Option<SurfaceTerm>,
        body: SurfaceTerm,
    },
    App(SurfaceTerm, SurfaceTerm),
    /// `(x : A) -> B`; the binder `_` prints as a plain arrow.
    Pi {
        binder: String,
        domain: SurfaceTerm,
        codomain: SurfaceTerm,
    },
    /// `Sigma (x : A), B`; the binder `_` prints as `A * B`.
    Sigma {
        binder: String,
        first: SurfaceTerm,
        second: SurfaceTerm,
    },
    Pair(SurfaceTerm, SurfaceTerm),
    Fst(SurfaceTerm),
    Snd(SurfaceTerm),
    Id(SurfaceTerm, SurfaceTerm, SurfaceTerm),
    Refl(SurfaceTerm),
    J {
        motive: SurfaceTerm,
        base: SurfaceTerm,
        lhs: SurfaceTerm,
        rhs: SurfaceTerm,
        path: SurfaceTerm,
    },
    Universe(u32),
    Unit,
    Star,
    Let {
        binder: String,
        ty: Option<SurfaceTerm>,
        value: SurfaceTerm,
        body: SurfaceTerm,
    },
    Ann(SurfaceTerm, SurfaceTerm),
}

impl SurfaceTerm {
    pub fn new(kind: TermKind, span: Span) -> Self {
        SurfaceTerm {
            kind: Box::new(kind),
            span,
        }
    }

    /// Immediate subterms, in source order.
    pub fn children(&self) -> Vec<&SurfaceTerm> {
        match &*self.kind {
            TermKind::Var { .. } | TermKind::Universe(_) | TermKind::Unit | TermKind::Star => {
                vec![]
            }
            TermKind::Lam { ann, body, .. } => ann.iter().chain(std::iter::once(body)).collect(),
            TermKind::App(a, b)
            | TermKind::Pair(a, b)
            | TermKind::Ann(a, b)
            | TermKind::Pi {
                domain: a,
                codomain: b,
                ..
            }
            | TermKind::Sigma {
                first: a,
                second: b,
                ..
            } => vec![a, b],
            TermKind::Fst(a) | TermKind::Snd(a) | TermKind::Refl(a) => vec![a],
            TermKind::Id(a, b, c) => vec![a, b, c],
            TermKind::J {
                motive,
                base,
                lhs,
                rhs,
                path,
            } => vec![motive, base, lhs, rhs, path],
            TermKind::Let {
                ty, value, body, ..
            } => ty.iter().chain([value, body]).collect(),
        }
    }

    /// Number of nodes in the term.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DeclKind {
    Definition,
    Postulate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decl {
    pub kind: DeclKind,
    pub name: String,
    pub ty: SurfaceTerm,
    /// Present iff `kind` is `Definition`.
    pub body: Option<SurfaceTerm>,
    /// Text of the `--|` comments directly above the declaration.
    pub doc: Option<String>,
    pub span: Span,
    pub name_span: Span,
}

/// A top-level item: a declaration, or an `import` of a library file that
/// must be loaded at this point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Decl(Decl),
    Import { name: String, span: Span },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceModule {
    pub name: String,
    pub items: Vec<Item>,
}

impl SourceModule {
    pub fn decls(&self) -> impl Iterator<Item = &Decl> {
        self.items.iter().filter_map(|item| match item {
            Item::Decl(d) => Some(d),
            Item::Import { .. } => None,
        })
    }

    pub fn imports(&self) -> impl Iterator<Item = &str> {
        self.items.iter().filter_map(|item| match item {
            Item::Import { name, .. } => Some(name.as_str()),
            Item::Decl(_) => None,
        })
    }
}
