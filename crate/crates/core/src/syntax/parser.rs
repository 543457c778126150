use std::collections::HashMap;

use super::lexer::{tokenize_with_docs, DocComment, Token, TokenKind};
use super::{Decl, DeclKind, Item, SourceModule, Span, SurfaceTerm, SyntaxError, TermKind};

type PResult<T> = Result<T, SyntaxError>;

/// Parses a whole module. Declaration names must be pairwise distinct.
pub fn parse_module(name: &str, text: &str) -> PResult<SourceModule> {
    let (tokens, docs) = tokenize_with_docs(text)?;
    let mut p = Parser::new(&tokens, text.len());
    let mut items = Vec::new();
    let mut seen: HashMap<String, Span> = HashMap::new();
    let mut prev_end = 0;

    while !p.at_end() {
        let item = p.item(&docs, prev_end)?;
        if let Item::Decl(d) = &item {
            if seen.insert(d.name.clone(), d.name_span).is_some() {
                return Err(SyntaxError::DuplicateName {
                    span: d.name_span,
                    name: d.name.clone(),
                });
            }
        }
        prev_end = match &item {
            Item::Decl(d) => d.span.end,
            Item::Import { span, .. } => span.end,
        };
        items.push(item);
    }

    Ok(SourceModule {
        name: name.to_owned(),
        items,
    })
}

/// Parses a single term spanning the whole input.
pub fn parse_term(text: &str) -> PResult<SurfaceTerm> {
    let (tokens, _) = tokenize_with_docs(text)?;
    let mut p = Parser::new(&tokens, text.len());
    let t = p.term()?;
    if !p.at_end() {
        return Err(p.error(&["end of input"]));
    }
    Ok(t)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    eof: usize,
}

impl<'a> Parser<'a> {
    fn new(tokens: &'a [Token], eof: usize) -> Self {
        Parser {
            tokens,
            pos: 0,
            eof,
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn peek_at(&self, n: usize) -> Option<&'a Token> {
        self.tokens.get(self.pos + n)
    }

    fn bump(&mut self) -> &'a Token {
        let t = &self.tokens[self.pos];
        self.pos += 1;
        t
    }

    fn here(&self) -> Span {
        match self.peek() {
            Some(t) => t.span,
            None => Span::new(self.eof, self.eof),
        }
    }

    fn prev_end(&self) -> usize {
        if self.pos == 0 {
            0
        } else {
            self.tokens[self.pos - 1].span.end
        }
    }

    fn error(&self, expected: &[&str]) -> SyntaxError {
        SyntaxError::Parse {
            span: self.here(),
            expected: expected.iter().map(|s| (*s).to_owned()).collect(),
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        self.peek().is_some_and(|t| t.is_keyword(kw))
    }

    fn is_symbol(&self, sym: &str) -> bool {
        self.peek().is_some_and(|t| t.is_symbol(sym))
    }

    /// Is the next token pair the joint operator `ab` (e.g. `->`)?
    fn is_op(&self, a: &str, b: &str) -> bool {
        match (self.peek(), self.peek_at(1)) {
            (Some(x), Some(y)) => x.is_symbol(a) && y.is_symbol(b) && x.span.end == y.span.start,
            _ => false,
        }
    }

    fn eat_arrow(&mut self) -> bool {
        if self.is_symbol("→") {
            self.pos += 1;
            true
        } else if self.is_op("-", ">") {
            self.pos += 2;
            true
        } else {
            false
        }
    }

    fn expect_op(&mut self, a: &str, b: &str) -> PResult<()> {
        if self.is_op(a, b) {
            self.pos += 2;
            Ok(())
        } else {
            Err(self.error(&[&format!("`{a}{b}`")]))
        }
    }

    fn expect_symbol(&mut self, sym: &str) -> PResult<&'a Token> {
        if self.is_symbol(sym) && !self.is_op(":", "=") {
            Ok(self.bump())
        } else {
            Err(self.error(&[&format!("`{sym}`")]))
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> PResult<&'a Token> {
        if self.is_keyword(kw) {
            Ok(self.bump())
        } else {
            Err(self.error(&[&format!("`{kw}`")]))
        }
    }

    fn ident(&mut self) -> PResult<(String, Span)> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Ident => {
                self.pos += 1;
                Ok((normalize_ident(&t.text), t.span))
            }
            _ => Err(self.error(&["identifier"])),
        }
    }

    fn number(&mut self) -> PResult<u32> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Universe => match t.text.parse() {
                Ok(n) => {
                    self.pos += 1;
                    Ok(n)
                }
                Err(_) => Err(self.error(&["universe level"])),
            },
            _ => Err(self.error(&["universe level"])),
        }
    }

    fn item(&mut self, docs: &[DocComment], prev_end: usize) -> PResult<Item> {
        let start = self.here();
        if self.is_keyword("import") {
            self.bump();
            let (name, span) = self.ident()?;
            return Ok(Item::Import {
                name,
                span: start.join(span),
            });
        }

        let kind = if self.is_keyword("def") {
            DeclKind::Definition
        } else if self.is_keyword("axiom") {
            DeclKind::Postulate
        } else {
            return Err(self.error(&["`def`", "`axiom`", "`import`"]));
        };
        self.bump();
        let (name, name_span) = self.ident()?;
        self.expect_symbol(":")?;
        let ty = self.term()?;
        let body = if kind == DeclKind::Definition {
            self.expect_op(":", "=")?;
            Some(self.term()?)
        } else {
            None
        };
        let span = Span::new(start.start, self.prev_end());
        let doc_lines: Vec<&str> = docs
            .iter()
            .filter(|d| d.span.start >= prev_end && d.span.end <= start.start)
            .map(|d| d.text.as_str())
            .collect();
        let doc = (!doc_lines.is_empty()).then(|| doc_lines.join("\n"));
        Ok(Item::Decl(Decl {
            kind,
            name,
            ty,
            body,
            doc,
            span,
            name_span,
        }))
    }

    pub fn term(&mut self) -> PResult<SurfaceTerm> {
        let start = self.here();
        if self.is_keyword("fun") || self.is_symbol("λ") {
            self.bump();
            let binders = self.lam_binders()?;
            self.expect_op("=", ">")?;
            let body = self.term()?;
            return Ok(wrap_lams(binders, body, start));
        }
        if self.is_keyword("let") {
            self.bump();
            let (binder, _) = self.ident()?;
            let ty = if self.is_symbol(":") && !self.is_op(":", "=") {
                self.bump();
                Some(self.term()?)
            } else {
                None
            };
            self.expect_op(":", "=")?;
            let value = self.term()?;
            self.expect_keyword("in")?;
            let body = self.term()?;
            let span = start.join(body.span);
            return Ok(SurfaceTerm::new(
                TermKind::Let {
                    binder,
                    ty,
                    value,
                    body,
                },
                span,
            ));
        }
        if self.is_keyword("Sigma") || self.is_symbol("Σ") {
            self.bump();
            let mut groups = Vec::new();
            loop {
                groups.push(self.binder_group()?);
                if !self.is_symbol("(") {
                    break;
                }
            }
            self.expect_symbol(",")?;
            let body = self.term()?;
            return Ok(wrap_binders(
                groups,
                body,
                start,
                |binder, first, second| TermKind::Sigma {
                    binder,
                    first,
                    second,
                },
            ));
        }
        self.arrow()
    }

    fn lam_binders(&mut self) -> PResult<Vec<(String, Option<SurfaceTerm>)>> {
        let mut out = Vec::new();
        loop {
            if self.is_symbol("(") {
                let (names, ty) = self.binder_group()?;
                for n in names {
                    out.push((n, Some(ty.clone())));
                }
            } else if self.peek().is_some_and(|t| t.kind == TokenKind::Ident) {
                out.push((self.ident()?.0, None));
            } else {
                break;
            }
        }
        if out.is_empty() {
            return Err(self.error(&["binder"]));
        }
        Ok(out)
    }

    /// `( x y : A )`
    fn binder_group(&mut self) -> PResult<(Vec<String>, SurfaceTerm)> {
        self.expect_symbol("(")?;
        let mut names = vec![self.ident()?.0];
        while self.peek().is_some_and(|t| t.kind == TokenKind::Ident) {
            names.push(self.ident()?.0);
        }
        self.expect_symbol(":")?;
        let ty = self.term()?;
        self.expect_symbol(")")?;
        Ok((names, ty))
    }

    fn arrow(&mut self) -> PResult<SurfaceTerm> {
        let start = self.here();
        // dependent telescope `(x : A) (y : B) -> C`
        if self.is_symbol("(") {
            let save = self.pos;
            if let Ok(groups) = self.pi_telescope() {
                if self.eat_arrow() {
                    let body = self.term()?;
                    return Ok(wrap_binders(
                        groups,
                        body,
                        start,
                        |binder, domain, codomain| TermKind::Pi {
                            binder,
                            domain,
                            codomain,
                        },
                    ));
                }
            }
            self.pos = save;
        }

        let lhs = self.prod()?;
        if self.eat_arrow() {
            let rhs = self.term()?;
            let span = lhs.span.join(rhs.span);
            return Ok(SurfaceTerm::new(
                TermKind::Pi {
                    binder: "_".to_owned(),
                    domain: lhs,
                    codomain: rhs,
                },
                span,
            ));
        }
        Ok(lhs)
    }

    fn pi_telescope(&mut self) -> PResult<Vec<(Vec<String>, SurfaceTerm)>> {
        let mut groups = Vec::new();
        while self.is_symbol("(") {
            // a group must look like `( ident+ :` to be a binder
            let mut k = 1;
            while self.peek_at(k).is_some_and(|t| t.kind == TokenKind::Ident) {
                k += 1;
            }
            let colon = self.peek_at(k).is_some_and(|t| t.is_symbol(":"));
            let assign = self.peek_at(k + 1).is_some_and(|t| t.is_symbol("="));
            if k == 1 || !colon || assign {
                break;
            }
            groups.push(self.binder_group()?);
        }
        if groups.is_empty() {
            return Err(self.error(&["binder"]));
        }
        Ok(groups)
    }

    fn prod(&mut self) -> PResult<SurfaceTerm> {
        let lhs = self.app()?;
        if self.is_symbol("*") || self.is_symbol("×") {
            self.bump();
            let rhs = self.prod()?;
            let span = lhs.span.join(rhs.span);
            return Ok(SurfaceTerm::new(
                TermKind::Sigma {
                    binder: "_".to_owned(),
                    first: lhs,
                    second: rhs,
                },
                span,
            ));
        }
        Ok(lhs)
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Some(t) => match t.kind {
                TokenKind::Ident => true,
                TokenKind::Keyword => matches!(t.text.as_str(), "Unit" | "tt" | "Type"),
                TokenKind::Symbol => t.text == "(",
                TokenKind::Universe => false,
            },
            None => false,
        }
    }

    fn app(&mut self) -> PResult<SurfaceTerm> {
        let start = self.here();
        let mut head =
            if self.is_keyword("fst") || self.is_keyword("snd") || self.is_keyword("refl") {
                let kw = self.bump().text.clone();
                let arg = self.atom()?;
                let span = start.join(arg.span);
                let kind = match kw.as_str() {
                    "fst" => TermKind::Fst(arg),
                    "snd" => TermKind::Snd(arg),
                    _ => TermKind::Refl(arg),
                };
                SurfaceTerm::new(kind, span)
            } else if self.is_keyword("Id") {
                self.bump();
                let a = self.atom()?;
                let x = self.atom()?;
                let y = self.atom()?;
                let span = start.join(y.span);
                SurfaceTerm::new(TermKind::Id(a, x, y), span)
            } else if self.is_keyword("J") {
                self.bump();
                let motive = self.atom()?;
                let base = self.atom()?;
                let lhs = self.atom()?;
                let rhs = self.atom()?;
                let path = self.atom()?;
                let span = start.join(path.span);
                SurfaceTerm::new(
                    TermKind::J {
                        motive,
                        base,
                        lhs,
                        rhs,
                        path,
                    },
                    span,
                )
            } else {
                self.atom()?
            };

        while self.starts_atom() {
            let arg = self.atom()?;
            let span = head.span.join(arg.span);
            head = SurfaceTerm::new(TermKind::App(head, arg), span);
        }
        Ok(head)
    }

    fn atom(&mut self) -> PResult<SurfaceTerm> {
        let start = self.here();
        let Some(tok) = self.peek() else {
            return Err(self.error(&["term"]));
        };
        match tok.kind {
            TokenKind::Ident => {
                let (name, span) = self.ident()?;
                let mut span = span;
                let mut shift = 0;
                if self.is_symbol("@") && self.peek().is_some_and(|t| t.span.start == span.end) {
                    self.bump();
                    shift = self.number()?;
                    span = Span::new(span.start, self.prev_end());
                }
                Ok(SurfaceTerm::new(TermKind::Var { name, shift }, span))
            }
            TokenKind::Keyword if tok.text == "Unit" => {
                self.bump();
                Ok(SurfaceTerm::new(TermKind::Unit, start))
            }
            TokenKind::Keyword if tok.text == "tt" => {
                self.bump();
                Ok(SurfaceTerm::new(TermKind::Star, start))
            }
            TokenKind::Keyword if tok.text == "Type" => {
                self.bump();
                let level = self.number()?;
                Ok(SurfaceTerm::new(
                    TermKind::Universe(level),
                    Span::new(start.start, self.prev_end()),
                ))
            }
            TokenKind::Symbol if tok.text == "(" => {
                self.bump();
                let first = self.term()?;
                if self.is_symbol(",") {
                    let mut elems = vec![first];
                    while self.is_symbol(",") {
                        self.bump();
                        elems.push(self.term()?);
                    }
                    let close = self.expect_symbol(")")?;
                    let span = start.join(close.span);
                    let mut acc = elems.pop().expect("nonempty");
                    while let Some(e) = elems.pop() {
                        let inner = if elems.is_empty() {
                            span
                        } else {
                            e.span.join(acc.span)
                        };
                        acc = SurfaceTerm::new(TermKind::Pair(e, acc), inner);
                    }
                    return Ok(acc);
                }
                if self.is_symbol(":") && !self.is_op(":", "=") {
                    self.bump();
                    let ty = self.term()?;
                    let close = self.expect_symbol(")")?;
                    return Ok(SurfaceTerm::new(
                        TermKind::Ann(first, ty),
                        start.join(close.span),
                    ));
                }
                let close = self.expect_symbol(")")?;
                // keep the parenthesised span so children stay inside parents
                let mut t = first;
                t.span = start.join(close.span);
                Ok(t)
            }
            _ => Err(self.error(&["term"])),
        }
    }
}

fn normalize_ident(text: &str) -> String {
    match text {
        "♯" => "Sharp".to_owned(),
        "♭" => "Flat".to_owned(),
        other => other.to_owned(),
    }
}

fn wrap_lams(
    binders: Vec<(String, Option<SurfaceTerm>)>,
    body: SurfaceTerm,
    start: Span,
) -> SurfaceTerm {
    let end = body.span.end;
    let n = binders.len();
    let mut acc = body;
    for (i, (binder, ann)) in binders.into_iter().rev().enumerate() {
        // the outermost lambda owns the `fun` keyword
        let lo = if i + 1 == n {
            start.start
        } else {
            ann.as_ref()
                .map_or(acc.span.start, |a| a.span.start.min(acc.span.start))
        };
        acc = SurfaceTerm::new(
            TermKind::Lam {
                binder,
                ann,
                body: acc,
            },
            Span::new(lo, end),
        );
    }
    acc
}

fn wrap_binders(
    groups: Vec<(Vec<String>, SurfaceTerm)>,
    body: SurfaceTerm,
    start: Span,
    mk: impl Fn(String, SurfaceTerm, SurfaceTerm) -> TermKind,
) -> SurfaceTerm {
    let end = body.span.end;
    let binders: Vec<(String, SurfaceTerm)> = groups
        .into_iter()
        .flat_map(|(names, ty)| names.into_iter().map(move |n| (n, ty.clone())))
        .collect();
    let n = binders.len();
    let mut acc = body;
    for (i, (binder, ty)) in binders.into_iter().rev().enumerate() {
        let lo = if i + 1 == n {
            start.start
        } else {
            ty.span.start.min(acc.span.start)
        };
        acc = SurfaceTerm::new(mk(binder, ty, acc), Span::new(lo, end));
    }
    acc
}
