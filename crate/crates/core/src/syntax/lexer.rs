//! Tokenizer for `.cht` sources.
//!
//! Symbols are single characters; the parser recognizes the compound
//! operators `->`, `=>` and `:=` by checking that the two halves are
//! adjacent in the source. Comments (`-- line`, `{- block -}`) are trivia,
//! except doc comments (`--| text`) which are collected separately so the
//! parser can attach them to the following declaration.

use std::fmt;

use super::{LexError, Span};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Ident,
    Keyword,
    Symbol,
    /// A natural-number literal, used for universe levels and displacements.
    Universe,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub span: Span,
}

impl Token {
    pub fn is_keyword(&self, kw: &str) -> bool {
        self.kind == TokenKind::Keyword && self.text == kw
    }

    pub fn is_symbol(&self, sym: &str) -> bool {
        self.kind == TokenKind::Symbol && self.text == sym
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}`", self.text)
    }
}

/// A `--|` comment and the span it occupies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocComment {
    pub text: String,
    pub span: Span,
}

pub const KEYWORDS: &[&str] = &[
    "def", "axiom", "import", "fun", "let", "in", "Sigma", "Type", "Id", "refl", "J", "fst", "snd",
    "Unit", "tt",
];

/// Single-character symbols. `λ`, `Σ`, `→`, `×` are aliases handled here
/// too; `♯` and `♭` lex as identifiers.
pub const SYMBOLS: &[char] = &[
    '(', ')', ',', ':', '=', '>', '-', '*', '@', 'λ', 'Σ', '→', '×',
];

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, LexError> {
    tokenize_with_docs(text).map(|(tokens, _)| tokens)
}

pub fn tokenize_with_docs(text: &str) -> Result<(Vec<Token>, Vec<DocComment>), LexError> {
    let mut tokens = Vec::new();
    let mut docs = Vec::new();
    let bytes = text.as_bytes();
    let mut chars = text.char_indices().peekable();

    while let Some(&(start, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }

        // line comment, possibly a doc comment
        if text[start..].starts_with("--") {
            let end = text[start..].find('\n').map_or(text.len(), |i| start + i);
            if text[start..end].starts_with("--|") {
                docs.push(DocComment {
                    text: text[start + 3..end].trim().to_owned(),
                    span: Span::new(start, end),
                });
            }
            while chars.peek().is_some_and(|&(i, _)| i < end) {
                chars.next();
            }
            continue;
        }

        if text[start..].starts_with("{-") {
            let mut depth = 0usize;
            let mut i = start;
            loop {
                if i >= bytes.len() {
                    return Err(LexError {
                        offset: start,
                        message: "unterminated block comment".to_owned(),
                    });
                }
                if text[i..].starts_with("{-") {
                    depth += 1;
                    i += 2;
                } else if text[i..].starts_with("-}") {
                    depth -= 1;
                    i += 2;
                    if depth == 0 {
                        break;
                    }
                } else {
                    i += text[i..].chars().next().map_or(1, char::len_utf8);
                }
            }
            while chars.peek().is_some_and(|&(j, _)| j < i) {
                chars.next();
            }
            continue;
        }

        if is_ident_start(c) {
            let mut end = start;
            while let Some(&(i, c)) = chars.peek() {
                if is_ident_continue(c) {
                    end = i + c.len_utf8();
                    chars.next();
                } else {
                    break;
                }
            }
            let word = &text[start..end];
            let kind = if KEYWORDS.contains(&word) {
                TokenKind::Keyword
            } else {
                TokenKind::Ident
            };
            tokens.push(Token {
                kind,
                text: word.to_owned(),
                span: Span::new(start, end),
            });
            continue;
        }

        if c.is_ascii_digit() {
            let mut end = start;
            while let Some(&(i, c)) = chars.peek() {
                if c.is_ascii_digit() {
                    end = i + 1;
                    chars.next();
                } else {
                    break;
                }
            }
            tokens.push(Token {
                kind: TokenKind::Universe,
                text: text[start..end].to_owned(),
                span: Span::new(start, end),
            });
            continue;
        }

        if c == '♯' || c == '♭' {
            chars.next();
            tokens.push(Token {
                kind: TokenKind::Ident,
                text: c.to_string(),
                span: Span::new(start, start + c.len_utf8()),
            });
            continue;
        }

        if SYMBOLS.contains(&c) {
            chars.next();
            tokens.push(Token {
                kind: TokenKind::Symbol,
                text: c.to_string(),
                span: Span::new(start, start + c.len_utf8()),
            });
            continue;
        }

        return Err(LexError {
            offset: start,
            message: format!("unrecognized character {c:?}"),
        });
    }

    Ok((tokens, docs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(text: &str) -> Vec<(TokenKind, String)> {
        tokenize(text)
            .unwrap()
            .into_iter()
            .map(|t| (t.kind, t.text))
            .collect()
    }

    #[test]
    fn universe_literal() {
        assert_eq!(
            kinds("Type 0"),
            vec![
                (TokenKind::Keyword, "Type".to_owned()),
                (TokenKind::Universe, "0".to_owned())
            ]
        );
    }

    #[test]
    fn empty_input() {
        assert!(tokenize("").unwrap().is_empty());
        assert!(
            tokenize("  -- only a comment\n {- and {- nested -} block -}")
                .unwrap()
                .is_empty()
        );
    }

    #[test]
    fn lambda_token_count() {
        // fun ( x : A ) = > x
        let toks = tokenize("fun (x : A) => x").unwrap();
        assert_eq!(toks.len(), 9);
        let last = toks.last().unwrap();
        assert_eq!((last.kind, last.text.as_str()), (TokenKind::Ident, "x"));
    }

    #[test]
    fn bad_character_reports_offset() {
        let err = tokenize("def x : $").unwrap_err();
        assert_eq!(err.offset, 8);
    }

    #[test]
    fn unterminated_block_comment() {
        assert_eq!(tokenize("a {- b").unwrap_err().offset, 2);
    }

    #[test]
    fn unicode_aliases() {
        let toks = kinds("♯ A → ♭ B");
        assert_eq!(toks[0], (TokenKind::Ident, "♯".to_owned()));
        assert_eq!(toks[2], (TokenKind::Symbol, "→".to_owned()));
        assert_eq!(toks[3], (TokenKind::Ident, "♭".to_owned()));
    }

    #[test]
    fn doc_comments_are_collected() {
        let (toks, docs) = tokenize_with_docs("--| the unit\naxiom u : Unit").unwrap();
        assert_eq!(toks.len(), 4);
        assert_eq!(docs.len(), 1);
        assert_eq!(docs[0].text, "the unit");
    }

    #[test]
    fn spans_reproduce_source() {
        let src = "def id : (A : Type 0) -> A -> A := fun A x => x";
        let toks = tokenize(src).unwrap();
        let mut rebuilt = String::new();
        let mut last = 0;
        for t in &toks {
            assert!(t.span.start >= last);
            rebuilt.push_str(&src[last..t.span.start]);
            assert_eq!(&src[t.span.start..t.span.end], t.text);
            rebuilt.push_str(&t.text);
            last = t.span.end;
        }
        rebuilt.push_str(&src[last..]);
        assert_eq!(rebuilt, src);
    }
}
