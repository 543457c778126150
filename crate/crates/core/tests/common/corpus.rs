//! The ill-typed corpus and its expectation lines.

use std::path::PathBuf;

use cohtt::cohesion::{load_prelude, PreludeFlags};
use cohtt::kernel::{check_decl, GlobalEnv, Origin};
use cohtt::syntax::{line_col, parse_module, Span};

pub struct Expect {
    pub kind: String,
    pub line: usize,
    pub col: usize,
    pub text: String,
}

pub fn parse_expect(src: &str) -> Expect {
    let first = src.lines().next().unwrap_or_default();
    let rest = first
        .strip_prefix("-- expect: ")
        .expect("first line is an expectation");
    let (kind, rest) = rest.split_once(' ').expect("kind");
    let (pos, text) = rest.split_once(' ').expect("position");
    let (line, col) = pos.split_once(':').expect("line:col");
    Expect {
        kind: kind.to_owned(),
        line: line.parse().expect("line"),
        col: col.parse().expect("col"),
        text: text.trim_matches('`').to_owned(),
    }
}

/// The kind and span of the first error in the file.
pub fn first_error(env: &GlobalEnv, name: &str, src: &str) -> Option<(String, Span)> {
    let module = match parse_module(name, src) {
        Ok(m) => m,
        Err(e) => return Some(("Syntax".to_owned(), e.span())),
    };
    let mut env = env.clone();
    for d in module.decls() {
        if let Err(e) = check_decl(&mut env, d, Origin::User, Some(name)) {
            return Some((
                format!("{:?}", e.kind),
                e.span.expect("kernel errors carry a span"),
            ));
        }
    }
    None
}

pub fn corpus() -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/ill_typed");
    let mut files: Vec<_> = std::fs::read_dir(&dir)
        .expect("corpus directory")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "cht"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            (name, std::fs::read_to_string(&p).expect("readable"))
        })
        .collect()
}

/// Checks every corpus file against its expectation; returns the file count
/// and one line per file that was accepted or rejected elsewhere.
pub fn check_corpus() -> (usize, Vec<String>) {
    let session =
        load_prelude(PreludeFlags::default(), &Default::default()).expect("prelude loads");
    let files = corpus();
    let mut wrong = Vec::new();
    for (name, src) in &files {
        let want = parse_expect(src);
        match first_error(&session.env, name, src) {
            None => wrong.push(format!("{name}: accepted")),
            Some((kind, span)) => {
                let (line, col) = line_col(src, span.start);
                let text = &src[span.start..span.end.min(src.len())];
                if kind != want.kind || line != want.line || col != want.col || text != want.text {
                    wrong.push(format!(
                        "{name}: got {kind} {line}:{col} `{text}`, want {} {}:{} `{}`",
                        want.kind, want.line, want.col, want.text
                    ));
                }
            }
        }
    }
    (files.len(), wrong)
}
