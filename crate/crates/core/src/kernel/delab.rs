//! Core terms back to surface syntax, choosing binder names that neither
//! capture each other nor shadow a global mentioned in the term.

use super::term::{Name, Term};
use crate::syntax::{Span, SurfaceTerm, TermKind};

/// `ctx` lists the names of the enclosing locals, innermost last.
pub fn delab(t: &Term, ctx: &[Name]) -> SurfaceTerm {
    let mut globals = Vec::new();
    t.constants(&mut globals);
    let mut names: Vec<String> = ctx.iter().map(|n| n.to_string()).collect();
    Delab { globals: &globals }.go(t, &mut names)
}

struct Delab<'a> {
    globals: &'a [Name],
}

fn mk(kind: TermKind) -> SurfaceTerm {
    SurfaceTerm::new(kind, Span::default())
}

impl Delab<'_> {
    fn fresh(&self, hint: &str, used: bool, names: &[String]) -> String {
        if !used {
            return "_".to_owned();
        }
        let base = if hint == "_" || hint.is_empty() {
            "x"
        } else {
            hint
        };
        let taken =
            |s: &str| names.iter().any(|n| n == s) || self.globals.iter().any(|g| &**g == s);
        if !taken(base) {
            return base.to_owned();
        }
        let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
        let stem = if stem.is_empty() { "x" } else { stem };
        (1..)
            .map(|i| format!("{stem}{i}"))
            .find(|s| !taken(s))
            .expect("unbounded")
    }

    fn under(&self, hint: &Name, body: &Term, names: &mut Vec<String>) -> (String, SurfaceTerm) {
        let x = self.fresh(hint, body.has_var(0), names);
        names.push(x.clone());
        let b = self.go(body, names);
        names.pop();
        (x, b)
    }

    fn go(&self, t: &Term, names: &mut Vec<String>) -> SurfaceTerm {
        match t {
            Term::Var(i) => {
                let name = if *i < names.len() {
                    names[names.len() - 1 - i].clone()
                } else {
                    format!("free{}", i - names.len())
                };
                mk(TermKind::Var { name, shift: 0 })
            }
            Term::Const(c, k) => mk(TermKind::Var {
                name: c.to_string(),
                shift: *k,
            }),
            Term::Universe(n) => mk(TermKind::Universe(*n)),
            Term::Unit => mk(TermKind::Unit),
            Term::Star => mk(TermKind::Star),
            Term::Pi(x, a, b) => {
                let domain = self.go(a, names);
                let (binder, codomain) = self.under(x, b, names);
                mk(TermKind::Pi {
                    binder,
                    domain,
                    codomain,
                })
            }
            Term::Sigma(x, a, b) => {
                let first = self.go(a, names);
                let (binder, second) = self.under(x, b, names);
                mk(TermKind::Sigma {
                    binder,
                    first,
                    second,
                })
            }
            Term::Lam(x, a, b) => {
                let ann = a.as_ref().map(|a| self.go(a, names));
                // lambda binders keep a readable name even when unused
                let binder = self.fresh(x, true, names);
                names.push(binder.clone());
                let body = self.go(b, names);
                names.pop();
                mk(TermKind::Lam { binder, ann, body })
            }
            Term::App(f, a) => mk(TermKind::App(self.go(f, names), self.go(a, names))),
            Term::Pair(a, b) => mk(TermKind::Pair(self.go(a, names), self.go(b, names))),
            Term::Fst(a) => mk(TermKind::Fst(self.go(a, names))),
            Term::Snd(a) => mk(TermKind::Snd(self.go(a, names))),
            Term::Refl(a) => mk(TermKind::Refl(self.go(a, names))),
            Term::Id(a, x, y) => mk(TermKind::Id(
                self.go(a, names),
                self.go(x, names),
                self.go(y, names),
            )),
            Term::J {
                motive,
                base,
                lhs,
                rhs,
                path,
            } => mk(TermKind::J {
                motive: self.go(motive, names),
                base: self.go(base, names),
                lhs: self.go(lhs, names),
                rhs: self.go(rhs, names),
                path: self.go(path, names),
            }),
            Term::Let(x, ty, v, b) => {
                let ty = ty.as_ref().map(|t| self.go(t, names));
                let value = self.go(v, names);
                let binder = self.fresh(x, true, names);
                names.push(binder.clone());
                let body = self.go(b, names);
                names.pop();
                mk(TermKind::Let {
                    binder,
                    ty,
                    value,
                    body,
                })
            }
            Term::Ann(a, ty) => mk(TermKind::Ann(self.go(a, names), self.go(ty, names))),
            Term::Loc(_, a) => self.go(a, names),
        }
    }
}
