use std::fmt;
use std::rc::Rc;

use crate::syntax::Span;

pub type Name = Rc<str>;

/// Core terms, using de Bruijn indices for bound variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Var(usize),
    /// A global constant displaced by the given number of universe levels.
    Const(Name, u32),
    Universe(u32),
    Pi(Name, Rc<Term>, Rc<Term>),
    Lam(Name, Option<Rc<Term>>, Rc<Term>),
    App(Rc<Term>, Rc<Term>),
    Sigma(Name, Rc<Term>, Rc<Term>),
    Pair(Rc<Term>, Rc<Term>),
    Fst(Rc<Term>),
    Snd(Rc<Term>),
    Unit,
    Star,
    Id(Rc<Term>, Rc<Term>, Rc<Term>),
    Refl(Rc<Term>),
    /// Based path induction: `motive : (y : A) -> Id A lhs y -> Type n`,
    /// `base : motive lhs (refl lhs)`, result `motive rhs path`.
    J {
        motive: Rc<Term>,
        base: Rc<Term>,
        lhs: Rc<Term>,
        rhs: Rc<Term>,
        path: Rc<Term>,
    },
    Let(Name, Option<Rc<Term>>, Rc<Term>, Rc<Term>),
    Ann(Rc<Term>, Rc<Term>),
    /// Source location of the wrapped term; transparent to evaluation.
    Loc(Span, Rc<Term>),
}

impl Term {
    pub fn rc(self) -> Rc<Term> {
        Rc::new(self)
    }

    pub fn var(i: usize) -> Rc<Term> {
        Rc::new(Term::Var(i))
    }

    pub fn constant(name: &str) -> Rc<Term> {
        Rc::new(Term::Const(name.into(), 0))
    }

    pub fn app(f: Rc<Term>, a: Rc<Term>) -> Rc<Term> {
        Rc::new(Term::App(f, a))
    }

    pub fn apps(f: Rc<Term>, args: impl IntoIterator<Item = Rc<Term>>) -> Rc<Term> {
        args.into_iter().fold(f, Term::app)
    }

    pub fn arrow(a: Rc<Term>, b: Rc<Term>) -> Rc<Term> {
        Rc::new(Term::Pi("_".into(), a, shift(&b, 1, 0)))
    }

    pub fn id(a: Rc<Term>, x: Rc<Term>, y: Rc<Term>) -> Rc<Term> {
        Rc::new(Term::Id(a, x, y))
    }

    /// Drops source locations.
    pub fn strip(&self) -> &Term {
        let mut t = self;
        while let Term::Loc(_, inner) = t {
            t = inner;
        }
        t
    }

    pub fn has_var(&self, index: usize) -> bool {
        match self {
            Term::Var(i) => *i == index,
            Term::Const(..) | Term::Universe(_) | Term::Unit | Term::Star => false,
            Term::Pi(_, a, b) | Term::Sigma(_, a, b) => a.has_var(index) || b.has_var(index + 1),
            Term::Lam(_, a, b) => {
                a.as_ref().is_some_and(|a| a.has_var(index)) || b.has_var(index + 1)
            }
            Term::App(a, b) | Term::Pair(a, b) | Term::Ann(a, b) => {
                a.has_var(index) || b.has_var(index)
            }
            Term::Fst(a) | Term::Snd(a) | Term::Refl(a) | Term::Loc(_, a) => a.has_var(index),
            Term::Id(a, b, c) => a.has_var(index) || b.has_var(index) || c.has_var(index),
            Term::J {
                motive,
                base,
                lhs,
                rhs,
                path,
            } => [motive, base, lhs, rhs, path]
                .iter()
                .any(|t| t.has_var(index)),
            Term::Let(_, ty, v, b) => {
                ty.as_ref().is_some_and(|t| t.has_var(index))
                    || v.has_var(index)
                    || b.has_var(index + 1)
            }
        }
    }

    /// Global constants mentioned by the term.
    pub fn constants(&self, out: &mut Vec<Name>) {
        match self {
            Term::Const(c, _) => {
                if !out.contains(c) {
                    out.push(c.clone());
                }
            }
            Term::Var(_) | Term::Universe(_) | Term::Unit | Term::Star => {}
            Term::Pi(_, a, b) | Term::Sigma(_, a, b) => {
                a.constants(out);
                b.constants(out);
            }
            Term::Lam(_, a, b) => {
                if let Some(a) = a {
                    a.constants(out);
                }
                b.constants(out);
            }
            Term::App(a, b) | Term::Pair(a, b) | Term::Ann(a, b) => {
                a.constants(out);
                b.constants(out);
            }
            Term::Fst(a) | Term::Snd(a) | Term::Refl(a) | Term::Loc(_, a) => a.constants(out),
            Term::Id(a, b, c) => {
                a.constants(out);
                b.constants(out);
                c.constants(out);
            }
            Term::J {
                motive,
                base,
                lhs,
                rhs,
                path,
            } => {
                for t in [motive, base, lhs, rhs, path] {
                    t.constants(out);
                }
            }
            Term::Let(_, ty, v, b) => {
                if let Some(ty) = ty {
                    ty.constants(out);
                }
                v.constants(out);
                b.constants(out);
            }
        }
    }

    /// Structural equality up to α and source locations.
    pub fn alpha_eq(&self, other: &Term) -> bool {
        use Term::*;
        match (self.strip(), other.strip()) {
            (Var(a), Var(b)) => a == b,
            (Const(a, i), Const(b, j)) => a == b && i == j,
            (Universe(a), Universe(b)) => a == b,
            (Pi(_, a, b), Pi(_, c, d)) | (Sigma(_, a, b), Sigma(_, c, d)) => {
                a.alpha_eq(c) && b.alpha_eq(d)
            }
            (Lam(_, a, b), Lam(_, c, d)) => {
                match (a, c) {
                    (Some(a), Some(c)) => {
                        if !a.alpha_eq(c) {
                            return false;
                        }
                    }
                    (None, None) => {}
                    _ => return false,
                }
                b.alpha_eq(d)
            }
            (App(a, b), App(c, d)) | (Pair(a, b), Pair(c, d)) | (Ann(a, b), Ann(c, d)) => {
                a.alpha_eq(c) && b.alpha_eq(d)
            }
            (Fst(a), Fst(b)) | (Snd(a), Snd(b)) | (Refl(a), Refl(b)) => a.alpha_eq(b),
            (Unit, Unit) | (Star, Star) => true,
            (Id(a, b, c), Id(d, e, f)) => a.alpha_eq(d) && b.alpha_eq(e) && c.alpha_eq(f),
            (
                J {
                    motive: a1,
                    base: b1,
                    lhs: c1,
                    rhs: d1,
                    path: e1,
                },
                J {
                    motive: a2,
                    base: b2,
                    lhs: c2,
                    rhs: d2,
                    path: e2,
                },
            ) => {
                a1.alpha_eq(a2)
                    && b1.alpha_eq(b2)
                    && c1.alpha_eq(c2)
                    && d1.alpha_eq(d2)
                    && e1.alpha_eq(e2)
            }
            (Let(_, t1, v1, b1), Let(_, t2, v2, b2)) => {
                let tys = match (t1, t2) {
                    (Some(a), Some(b)) => a.alpha_eq(b),
                    (None, None) => true,
                    _ => false,
                };
                tys && v1.alpha_eq(v2) && b1.alpha_eq(b2)
            }
            _ => false,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(..) | Term::Universe(_) | Term::Unit | Term::Star => 1,
            Term::Pi(_, a, b) | Term::Sigma(_, a, b) => 1 + a.size() + b.size(),
            Term::Lam(_, a, b) => 1 + a.as_ref().map_or(0, |a| a.size()) + b.size(),
            Term::App(a, b) | Term::Pair(a, b) | Term::Ann(a, b) => 1 + a.size() + b.size(),
            Term::Fst(a) | Term::Snd(a) | Term::Refl(a) => 1 + a.size(),
            Term::Loc(_, a) => a.size(),
            Term::Id(a, b, c) => 1 + a.size() + b.size() + c.size(),
            Term::J {
                motive,
                base,
                lhs,
                rhs,
                path,
            } => 1 + motive.size() + base.size() + lhs.size() + rhs.size() + path.size(),
            Term::Let(_, t, v, b) => 1 + t.as_ref().map_or(0, |t| t.size()) + v.size() + b.size(),
        }
    }
}

/// Adds `by` to every free index `>= cutoff`.
pub fn shift(t: &Rc<Term>, by: isize, cutoff: usize) -> Rc<Term> {
    fn go(t: &Rc<Term>, by: isize, c: usize) -> Rc<Term> {
        let r = |x: &Rc<Term>| go(x, by, c);
        let r1 = |x: &Rc<Term>| go(x, by, c + 1);
        Rc::new(match &**t {
            Term::Var(i) => {
                if *i >= c {
                    Term::Var((*i as isize + by) as usize)
                } else {
                    Term::Var(*i)
                }
            }
            Term::Const(..) | Term::Universe(_) | Term::Unit | Term::Star => return t.clone(),
            Term::Pi(x, a, b) => Term::Pi(x.clone(), r(a), r1(b)),
            Term::Sigma(x, a, b) => Term::Sigma(x.clone(), r(a), r1(b)),
            Term::Lam(x, a, b) => Term::Lam(x.clone(), a.as_ref().map(r), r1(b)),
            Term::App(a, b) => Term::App(r(a), r(b)),
            Term::Pair(a, b) => Term::Pair(r(a), r(b)),
            Term::Ann(a, b) => Term::Ann(r(a), r(b)),
            Term::Fst(a) => Term::Fst(r(a)),
            Term::Snd(a) => Term::Snd(r(a)),
            Term::Refl(a) => Term::Refl(r(a)),
            Term::Loc(s, a) => Term::Loc(*s, r(a)),
            Term::Id(a, b, d) => Term::Id(r(a), r(b), r(d)),
            Term::J {
                motive,
                base,
                lhs,
                rhs,
                path,
            } => Term::J {
                motive: r(motive),
                base: r(base),
                lhs: r(lhs),
                rhs: r(rhs),
                path: r(path),
            },
            Term::Let(x, ty, v, b) => Term::Let(x.clone(), ty.as_ref().map(r), r(v), r1(b)),
        })
    }
    if by == 0 {
        t.clone()
    } else {
        go(t, by, cutoff)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = super::delab::delab(self, &[]);
        f.write_str(&crate::syntax::print_term(&s))
    }
}
