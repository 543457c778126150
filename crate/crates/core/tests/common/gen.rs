//! Type-directed generator of closed well-typed terms over a small
//! signature, and a substitution oracle independent of the evaluator.

use std::rc::Rc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cohtt::kernel::{shift, GlobalEnv, KernelOptions, Term};
use cohtt::loader::{Embedded, Session};

pub const SIGNATURE: &str = "axiom B : Type 0\naxiom b0 : B\naxiom bs : B -> B\n";

pub fn env() -> GlobalEnv {
    let mut s = Session::new(KernelOptions::default());
    s.load_text("sig", SIGNATURE, cohtt::kernel::Origin::User, &Embedded)
        .expect("signature checks");
    s.env
}

/// Simple closed types; `Id` endpoints are closed terms.
#[derive(Debug, Clone, PartialEq)]
pub enum Ty {
    Unit,
    Base,
    Univ,
    Arrow(Box<Ty>, Box<Ty>),
    Prod(Box<Ty>, Box<Ty>),
    Id(Box<Ty>, Rc<Term>),
}

impl Ty {
    pub fn term(&self) -> Rc<Term> {
        match self {
            Ty::Unit => Rc::new(Term::Unit),
            Ty::Base => Term::constant("B"),
            Ty::Univ => Rc::new(Term::Universe(0)),
            Ty::Arrow(a, b) => Rc::new(Term::Pi("_".into(), a.term(), b.term())),
            Ty::Prod(a, b) => Rc::new(Term::Sigma("_".into(), a.term(), b.term())),
            Ty::Id(a, x) => Term::id(a.term(), x.clone(), x.clone()),
        }
    }

    /// Types that live in `Type 0` themselves.
    pub fn small(&self) -> bool {
        match self {
            Ty::Univ => false,
            Ty::Arrow(a, b) | Ty::Prod(a, b) => a.small() && b.small(),
            Ty::Id(a, _) => a.small(),
            _ => true,
        }
    }
}

pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Gen {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn ty(&mut self, depth: u32) -> Ty {
        let leaf = depth == 0 || self.rng.random_bool(0.4);
        if leaf {
            return match self.rng.random_range(0..3) {
                0 => Ty::Unit,
                1 => Ty::Base,
                _ => Ty::Univ,
            };
        }
        match self.rng.random_range(0..3) {
            0 => Ty::Arrow(Box::new(self.ty(depth - 1)), Box::new(self.ty(depth - 1))),
            1 => Ty::Prod(Box::new(self.ty(depth - 1)), Box::new(self.ty(depth - 1))),
            _ => {
                let a = self.small_ty(depth - 1);
                let x = self.term(&mut Vec::new(), &a, 1);
                Ty::Id(Box::new(a), x)
            }
        }
    }

    pub fn small_ty(&mut self, depth: u32) -> Ty {
        loop {
            let t = self.ty(depth);
            if t.small() {
                return t;
            }
        }
    }

    /// A term of type `ty` in a context of variables of the listed types
    /// (innermost last).
    pub fn term(&mut self, ctx: &mut Vec<Ty>, ty: &Ty, depth: u32) -> Rc<Term> {
        let vars: Vec<usize> = (0..ctx.len())
            .filter(|&i| &ctx[ctx.len() - 1 - i] == ty)
            .collect();
        if !vars.is_empty() && self.rng.random_bool(0.3) {
            return Term::var(vars[self.rng.random_range(0..vars.len())]);
        }
        if depth > 0 && self.rng.random_bool(0.35) {
            return self.redex(ctx, ty, depth - 1);
        }
        self.intro(ctx, ty, depth.saturating_sub(1))
    }

    fn intro(&mut self, ctx: &mut Vec<Ty>, ty: &Ty, depth: u32) -> Rc<Term> {
        match ty {
            Ty::Unit => Rc::new(Term::Star),
            Ty::Base => {
                if depth > 0 && self.rng.random_bool(0.5) {
                    Term::app(Term::constant("bs"), self.term(ctx, ty, depth))
                } else {
                    Term::constant("b0")
                }
            }
            Ty::Univ => self.small_ty(1).term(),
            Ty::Arrow(a, b) => {
                ctx.push((**a).clone());
                let body = self.term(ctx, b, depth);
                ctx.pop();
                Rc::new(Term::Lam("x".into(), Some(a.term()), body))
            }
            Ty::Prod(a, b) => Rc::new(Term::Pair(
                self.term(ctx, a, depth),
                self.term(ctx, b, depth),
            )),
            Ty::Id(_, x) => {
                // the endpoint is closed, so it is well scoped at any depth
                Rc::new(Term::Refl(x.clone()))
            }
        }
    }

    /// An elimination of an introduction, so the term has a redex at its root.
    fn redex(&mut self, ctx: &mut Vec<Ty>, ty: &Ty, depth: u32) -> Rc<Term> {
        match self.rng.random_range(0..5) {
            0 => {
                let a = self.small_ty(1);
                let f_ty = Ty::Arrow(Box::new(a.clone()), Box::new(ty.clone()));
                let f = self.intro(ctx, &f_ty, depth);
                let arg = self.term(ctx, &a, depth);
                Term::app(Rc::new(Term::Ann(f, f_ty.term())), arg)
            }
            1 => {
                let b = self.small_ty(1);
                let p_ty = Ty::Prod(Box::new(ty.clone()), Box::new(b));
                let p = self.intro(ctx, &p_ty, depth);
                Rc::new(Term::Fst(Rc::new(Term::Ann(p, p_ty.term()))))
            }
            2 => {
                let a = self.small_ty(1);
                let p_ty = Ty::Prod(Box::new(a), Box::new(ty.clone()));
                let p = self.intro(ctx, &p_ty, depth);
                Rc::new(Term::Snd(Rc::new(Term::Ann(p, p_ty.term()))))
            }
            3 => {
                // J with a constant motive over a closed point
                let a = self.small_ty(1);
                let x = self.term(&mut Vec::new(), &a, 1);
                let motive = Rc::new(Term::Lam(
                    "y".into(),
                    None,
                    Rc::new(Term::Lam("q".into(), None, shift(&ty.term(), 2, 0))),
                ));
                Rc::new(Term::J {
                    motive,
                    base: self.term(ctx, ty, depth),
                    // endpoints are inferred, and pairs only check
                    lhs: Rc::new(Term::Ann(x.clone(), a.term())),
                    rhs: x.clone(),
                    path: Rc::new(Term::Refl(x)),
                })
            }
            _ => {
                let a = self.small_ty(1);
                let v = self.term(ctx, &a, depth);
                ctx.push(a.clone());
                let body = self.term(ctx, ty, depth);
                ctx.pop();
                Rc::new(Term::Let("l".into(), Some(a.term()), v, body))
            }
        }
    }

    pub fn closed(&mut self) -> (Rc<Term>, Ty) {
        let ty = self.ty(2);
        let t = self.term(&mut Vec::new(), &ty, 4);
        (t, ty)
    }
}

/// Capture-avoiding substitution of `s` for variable `j`, written out here so
/// the beta oracle does not go through the evaluator.
pub fn subst(t: &Rc<Term>, j: usize, s: &Rc<Term>) -> Rc<Term> {
    let under = |b: &Rc<Term>| subst(b, j + 1, &shift(s, 1, 0));
    let go = |b: &Rc<Term>| subst(b, j, s);
    Rc::new(match &**t {
        Term::Var(i) if *i == j => return s.clone(),
        Term::Var(i) if *i > j => Term::Var(i - 1),
        Term::Var(_) | Term::Const(..) | Term::Universe(_) | Term::Unit | Term::Star => {
            return t.clone()
        }
        Term::Pi(x, a, b) => Term::Pi(x.clone(), go(a), under(b)),
        Term::Sigma(x, a, b) => Term::Sigma(x.clone(), go(a), under(b)),
        Term::Lam(x, a, b) => Term::Lam(x.clone(), a.as_ref().map(go), under(b)),
        Term::App(f, a) => Term::App(go(f), go(a)),
        Term::Pair(a, b) => Term::Pair(go(a), go(b)),
        Term::Fst(p) => Term::Fst(go(p)),
        Term::Snd(p) => Term::Snd(go(p)),
        Term::Id(a, x, y) => Term::Id(go(a), go(x), go(y)),
        Term::Refl(x) => Term::Refl(go(x)),
        Term::J {
            motive,
            base,
            lhs,
            rhs,
            path,
        } => Term::J {
            motive: go(motive),
            base: go(base),
            lhs: go(lhs),
            rhs: go(rhs),
            path: go(path),
        },
        Term::Let(x, a, v, b) => Term::Let(x.clone(), a.as_ref().map(go), go(v), under(b)),
        Term::Ann(a, b) => Term::Ann(go(a), go(b)),
        Term::Loc(sp, a) => Term::Loc(*sp, go(a)),
    })
}
