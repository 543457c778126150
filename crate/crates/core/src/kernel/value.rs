//! Semantic values and normalization by evaluation.
//!
//! Bound variables are de Bruijn *levels* in values. Applications headed by
//! a defined constant are kept *glued*: the constant and its spine are
//! retained and only unfolded when a computation needs the head, so that
//! conversion can first compare constants by name.

use std::rc::Rc;

use super::env::GlobalEnv;
use super::term::{Name, Term};

pub type V = Rc<Value>;

#[derive(Debug, Clone)]
pub enum Value {
    /// Stuck computation headed by a variable or a postulate.
    Rigid(Head, Vec<Elim>),
    /// A defined constant applied to a spine, not yet unfolded.
    Glued(Name, u32, Vec<Elim>),
    Universe(u32),
    Pi(Name, V, Closure),
    Lam(Name, Option<V>, Closure),
    Sigma(Name, V, Closure),
    Pair(V, V),
    Unit,
    Star,
    Id(V, V, V),
    Refl(V),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Head {
    Var(usize),
    Const(Name, u32),
}

#[derive(Debug, Clone)]
pub enum Elim {
    App(V),
    Fst,
    Snd,
    J { motive: V, base: V, lhs: V, rhs: V },
}

#[derive(Debug, Clone, Default)]
pub struct Env {
    head: Option<Rc<EnvNode>>,
    len: usize,
}

#[derive(Debug)]
struct EnvNode {
    value: V,
    next: Env,
}

impl Env {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&self, value: V) -> Env {
        Env {
            head: Some(Rc::new(EnvNode {
                value,
                next: self.clone(),
            })),
            len: self.len + 1,
        }
    }

    /// Looks up a de Bruijn index.
    pub fn lookup(&self, index: usize) -> &V {
        let mut node = self.head.as_ref().expect("index out of scope");
        for _ in 0..index {
            node = node.next.head.as_ref().expect("index out of scope");
        }
        &node.value
    }
}

#[derive(Debug, Clone)]
pub struct Closure {
    pub env: Env,
    pub shift: u32,
    pub body: Rc<Term>,
}

pub fn var(level: usize) -> V {
    Rc::new(Value::Rigid(Head::Var(level), Vec::new()))
}

/// Evaluation against a fixed global environment.
#[derive(Clone, Copy)]
pub struct Eval<'g> {
    pub globals: &'g GlobalEnv,
}

impl<'g> Eval<'g> {
    pub fn new(globals: &'g GlobalEnv) -> Self {
        Eval { globals }
    }

    pub fn eval(&self, env: &Env, shift: u32, t: &Term) -> V {
        match t {
            Term::Var(i) => env.lookup(*i).clone(),
            Term::Const(c, k) => {
                let entry = self
                    .globals
                    .get(c)
                    .unwrap_or_else(|| panic!("unresolved constant {c}"));
                if entry.is_postulate() {
                    Rc::new(Value::Rigid(Head::Const(c.clone(), k + shift), Vec::new()))
                } else {
                    Rc::new(Value::Glued(c.clone(), k + shift, Vec::new()))
                }
            }
            Term::Universe(n) => Rc::new(Value::Universe(n + shift)),
            Term::Pi(x, a, b) => Rc::new(Value::Pi(
                x.clone(),
                self.eval(env, shift, a),
                Closure {
                    env: env.clone(),
                    shift,
                    body: b.clone(),
                },
            )),
            Term::Sigma(x, a, b) => Rc::new(Value::Sigma(
                x.clone(),
                self.eval(env, shift, a),
                Closure {
                    env: env.clone(),
                    shift,
                    body: b.clone(),
                },
            )),
            Term::Lam(x, a, b) => Rc::new(Value::Lam(
                x.clone(),
                a.as_ref().map(|a| self.eval(env, shift, a)),
                Closure {
                    env: env.clone(),
                    shift,
                    body: b.clone(),
                },
            )),
            Term::App(f, a) => {
                let f = self.eval(env, shift, f);
                let a = self.eval(env, shift, a);
                self.apply(&f, a)
            }
            Term::Pair(a, b) => Rc::new(Value::Pair(
                self.eval(env, shift, a),
                self.eval(env, shift, b),
            )),
            Term::Fst(p) => self.fst(&self.eval(env, shift, p)),
            Term::Snd(p) => self.snd(&self.eval(env, shift, p)),
            Term::Unit => Rc::new(Value::Unit),
            Term::Star => Rc::new(Value::Star),
            Term::Id(a, x, y) => Rc::new(Value::Id(
                self.eval(env, shift, a),
                self.eval(env, shift, x),
                self.eval(env, shift, y),
            )),
            Term::Refl(a) => Rc::new(Value::Refl(self.eval(env, shift, a))),
            Term::J {
                motive,
                base,
                lhs,
                rhs,
                path,
            } => {
                let path = self.eval(env, shift, path);
                self.j(
                    &path,
                    self.eval(env, shift, motive),
                    self.eval(env, shift, base),
                    self.eval(env, shift, lhs),
                    self.eval(env, shift, rhs),
                )
            }
            Term::Let(_, _, v, b) => {
                let v = self.eval(env, shift, v);
                self.eval(&env.push(v), shift, b)
            }
            Term::Ann(t, _) | Term::Loc(_, t) => self.eval(env, shift, t),
        }
    }

    pub fn inst(&self, c: &Closure, arg: V) -> V {
        self.eval(&c.env.push(arg), c.shift, &c.body)
    }

    /// The value of a defined constant at a displacement.
    fn unfold_const(&self, name: &str, shift: u32) -> V {
        let entry = self
            .globals
            .get(name)
            .unwrap_or_else(|| panic!("unresolved constant {name}"));
        let body = entry.body.as_ref().expect("glued postulate");
        self.eval(&Env::default(), shift, body)
    }

    /// Unfolds glued heads until the value is not glued.
    pub fn force(&self, v: &V) -> V {
        let mut v = v.clone();
        while let Value::Glued(c, k, spine) = &*v {
            let mut head = self.unfold_const(c, *k);
            for e in spine {
                head = self.elim(&head, e);
            }
            v = head;
        }
        v
    }

    pub fn elim(&self, v: &V, e: &Elim) -> V {
        match e {
            Elim::App(a) => self.apply(v, a.clone()),
            Elim::Fst => self.fst(v),
            Elim::Snd => self.snd(v),
            Elim::J {
                motive,
                base,
                lhs,
                rhs,
            } => self.j(v, motive.clone(), base.clone(), lhs.clone(), rhs.clone()),
        }
    }

    fn push_elim(v: &V, e: Elim) -> Option<V> {
        match &**v {
            Value::Rigid(h, spine) => {
                let mut spine = spine.clone();
                spine.push(e);
                Some(Rc::new(Value::Rigid(h.clone(), spine)))
            }
            Value::Glued(c, k, spine) => {
                let mut spine = spine.clone();
                spine.push(e);
                Some(Rc::new(Value::Glued(c.clone(), *k, spine)))
            }
            _ => None,
        }
    }

    pub fn apply(&self, f: &V, a: V) -> V {
        match &**f {
            Value::Lam(_, _, body) => self.inst(body, a),
            _ => Self::push_elim(f, Elim::App(a))
                .unwrap_or_else(|| panic!("applying a non-function: {f:?}")),
        }
    }

    pub fn apply_all(&self, f: &V, args: impl IntoIterator<Item = V>) -> V {
        args.into_iter()
            .fold(f.clone(), |acc, a| self.apply(&acc, a))
    }

    pub fn fst(&self, p: &V) -> V {
        match &**p {
            Value::Pair(a, _) => a.clone(),
            _ => Self::push_elim(p, Elim::Fst)
                .unwrap_or_else(|| panic!("projecting from a non-pair: {p:?}")),
        }
    }

    pub fn snd(&self, p: &V) -> V {
        match &**p {
            Value::Pair(_, b) => b.clone(),
            _ => Self::push_elim(p, Elim::Snd)
                .unwrap_or_else(|| panic!("projecting from a non-pair: {p:?}")),
        }
    }

    pub fn j(&self, path: &V, motive: V, base: V, lhs: V, rhs: V) -> V {
        let path = self.force(path);
        match &*path {
            Value::Refl(_) => base,
            Value::Rigid(..) => Self::push_elim(
                &path,
                Elim::J {
                    motive,
                    base,
                    lhs,
                    rhs,
                },
            )
            .expect("rigid"),
            _ => panic!("path induction on a non-path: {path:?}"),
        }
    }

    /// Reads a value back into a term at the given context depth. With
    /// `unfold`, glued constants are expanded and the result is normal.
    pub fn quote(&self, depth: usize, v: &V, unfold: bool) -> Rc<Term> {
        let v = if unfold { self.force(v) } else { v.clone() };
        match &*v {
            Value::Rigid(head, spine) => {
                let h = match head {
                    Head::Var(l) => Term::var(depth - 1 - l),
                    Head::Const(c, k) => Rc::new(Term::Const(c.clone(), *k)),
                };
                self.quote_spine(depth, h, spine, unfold)
            }
            Value::Glued(c, k, spine) => {
                let h = Rc::new(Term::Const(c.clone(), *k));
                self.quote_spine(depth, h, spine, unfold)
            }
            Value::Universe(n) => Rc::new(Term::Universe(*n)),
            Value::Pi(x, a, b) => Rc::new(Term::Pi(
                x.clone(),
                self.quote(depth, a, unfold),
                self.quote(depth + 1, &self.inst(b, var(depth)), unfold),
            )),
            Value::Sigma(x, a, b) => Rc::new(Term::Sigma(
                x.clone(),
                self.quote(depth, a, unfold),
                self.quote(depth + 1, &self.inst(b, var(depth)), unfold),
            )),
            Value::Lam(x, a, b) => Rc::new(Term::Lam(
                x.clone(),
                a.as_ref().map(|a| self.quote(depth, a, unfold)),
                self.quote(depth + 1, &self.inst(b, var(depth)), unfold),
            )),
            Value::Pair(a, b) => Rc::new(Term::Pair(
                self.quote(depth, a, unfold),
                self.quote(depth, b, unfold),
            )),
            Value::Unit => Rc::new(Term::Unit),
            Value::Star => Rc::new(Term::Star),
            Value::Id(a, x, y) => Rc::new(Term::Id(
                self.quote(depth, a, unfold),
                self.quote(depth, x, unfold),
                self.quote(depth, y, unfold),
            )),
            Value::Refl(a) => Rc::new(Term::Refl(self.quote(depth, a, unfold))),
        }
    }

    fn quote_spine(&self, depth: usize, head: Rc<Term>, spine: &[Elim], unfold: bool) -> Rc<Term> {
        spine.iter().fold(head, |acc, e| match e {
            Elim::App(a) => Term::app(acc, self.quote(depth, a, unfold)),
            Elim::Fst => Rc::new(Term::Fst(acc)),
            Elim::Snd => Rc::new(Term::Snd(acc)),
            Elim::J {
                motive,
                base,
                lhs,
                rhs,
            } => Rc::new(Term::J {
                motive: self.quote(depth, motive, unfold),
                base: self.quote(depth, base, unfold),
                lhs: self.quote(depth, lhs, unfold),
                rhs: self.quote(depth, rhs, unfold),
                path: acc,
            }),
        })
    }

    /// Definitional equality, with η for functions and pairs.
    pub fn conv(&self, depth: usize, a: &V, b: &V) -> bool {
        if Rc::ptr_eq(a, b) {
            return true;
        }
        if let (Value::Glued(c1, k1, s1), Value::Glued(c2, k2, s2)) = (&**a, &**b) {
            if c1 == c2 && k1 == k2 && s1.len() == s2.len() && self.conv_spine(depth, s1, s2) {
                return true;
            }
        }
        let a = self.force(a);
        let b = self.force(b);
        match (&*a, &*b) {
            (Value::Universe(i), Value::Universe(j)) => i == j,
            (Value::Pi(_, a1, b1), Value::Pi(_, a2, b2))
            | (Value::Sigma(_, a1, b1), Value::Sigma(_, a2, b2)) => {
                self.conv(depth, a1, a2)
                    && self.conv(
                        depth + 1,
                        &self.inst(b1, var(depth)),
                        &self.inst(b2, var(depth)),
                    )
            }
            (Value::Lam(_, _, b1), Value::Lam(_, _, b2)) => self.conv(
                depth + 1,
                &self.inst(b1, var(depth)),
                &self.inst(b2, var(depth)),
            ),
            (Value::Lam(_, _, body), _) => self.conv(
                depth + 1,
                &self.inst(body, var(depth)),
                &self.apply(&b, var(depth)),
            ),
            (_, Value::Lam(_, _, body)) => self.conv(
                depth + 1,
                &self.apply(&a, var(depth)),
                &self.inst(body, var(depth)),
            ),
            (Value::Pair(a1, b1), Value::Pair(a2, b2)) => {
                self.conv(depth, a1, a2) && self.conv(depth, b1, b2)
            }
            (Value::Pair(x, y), Value::Rigid(..)) => {
                self.conv(depth, x, &self.fst(&b)) && self.conv(depth, y, &self.snd(&b))
            }
            (Value::Rigid(..), Value::Pair(x, y)) => {
                self.conv(depth, &self.fst(&a), x) && self.conv(depth, &self.snd(&a), y)
            }
            (Value::Unit, Value::Unit) | (Value::Star, Value::Star) => true,
            (Value::Id(a1, x1, y1), Value::Id(a2, x2, y2)) => {
                self.conv(depth, a1, a2) && self.conv(depth, x1, x2) && self.conv(depth, y1, y2)
            }
            (Value::Refl(x), Value::Refl(y)) => self.conv(depth, x, y),
            (Value::Rigid(h1, s1), Value::Rigid(h2, s2)) => {
                h1 == h2 && s1.len() == s2.len() && self.conv_spine(depth, s1, s2)
            }
            _ => false,
        }
    }

    fn conv_spine(&self, depth: usize, s1: &[Elim], s2: &[Elim]) -> bool {
        s1.iter().zip(s2).all(|(e1, e2)| match (e1, e2) {
            (Elim::App(a), Elim::App(b)) => self.conv(depth, a, b),
            (Elim::Fst, Elim::Fst) | (Elim::Snd, Elim::Snd) => true,
            (
                Elim::J {
                    motive: m1,
                    base: b1,
                    lhs: l1,
                    rhs: r1,
                },
                Elim::J {
                    motive: m2,
                    base: b2,
                    lhs: l2,
                    rhs: r2,
                },
            ) => {
                self.conv(depth, m1, m2)
                    && self.conv(depth, b1, b2)
                    && self.conv(depth, l1, l2)
                    && self.conv(depth, r1, r2)
            }
            _ => false,
        })
    }

    /// Cumulative subtyping: `Type i <= Type j` when `i <= j`, covariant in
    /// Π-codomains and Σ-components, conversion elsewhere.
    pub fn sub(&self, depth: usize, a: &V, b: &V) -> bool {
        if self.conv(depth, a, b) {
            return true;
        }
        let a = self.force(a);
        let b = self.force(b);
        match (&*a, &*b) {
            (Value::Universe(i), Value::Universe(j)) => i <= j || self.globals.options.type_in_type,
            (Value::Pi(_, a1, b1), Value::Pi(_, a2, b2)) => {
                self.conv(depth, a1, a2)
                    && self.sub(
                        depth + 1,
                        &self.inst(b1, var(depth)),
                        &self.inst(b2, var(depth)),
                    )
            }
            (Value::Sigma(_, a1, b1), Value::Sigma(_, a2, b2)) => {
                self.sub(depth, a1, a2)
                    && self.sub(
                        depth + 1,
                        &self.inst(b1, var(depth)),
                        &self.inst(b2, var(depth)),
                    )
            }
            _ => false,
        }
    }
}

/// Contracts `fun x => f x` to `f` and `(fst p, snd p)` to `p` throughout.
pub fn eta_contract(t: &Rc<Term>) -> Rc<Term> {
    use super::term::shift;
    let r = |x: &Rc<Term>| eta_contract(x);
    match &**t {
        Term::Lam(x, a, b) => {
            let b = r(b);
            if let Term::App(f, arg) = &*b {
                if matches!(**arg, Term::Var(0)) && !f.has_var(0) {
                    return shift(f, -1, 0);
                }
            }
            Rc::new(Term::Lam(x.clone(), a.as_ref().map(r), b))
        }
        Term::Pair(a, b) => {
            let a = r(a);
            let b = r(b);
            if let (Term::Fst(p), Term::Snd(q)) = (&*a, &*b) {
                if p.alpha_eq(q) {
                    return p.clone();
                }
            }
            Rc::new(Term::Pair(a, b))
        }
        Term::Var(_) | Term::Const(..) | Term::Universe(_) | Term::Unit | Term::Star => t.clone(),
        Term::Pi(x, a, b) => Rc::new(Term::Pi(x.clone(), r(a), r(b))),
        Term::Sigma(x, a, b) => Rc::new(Term::Sigma(x.clone(), r(a), r(b))),
        Term::App(a, b) => Rc::new(Term::App(r(a), r(b))),
        Term::Ann(a, b) => Rc::new(Term::Ann(r(a), r(b))),
        Term::Fst(a) => Rc::new(Term::Fst(r(a))),
        Term::Snd(a) => Rc::new(Term::Snd(r(a))),
        Term::Refl(a) => Rc::new(Term::Refl(r(a))),
        Term::Loc(s, a) => Rc::new(Term::Loc(*s, r(a))),
        Term::Id(a, b, c) => Rc::new(Term::Id(r(a), r(b), r(c))),
        Term::J {
            motive,
            base,
            lhs,
            rhs,
            path,
        } => Rc::new(Term::J {
            motive: r(motive),
            base: r(base),
            lhs: r(lhs),
            rhs: r(rhs),
            path: r(path),
        }),
        Term::Let(x, ty, v, b) => Rc::new(Term::Let(x.clone(), ty.as_ref().map(r), r(v), r(b))),
    }
}
