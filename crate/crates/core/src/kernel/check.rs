//! Bidirectional type checking of core terms.

use std::rc::Rc;

use super::delab::delab;
use super::env::GlobalEnv;
use super::error::{ErrorKind, TypeError};
use super::term::{Name, Term};
use super::value::{var, Closure, Env, Eval, Value, V};
use crate::syntax::print_term;

/// A typing context: names, types and values of the locals.
#[derive(Debug, Clone, Default)]
pub struct Ctx {
    pub names: Vec<Name>,
    pub types: Vec<V>,
    pub env: Env,
}

impl Ctx {
    pub fn depth(&self) -> usize {
        self.env.len()
    }

    /// Extends with a fresh variable.
    pub fn bind(&self, name: &Name, ty: V) -> Ctx {
        self.define(name, ty, var(self.depth()))
    }

    /// Extends with a local definition.
    pub fn define(&self, name: &Name, ty: V, value: V) -> Ctx {
        let mut names = self.names.clone();
        names.push(name.clone());
        let mut types = self.types.clone();
        types.push(ty);
        Ctx {
            names,
            types,
            env: self.env.push(value),
        }
    }
}

#[derive(Clone, Copy)]
pub struct Checker<'g> {
    pub ev: Eval<'g>,
}

impl<'g> Checker<'g> {
    pub fn new(globals: &'g GlobalEnv) -> Self {
        Checker {
            ev: Eval::new(globals),
        }
    }

    fn type_in_type(&self) -> bool {
        self.ev.globals.options.type_in_type
    }

    pub fn eval(&self, ctx: &Ctx, t: &Term) -> V {
        self.ev.eval(&ctx.env, 0, t)
    }

    /// Renders a value in the context for error messages.
    pub fn show(&self, ctx: &Ctx, v: &V) -> String {
        let t = self.ev.quote(ctx.depth(), v, false);
        print_term(&delab(&t, &ctx.names))
    }

    fn closure_of(&self, ctx: &Ctx, body_ty: &V) -> Closure {
        // `body_ty` lives one level deeper than `ctx`
        Closure {
            env: ctx.env.clone(),
            shift: 0,
            body: self.ev.quote(ctx.depth() + 1, body_ty, false),
        }
    }

    pub fn infer_universe(&self, ctx: &Ctx, t: &Term) -> Result<u32, TypeError> {
        let ty = self.infer(ctx, t)?;
        match &*self.ev.force(&ty) {
            Value::Universe(n) => Ok(*n),
            _ => Err(TypeError::new(
                ErrorKind::NotAType,
                format!(
                    "expected a type, found a term of type {}",
                    self.show(ctx, &ty)
                ),
            )),
        }
    }

    pub fn infer(&self, ctx: &Ctx, t: &Term) -> Result<V, TypeError> {
        match t {
            Term::Loc(span, inner) => self.infer(ctx, inner).map_err(|e| e.at(*span)),
            Term::Var(i) => Ok(ctx.types[ctx.types.len() - 1 - i].clone()),
            Term::Const(c, k) => {
                let entry =
                    self.ev.globals.get(c).ok_or_else(|| {
                        TypeError::new(ErrorKind::Unbound, format!("unbound: {c}"))
                    })?;
                Ok(self.ev.eval(&Env::default(), *k, &entry.ty))
            }
            Term::Universe(n) => Ok(Rc::new(Value::Universe(n + 1))),
            Term::Pi(x, a, b) | Term::Sigma(x, a, b) => {
                let i = self.infer_universe(ctx, a)?;
                let ext = ctx.bind(x, self.eval(ctx, a));
                let j = self.infer_universe(&ext, b)?;
                Ok(Rc::new(Value::Universe(i.max(j))))
            }
            Term::Lam(x, Some(a), b) => {
                self.infer_universe(ctx, a)?;
                let av = self.eval(ctx, a);
                let ext = ctx.bind(x, av.clone());
                let bt = self.infer(&ext, b)?;
                Ok(Rc::new(Value::Pi(x.clone(), av, self.closure_of(ctx, &bt))))
            }
            Term::Lam(x, None, _) => Err(TypeError::new(
                ErrorKind::NotInferable,
                format!("cannot infer the type of the binder `{x}`; add an annotation"),
            )),
            Term::App(f, a) => {
                let ft = self.infer(ctx, f)?;
                match &*self.ev.force(&ft) {
                    Value::Pi(_, dom, cod) => {
                        self.check(ctx, a, dom)?;
                        Ok(self.ev.inst(cod, self.eval(ctx, a)))
                    }
                    _ => Err(located(
                        TypeError::new(
                            ErrorKind::NotAFunction,
                            format!(
                                "applying a term of non-function type {}",
                                self.show(ctx, &ft)
                            ),
                        ),
                        f,
                    )),
                }
            }
            Term::Pair(..) => Err(TypeError::new(
                ErrorKind::NotInferable,
                "cannot infer the type of a pair; add an annotation",
            )),
            Term::Fst(p) | Term::Snd(p) => {
                let pt = self.infer(ctx, p)?;
                match &*self.ev.force(&pt) {
                    Value::Sigma(_, a, b) => {
                        if matches!(t, Term::Fst(_)) {
                            Ok(a.clone())
                        } else {
                            let pv = self.eval(ctx, p);
                            Ok(self.ev.inst(b, self.ev.fst(&pv)))
                        }
                    }
                    _ => Err(located(
                        TypeError::new(
                            ErrorKind::NotAPair,
                            format!(
                                "projecting from a term of non-pair type {}",
                                self.show(ctx, &pt)
                            ),
                        ),
                        p,
                    )),
                }
            }
            Term::Unit => Ok(Rc::new(Value::Universe(0))),
            Term::Star => Ok(Rc::new(Value::Unit)),
            Term::Id(a, x, y) => {
                let n = self.infer_universe(ctx, a)?;
                let av = self.eval(ctx, a);
                self.check(ctx, x, &av)?;
                self.check(ctx, y, &av)?;
                Ok(Rc::new(Value::Universe(n)))
            }
            Term::Refl(x) => {
                let a = self.infer(ctx, x)?;
                let xv = self.eval(ctx, x);
                Ok(Rc::new(Value::Id(a, xv.clone(), xv)))
            }
            Term::J {
                motive,
                base,
                lhs,
                rhs,
                path,
            } => {
                let a = self.infer(ctx, lhs)?;
                self.check(ctx, rhs, &a)?;
                let lv = self.eval(ctx, lhs);
                let rv = self.eval(ctx, rhs);
                self.check(
                    ctx,
                    path,
                    &Rc::new(Value::Id(a.clone(), lv.clone(), rv.clone())),
                )?;
                self.check_motive(ctx, motive, &a, &lv)?;
                let mv = self.eval(ctx, motive);
                let refl = Rc::new(Value::Refl(lv.clone()));
                self.check(ctx, base, &self.ev.apply_all(&mv, [lv, refl]))?;
                Ok(self.ev.apply_all(&mv, [rv, self.eval(ctx, path)]))
            }
            Term::Let(x, ty, v, b) => {
                let (tv, vv) = self.let_binding(ctx, ty, v)?;
                self.infer(&ctx.define(x, tv, vv), b)
            }
            Term::Ann(a, ty) => {
                self.infer_universe(ctx, ty)?;
                let tv = self.eval(ctx, ty);
                self.check(ctx, a, &tv)?;
                Ok(tv)
            }
        }
    }

    fn let_binding(&self, ctx: &Ctx, ty: &Option<Rc<Term>>, v: &Term) -> Result<(V, V), TypeError> {
        let tv = match ty {
            Some(ty) => {
                self.infer_universe(ctx, ty)?;
                let tv = self.eval(ctx, ty);
                self.check(ctx, v, &tv)?;
                tv
            }
            None => self.infer(ctx, v)?,
        };
        Ok((tv, self.eval(ctx, v)))
    }

    /// Checks `motive : (y : A) -> Id A lhs y -> Type n` for some `n`.
    fn check_motive(&self, ctx: &Ctx, motive: &Term, a: &V, lhs: &V) -> Result<(), TypeError> {
        let id_ty = |c: &Ctx| Rc::new(Value::Id(a.clone(), lhs.clone(), var(c.depth())));
        // peel unannotated binders structurally
        let mut m = motive;
        let mut spans = Vec::new();
        while let Term::Loc(s, inner) = m {
            spans.push(*s);
            m = inner;
        }
        let wrap = |e: TypeError| spans.iter().rev().fold(e, |e, s| e.at(*s));
        if let Term::Lam(y, ann_y, body) = m {
            if let Some(ann) = ann_y {
                self.infer_universe(ctx, ann).map_err(wrap)?;
                if !self.ev.sub(ctx.depth(), a, &self.eval(ctx, ann)) {
                    return Err(wrap(self.mismatch(ctx, a, &self.eval(ctx, ann))));
                }
            }
            let c1 = ctx.bind(y, a.clone());
            let mut inner = &**body;
            let mut inner_spans = Vec::new();
            while let Term::Loc(s, i) = inner {
                inner_spans.push(*s);
                inner = i;
            }
            let wrap2 = |e: TypeError| wrap(inner_spans.iter().rev().fold(e, |e, s| e.at(*s)));
            if let Term::Lam(q, ann_q, body) = inner {
                let idv = id_ty(ctx);
                if let Some(ann) = ann_q {
                    self.infer_universe(&c1, ann).map_err(wrap2)?;
                    let av = self.eval(&c1, ann);
                    if !self.ev.sub(c1.depth(), &idv, &av) {
                        return Err(wrap2(self.mismatch(&c1, &idv, &av)));
                    }
                }
                let c2 = c1.bind(q, idv);
                self.infer_universe(&c2, body).map_err(wrap2)?;
                return Ok(());
            }
        }
        let mt = self.infer(ctx, motive)?;
        let d = ctx.depth();
        let ok = match &*self.ev.force(&mt) {
            Value::Pi(_, dom, cod) if self.ev.sub(d, a, dom) => {
                let inner = self.ev.force(&self.ev.inst(cod, var(d)));
                match &*inner {
                    Value::Pi(_, dom2, cod2) if self.ev.sub(d + 1, &id_ty(ctx), dom2) => {
                        is_universe(&self.ev.force(&self.ev.inst(cod2, var(d + 1))))
                    }
                    _ => false,
                }
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(wrap(TypeError::new(
                ErrorKind::Mismatch,
                format!(
                    "path induction motive has type {}, expected a family over {} and its paths",
                    self.show(ctx, &mt),
                    self.show(ctx, a)
                ),
            )))
        }
    }

    fn mismatch(&self, ctx: &Ctx, expected: &V, found: &V) -> TypeError {
        TypeError::new(
            ErrorKind::Mismatch,
            format!(
                "type mismatch: expected {}, found {}",
                self.show(ctx, expected),
                self.show(ctx, found)
            ),
        )
    }

    pub fn check(&self, ctx: &Ctx, t: &Term, ty: &V) -> Result<(), TypeError> {
        match t {
            Term::Loc(span, inner) => self.check(ctx, inner, ty).map_err(|e| e.at(*span)),
            Term::Lam(x, ann, body) => {
                let ty_f = self.ev.force(ty);
                let Value::Pi(_, dom, cod) = &*ty_f else {
                    return Err(TypeError::new(
                        ErrorKind::Mismatch,
                        format!(
                            "expected a term of type {}, found a function",
                            self.show(ctx, ty)
                        ),
                    ));
                };
                if let Some(ann) = ann {
                    self.infer_universe(ctx, ann)?;
                    let av = self.eval(ctx, ann);
                    if !self.ev.sub(ctx.depth(), dom, &av) {
                        return Err(self.mismatch(ctx, dom, &av).at(span_of(ann)));
                    }
                }
                let ext = ctx.bind(x, dom.clone());
                self.check(&ext, body, &self.ev.inst(cod, var(ctx.depth())))
            }
            Term::Pair(a, b) => {
                let ty_f = self.ev.force(ty);
                let Value::Sigma(_, fa, fb) = &*ty_f else {
                    return Err(TypeError::new(
                        ErrorKind::Mismatch,
                        format!(
                            "expected a term of type {}, found a pair",
                            self.show(ctx, ty)
                        ),
                    ));
                };
                self.check(ctx, a, fa)?;
                self.check(ctx, b, &self.ev.inst(fb, self.eval(ctx, a)))
            }
            Term::Let(x, lty, v, b) => {
                let (tv, vv) = self.let_binding(ctx, lty, v)?;
                self.check(&ctx.define(x, tv, vv), b, ty)
            }
            Term::Refl(x) => {
                let ty_f = self.ev.force(ty);
                let Value::Id(a, lhs, rhs) = &*ty_f else {
                    return Err(TypeError::new(
                        ErrorKind::Mismatch,
                        format!(
                            "expected a term of type {}, found a path",
                            self.show(ctx, ty)
                        ),
                    ));
                };
                self.check(ctx, x, a)?;
                let xv = self.eval(ctx, x);
                for end in [lhs, rhs] {
                    if !self.ev.conv(ctx.depth(), &xv, end) {
                        let found = Rc::new(Value::Id(a.clone(), xv.clone(), xv.clone()));
                        return Err(self.mismatch(ctx, ty, &found));
                    }
                }
                Ok(())
            }
            _ => {
                let found = self.infer(ctx, t)?;
                if self.ev.sub(ctx.depth(), &found, ty) {
                    Ok(())
                } else if self.type_in_type() && is_universe(&self.ev.force(ty)) {
                    match &*self.ev.force(&found) {
                        Value::Universe(_) => Ok(()),
                        _ => Err(self.mismatch(ctx, ty, &found)),
                    }
                } else {
                    Err(self.mismatch(ctx, ty, &found))
                }
            }
        }
    }
}

fn is_universe(v: &Value) -> bool {
    matches!(v, Value::Universe(_))
}

/// Pins `e` to the offending subterm when it carries a location.
fn located(e: TypeError, t: &Term) -> TypeError {
    match t {
        Term::Loc(s, _) => e.at(*s),
        _ => e,
    }
}

fn span_of(t: &Term) -> crate::syntax::Span {
    match t {
        Term::Loc(s, _) => *s,
        _ => Default::default(),
    }
}
