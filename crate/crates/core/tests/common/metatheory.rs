//! Every kernel oracle on one seed, for targets that count cases themselves.

use std::rc::Rc;

use cohtt::kernel::{check_closed, conv, normalize, shift, GlobalEnv, Term};

use super::gen::{subst, Gen, Ty};

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

/// Typing, idempotence, subject reduction, conv as an equivalence, and the
/// beta, J and eta oracles on terms drawn from `seed`.
pub fn check_seed(env: &GlobalEnv, seed: u64) -> Result<(), String> {
    let mut g = Gen::new(seed);
    let (t, ty) = g.closed();
    let ty_t = ty.term();
    ensure(check_closed(env, &t, &ty_t).is_ok(), || {
        format!("ill-typed: {t} : {ty_t}")
    })?;
    let n = normalize(env, &t);
    ensure(normalize(env, &n) == n, || format!("not idempotent: {t}"))?;
    ensure(check_closed(env, &n, &ty_t).is_ok(), || {
        format!("type lost: {t} ~> {n}")
    })?;
    let c = g.term(&mut Vec::new(), &ty, 4);
    ensure(
        conv(env, &t, &t) && conv(env, &t, &n) && conv(env, &n, &t),
        || format!("conv: {t}"),
    )?;
    ensure(conv(env, &t, &c) == conv(env, &c, &t), || {
        format!("conv asymmetric: {t} / {c}")
    })?;
    ensure(conv(env, &n, &c) == conv(env, &t, &c), || {
        format!("conv not transitive: {t} / {c}")
    })?;

    let a = g.small_ty(1);
    let b = g.ty(1);
    let body = g.term(&mut vec![a.clone()], &b, 3);
    let arg = g.term(&mut Vec::new(), &a, 3);
    let lam = Rc::new(Term::Lam("x".into(), Some(a.term()), body.clone()));
    let redex = Term::app(lam, arg.clone());
    ensure(
        normalize(env, &redex) == normalize(env, &subst(&body, 0, &arg)),
        || format!("beta: {redex}"),
    )?;

    let x = g.term(&mut Vec::new(), &a, 2);
    let motive = Rc::new(Term::Lam(
        "y".into(),
        None,
        Rc::new(Term::Lam(
            "q".into(),
            None,
            Term::id(
                Term::id(shift(&a.term(), 2, 0), shift(&x, 2, 0), Term::var(1)),
                Term::var(0),
                Term::var(0),
            ),
        )),
    ));
    let base = Rc::new(Term::Refl(Rc::new(Term::Refl(x.clone()))));
    let j = Rc::new(Term::J {
        motive,
        base: base.clone(),
        lhs: Rc::new(Term::Ann(x.clone(), a.term())),
        rhs: x.clone(),
        path: Rc::new(Term::Refl(x.clone())),
    });
    let refl_x = Rc::new(Term::Refl(x.clone()));
    let want = Term::id(Term::id(a.term(), x.clone(), x), refl_x.clone(), refl_x);
    ensure(check_closed(env, &j, &want).is_ok(), || {
        format!("J ill-typed: {j}")
    })?;
    ensure(normalize(env, &j) == normalize(env, &base), || {
        format!("J on refl: {j}")
    })?;

    let b = g.small_ty(1);
    let f = g.term(
        &mut Vec::new(),
        &Ty::Arrow(Box::new(a.clone()), Box::new(b.clone())),
        3,
    );
    let expanded = Rc::new(Term::Lam(
        "x".into(),
        Some(a.term()),
        Term::app(shift(&f, 1, 0), Term::var(0)),
    ));
    ensure(conv(env, &f, &expanded), || format!("function eta: {f}"))?;
    let p_ty = Ty::Prod(Box::new(a), Box::new(b));
    let p = Rc::new(Term::Ann(g.term(&mut Vec::new(), &p_ty, 3), p_ty.term()));
    let pair = Rc::new(Term::Pair(
        Rc::new(Term::Fst(p.clone())),
        Rc::new(Term::Snd(p.clone())),
    ));
    ensure(conv(env, &p, &pair), || format!("pair eta: {p}"))
}
