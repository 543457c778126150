//! Metatheory of the kernel on generated well-typed terms.
//!
//! Terms come from a type-directed generator over a small signature (a base
//! type `B` with `b0 : B` and `bs : B -> B`), seeded by proptest. Every case
//! draws a fresh closed term of a fresh type; redexes (beta, projections,
//! J on refl, let) are generated on purpose so normalization has work to do.

use std::rc::Rc;

use cohtt::kernel::{check_closed, conv, normalize, shift, GlobalEnv, Term};
use proptest::prelude::*;

mod common;
use common::gen::{env, subst, Gen, Ty};

thread_local! {
    static ENV: GlobalEnv = env();
}

fn with_env<R>(f: impl FnOnce(&GlobalEnv) -> R) -> R {
    ENV.with(f)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn generated_terms_check(seed in any::<u64>()) {
        with_env(|env| {
            let (t, ty) = Gen::new(seed).closed();
            prop_assert!(check_closed(env, &t, &ty.term()).is_ok(), "{t} : {}", ty.term());
            Ok(())
        })?;
    }

    #[test]
    fn normalize_is_idempotent(seed in any::<u64>()) {
        with_env(|env| {
            let (t, _) = Gen::new(seed).closed();
            let n = normalize(env, &t);
            prop_assert_eq!(normalize(env, &n), n);
            Ok(())
        })?;
    }

    #[test]
    fn subject_reduction(seed in any::<u64>()) {
        with_env(|env| {
            let (t, ty) = Gen::new(seed).closed();
            let n = normalize(env, &t);
            prop_assert!(check_closed(env, &n, &ty.term()).is_ok(), "{t} ~> {n}");
            Ok(())
        })?;
    }

    #[test]
    fn conv_is_an_equivalence(seed in any::<u64>(), other in any::<u64>()) {
        with_env(|env| {
            let (a, ty) = Gen::new(seed).closed();
            let b = normalize(env, &a);
            // a second term of the same type, which may or may not be equal
            let mut g = Gen::new(other);
            let c = g.term(&mut Vec::new(), &ty, 4);
            prop_assert!(conv(env, &a, &a));
            prop_assert!(conv(env, &a, &b) && conv(env, &b, &a));
            prop_assert_eq!(conv(env, &a, &c), conv(env, &c, &a));
            prop_assert_eq!(conv(env, &b, &c), conv(env, &a, &c));
            Ok(())
        })?;
    }

    #[test]
    fn beta_matches_substitution(seed in any::<u64>()) {
        with_env(|env| {
            let mut g = Gen::new(seed);
            let a = g.small_ty(1);
            let b = g.ty(1);
            let mut ctx = vec![a.clone()];
            let body = g.term(&mut ctx, &b, 3);
            let arg = g.term(&mut Vec::new(), &a, 3);
            let lam = Rc::new(Term::Lam("x".into(), Some(a.term()), body.clone()));
            let redex = Term::app(lam, arg.clone());
            prop_assert_eq!(normalize(env, &redex), normalize(env, &subst(&body, 0, &arg)));
            Ok(())
        })?;
    }

    #[test]
    fn j_on_refl_is_the_base(seed in any::<u64>()) {
        with_env(|env| {
            let mut g = Gen::new(seed);
            let a = g.small_ty(1);
            let x = g.term(&mut Vec::new(), &a, 2);
            // motive depends on the path: fun y q => Id (Id A x y) q q
            let motive = Rc::new(Term::Lam("y".into(), None, Rc::new(Term::Lam("q".into(), None,
                Term::id(Term::id(shift(&a.term(), 2, 0), shift(&x, 2, 0), Term::var(1)), Term::var(0), Term::var(0))))));
            let base = Rc::new(Term::Refl(Rc::new(Term::Refl(x.clone()))));
            let lhs = Rc::new(Term::Ann(x.clone(), a.term()));
            let j = Rc::new(Term::J { motive, base: base.clone(), lhs, rhs: x.clone(), path: Rc::new(Term::Refl(x.clone())) });
            let want = Term::id(Term::id(a.term(), x.clone(), x.clone()), Rc::new(Term::Refl(x.clone())), Rc::new(Term::Refl(x)));
            prop_assert!(check_closed(env, &j, &want).is_ok());
            prop_assert_eq!(normalize(env, &j), normalize(env, &base));
            Ok(())
        })?;
    }

    #[test]
    fn eta_for_functions_and_pairs(seed in any::<u64>()) {
        with_env(|env| {
            let mut g = Gen::new(seed);
            let (a, b) = (g.small_ty(1), g.small_ty(1));
            let f = g.term(&mut Vec::new(), &Ty::Arrow(Box::new(a.clone()), Box::new(b.clone())), 3);
            let expanded = Rc::new(Term::Lam("x".into(), Some(a.term()), Term::app(shift(&f, 1, 0), Term::var(0))));
            prop_assert!(conv(env, &f, &expanded));
            let p_ty = Ty::Prod(Box::new(a), Box::new(b));
            let p = Rc::new(Term::Ann(g.term(&mut Vec::new(), &p_ty, 3), p_ty.term()));
            let pair = Rc::new(Term::Pair(Rc::new(Term::Fst(p.clone())), Rc::new(Term::Snd(p.clone()))));
            prop_assert!(conv(env, &p, &pair));
            Ok(())
        })?;
    }
}

#[test]
fn neutral_eta_oracles() {
    with_env(|env| {
        let bs = Term::constant("bs");
        let expanded = Rc::new(Term::Lam(
            "x".into(),
            Some(Term::constant("B")),
            Term::app(bs.clone(), Term::var(0)),
        ));
        assert!(conv(env, &bs, &expanded));
        assert!(!conv(
            env,
            &bs,
            &Rc::new(Term::Lam("x".into(), None, Term::constant("b0")))
        ));
        // no eta for Unit: distinct neutrals of type Unit stay apart
        assert!(!conv(env, &Rc::new(Term::Star), &Term::constant("b0")));
    });
}

#[test]
fn generator_covers_every_redex_shape() {
    let mut seen = [false; 5];
    for seed in 0..400 {
        let (t, _) = Gen::new(seed).closed();
        let mut stack = vec![t];
        while let Some(t) = stack.pop() {
            match &*t {
                Term::App(f, a) => {
                    if matches!(&**f, Term::Ann(..)) {
                        seen[0] = true;
                    }
                    stack.extend([f.clone(), a.clone()]);
                }
                Term::Fst(p) => {
                    seen[1] = true;
                    stack.push(p.clone());
                }
                Term::Snd(p) => {
                    seen[2] = true;
                    stack.push(p.clone());
                }
                Term::J { base, .. } => {
                    seen[3] = true;
                    stack.push(base.clone());
                }
                Term::Let(_, _, v, b) => {
                    seen[4] = true;
                    stack.extend([v.clone(), b.clone()]);
                }
                Term::Lam(_, _, b) | Term::Ann(b, _) | Term::Refl(b) => stack.push(b.clone()),
                Term::Pair(a, b) => stack.extend([a.clone(), b.clone()]),
                _ => {}
            }
        }
    }
    assert_eq!(seen, [true; 5]);
}
