//! Term-building combinators for the library's constructions, checked by
//! the kernel before they are returned.

use std::rc::Rc;

use thiserror::Error;

use crate::kernel::{conv, normalize, shift, Checker, Ctx, GlobalEnv, Name, Term, TypeError};

#[derive(Debug, Clone, Error)]
pub enum BuildError {
    #[error("unbound: {0}")]
    Unbound(String),
    #[error("`{name}` is not a non-dependent function, its type is {ty}")]
    NotAFunction { name: String, ty: String },
    #[error("`{name}` is not a type constant")]
    NotAType { name: String },
    #[error("codomains differ: `{f}` lands in {left}, `{g}` lands in {right}")]
    CodomainMismatch {
        f: String,
        g: String,
        left: String,
        right: String,
    },
    #[error("missing dependency: {0}")]
    MissingDependency(String),
    #[error(transparent)]
    Type(#[from] TypeError),
}

fn lookup<'e>(
    env: &'e GlobalEnv,
    name: &str,
) -> Result<&'e Rc<crate::kernel::GlobalEntry>, BuildError> {
    env.get(name)
        .ok_or_else(|| BuildError::Unbound(name.to_owned()))
}

/// Domain and codomain of a constant of type `A -> B`.
fn arrow_of(env: &GlobalEnv, name: &str) -> Result<(Rc<Term>, Rc<Term>), BuildError> {
    let entry = lookup(env, name)?;
    let split = |t: &Term| match t.strip() {
        Term::Pi(_, a, b) if !b.has_var(0) => Some((a.clone(), shift(b, -1, 0))),
        _ => None,
    };
    split(&entry.ty)
        .or_else(|| split(&normalize(env, &entry.ty)))
        .ok_or_else(|| BuildError::NotAFunction {
            name: name.to_owned(),
            ty: entry.ty.to_string(),
        })
}

fn check_type(env: &GlobalEnv, t: &Term) -> Result<(), BuildError> {
    Checker::new(env).infer_universe(&Ctx::default(), t)?;
    Ok(())
}

fn binder(s: &str) -> Name {
    s.into()
}

/// `Sigma (x : A), Id B (f x) b` for `f : A -> B`.
pub fn build_hfiber(env: &GlobalEnv, f: &str, b: &Term) -> Result<Rc<Term>, BuildError> {
    let (a, cod) = arrow_of(env, f)?;
    crate::kernel::check_closed(env, b, &cod)?;
    let b = Rc::new(b.clone());
    let fx = Term::app(Term::constant(f), Term::var(0));
    let t = Rc::new(Term::Sigma(
        binder("x"),
        a,
        Term::id(shift(&cod, 1, 0), fx, shift(&b, 1, 0)),
    ));
    check_type(env, &t)?;
    Ok(t)
}

/// `Sigma (x : A), Sigma (y : B), Id C (f x) (g y)` for `f : A -> C`, `g : B -> C`.
pub fn build_fiber_product(env: &GlobalEnv, f: &str, g: &str) -> Result<Rc<Term>, BuildError> {
    let (a, c) = arrow_of(env, f)?;
    let (b, c2) = arrow_of(env, g)?;
    if !conv(env, &c, &c2) {
        return Err(BuildError::CodomainMismatch {
            f: f.to_owned(),
            g: g.to_owned(),
            left: c.to_string(),
            right: c2.to_string(),
        });
    }
    let fx = Term::app(Term::constant(f), Term::var(1));
    let gy = Term::app(Term::constant(g), Term::var(0));
    let t = Rc::new(Term::Sigma(
        binder("x"),
        a,
        Rc::new(Term::Sigma(
            binder("y"),
            shift(&b, 1, 0),
            Term::id(shift(&c, 2, 0), fx, gy),
        )),
    ));
    check_type(env, &t)?;
    Ok(t)
}

/// The concretization of a type constant `X`, as the image of its unit,
/// together with the map `X -> conc X`.
pub fn build_conc(env: &GlobalEnv, x: &str) -> Result<(Rc<Term>, Rc<Term>), BuildError> {
    let entry = lookup(env, x)?;
    if !matches!(normalize(env, &entry.ty).strip(), Term::Universe(0)) {
        return Err(BuildError::NotAType { name: x.to_owned() });
    }
    for dep in ["Sharp", "eta", "PTrunc", "ptrunc_in"] {
        if !env.contains(dep) {
            return Err(BuildError::MissingDependency(dep.to_owned()));
        }
    }
    let xt = Term::constant(x);
    let sharp_x = Term::app(Term::constant("Sharp"), xt.clone());
    let eta_x = Term::app(Term::constant("eta"), xt.clone());
    // hfiber of eta over `y`
    let fiber = |y: Rc<Term>| {
        Rc::new(Term::Sigma(
            binder("x"),
            xt.clone(),
            Term::id(
                sharp_x.clone(),
                Term::app(eta_x.clone(), Term::var(0)),
                shift(&y, 1, 0),
            ),
        ))
    };
    let object = Rc::new(Term::Sigma(
        binder("y"),
        sharp_x.clone(),
        Term::app(Term::constant("PTrunc"), fiber(Term::var(0))),
    ));
    let ex = Term::app(eta_x.clone(), Term::var(0));
    let map = Rc::new(Term::Lam(
        binder("x"),
        Some(xt.clone()),
        Rc::new(Term::Pair(
            ex.clone(),
            Term::apps(
                Term::constant("ptrunc_in"),
                [
                    fiber(ex.clone()),
                    Rc::new(Term::Pair(Term::var(0), Rc::new(Term::Refl(ex)))),
                ],
            ),
        )),
    ));
    check_type(env, &object)?;
    crate::kernel::check_closed(env, &map, &Term::arrow(xt, object.clone()))?;
    Ok((object, map))
}
