//! The trusted core: terms, evaluation, conversion and type checking.

mod check;
mod delab;
mod elab;
mod env;
mod error;
mod term;
mod value;

use std::rc::Rc;

pub use check::{Checker, Ctx};
pub use delab::delab;
pub use elab::elaborate;
pub use env::{GlobalEntry, GlobalEnv, KernelOptions, Origin};
pub use error::{ErrorKind, TypeError};
pub use term::{shift, Name, Term};
pub use value::{eta_contract, var, Closure, Elim, Env, Eval, Head, Value, V};

use crate::syntax::{Decl, SurfaceTerm};

/// Checks a declaration and appends it to `env`.
pub fn check_decl(
    env: &mut GlobalEnv,
    decl: &Decl,
    origin: Origin,
    source: Option<&str>,
) -> Result<(), TypeError> {
    if env.contains(&decl.name) {
        return Err(TypeError::new(
            ErrorKind::Duplicate,
            format!("`{}` is already declared", decl.name),
        )
        .at(decl.name_span));
    }
    let ty = elaborate(env, &[], &decl.ty)?;
    let body = decl
        .body
        .as_ref()
        .map(|b| elaborate(env, &[], b))
        .transpose()?;
    let ck = Checker::new(env);
    let ctx = Ctx::default();
    ck.infer_universe(&ctx, &ty)
        .map_err(|e| e.at(decl.ty.span))?;
    if let Some(body) = &body {
        let tv = ck.eval(&ctx, &ty);
        ck.check(&ctx, body, &tv)?;
    }
    env.push(GlobalEntry {
        name: decl.name.as_str().into(),
        ty,
        body,
        origin,
        doc: decl.doc.clone(),
        source: source.map(str::to_owned),
        span: decl.span,
    });
    Ok(())
}

/// Adds a postulate with an already-elaborated type, checking the type.
pub fn add_postulate(
    env: &mut GlobalEnv,
    name: &str,
    ty: Rc<Term>,
    origin: Origin,
) -> Result<(), TypeError> {
    if env.contains(name) {
        return Err(TypeError::new(
            ErrorKind::Duplicate,
            format!("`{name}` is already declared"),
        ));
    }
    Checker::new(env).infer_universe(&Ctx::default(), &ty)?;
    env.push(GlobalEntry {
        name: name.into(),
        ty,
        body: None,
        origin,
        doc: None,
        source: None,
        span: Default::default(),
    });
    Ok(())
}

/// Elaborates and infers a closed term, returning it with its type.
pub fn infer_closed(env: &GlobalEnv, t: &SurfaceTerm) -> Result<(Rc<Term>, Rc<Term>), TypeError> {
    let core = elaborate(env, &[], t)?;
    let ck = Checker::new(env);
    let ty = ck.infer(&Ctx::default(), &core)?;
    Ok((core, ck.ev.quote(0, &ty, false)))
}

/// Checks a closed term against a closed type.
pub fn check_closed(env: &GlobalEnv, t: &Term, ty: &Term) -> Result<(), TypeError> {
    let ck = Checker::new(env);
    let ctx = Ctx::default();
    ck.infer_universe(&ctx, ty)?;
    let tv = ck.eval(&ctx, ty);
    ck.check(&ctx, t, &tv)
}

/// Full β-normal form with all definitions unfolded.
pub fn normalize(env: &GlobalEnv, t: &Term) -> Rc<Term> {
    let ev = Eval::new(env);
    ev.quote(0, &ev.eval(&Env::default(), 0, t), true)
}

/// Definitional equality of closed terms.
pub fn conv(env: &GlobalEnv, a: &Term, b: &Term) -> bool {
    let ev = Eval::new(env);
    let e = Env::default();
    ev.conv(0, &ev.eval(&e, 0, a), &ev.eval(&e, 0, b))
}
