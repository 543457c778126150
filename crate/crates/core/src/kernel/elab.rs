//! Scope resolution: surface terms to core terms.

use std::rc::Rc;

use super::env::GlobalEnv;
use super::error::{ErrorKind, TypeError};
use super::term::{Name, Term};
use crate::syntax::{SurfaceTerm, TermKind};

/// Resolves names against `locals` (innermost last) and then the globals.
/// Every node of the result is wrapped in its source location.
pub fn elaborate(
    globals: &GlobalEnv,
    locals: &[Name],
    t: &SurfaceTerm,
) -> Result<Rc<Term>, TypeError> {
    let mut scope: Vec<Name> = locals.to_vec();
    go(globals, &mut scope, t)
}

fn bind(
    globals: &GlobalEnv,
    scope: &mut Vec<Name>,
    x: &str,
    t: &SurfaceTerm,
) -> Result<Rc<Term>, TypeError> {
    scope.push(x.into());
    let r = go(globals, scope, t);
    scope.pop();
    r
}

fn go(globals: &GlobalEnv, scope: &mut Vec<Name>, t: &SurfaceTerm) -> Result<Rc<Term>, TypeError> {
    let sub = |scope: &mut Vec<Name>, s: &SurfaceTerm| go(globals, scope, s);
    let core = match &*t.kind {
        TermKind::Var { name, shift } => {
            if let Some(pos) = scope.iter().rposition(|n| **n == **name) {
                if *shift != 0 {
                    return Err(TypeError::new(
                        ErrorKind::Displacement,
                        format!("displacement on local variable `{name}`"),
                    )
                    .at(t.span));
                }
                Term::Var(scope.len() - 1 - pos)
            } else if globals.contains(name) {
                Term::Const(name.as_str().into(), *shift)
            } else {
                return Err(
                    TypeError::new(ErrorKind::Unbound, format!("unbound: {name}")).at(t.span),
                );
            }
        }
        TermKind::Universe(n) => Term::Universe(*n),
        TermKind::Unit => Term::Unit,
        TermKind::Star => Term::Star,
        TermKind::Lam { binder, ann, body } => {
            let ann = ann.as_ref().map(|a| sub(scope, a)).transpose()?;
            Term::Lam(
                binder.as_str().into(),
                ann,
                bind(globals, scope, binder, body)?,
            )
        }
        TermKind::Pi {
            binder,
            domain,
            codomain,
        } => Term::Pi(
            binder.as_str().into(),
            sub(scope, domain)?,
            bind(globals, scope, binder, codomain)?,
        ),
        TermKind::Sigma {
            binder,
            first,
            second,
        } => Term::Sigma(
            binder.as_str().into(),
            sub(scope, first)?,
            bind(globals, scope, binder, second)?,
        ),
        TermKind::App(f, a) => Term::App(sub(scope, f)?, sub(scope, a)?),
        TermKind::Pair(a, b) => Term::Pair(sub(scope, a)?, sub(scope, b)?),
        TermKind::Fst(a) => Term::Fst(sub(scope, a)?),
        TermKind::Snd(a) => Term::Snd(sub(scope, a)?),
        TermKind::Refl(a) => Term::Refl(sub(scope, a)?),
        TermKind::Id(a, x, y) => Term::Id(sub(scope, a)?, sub(scope, x)?, sub(scope, y)?),
        TermKind::J {
            motive,
            base,
            lhs,
            rhs,
            path,
        } => Term::J {
            motive: sub(scope, motive)?,
            base: sub(scope, base)?,
            lhs: sub(scope, lhs)?,
            rhs: sub(scope, rhs)?,
            path: sub(scope, path)?,
        },
        TermKind::Let {
            binder,
            ty,
            value,
            body,
        } => {
            let ty = ty.as_ref().map(|a| sub(scope, a)).transpose()?;
            let value = sub(scope, value)?;
            Term::Let(
                binder.as_str().into(),
                ty,
                value,
                bind(globals, scope, binder, body)?,
            )
        }
        TermKind::Ann(a, ty) => Term::Ann(sub(scope, a)?, sub(scope, ty)?),
    };
    Ok(Rc::new(Term::Loc(t.span, Rc::new(core))))
}
