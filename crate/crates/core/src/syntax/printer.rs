use super::{SurfaceTerm, TermKind};

const TOP: u8 = 0;
const PROD: u8 = 1;
const APP: u8 = 2;
const ATOM: u8 = 3;

/// Prints a term in concrete syntax. The output parses back to a
/// structurally equal term.
pub fn print_term(t: &SurfaceTerm) -> String {
    let mut out = String::new();
    go(t, TOP, &mut out);
    out
}

fn level(t: &SurfaceTerm) -> u8 {
    match &*t.kind {
        TermKind::Lam { .. } | TermKind::Let { .. } | TermKind::Pi { .. } => TOP,
        TermKind::Sigma { binder, .. } if binder != "_" => TOP,
        TermKind::Sigma { .. } => PROD,
        TermKind::App(..)
        | TermKind::Fst(_)
        | TermKind::Snd(_)
        | TermKind::Refl(_)
        | TermKind::Id(..)
        | TermKind::J { .. }
        | TermKind::Universe(_) => APP,
        TermKind::Var { .. }
        | TermKind::Unit
        | TermKind::Star
        | TermKind::Pair(..)
        | TermKind::Ann(..) => ATOM,
    }
}

fn go(t: &SurfaceTerm, ctx: u8, out: &mut String) {
    if level(t) < ctx {
        out.push('(');
        go(t, TOP, out);
        out.push(')');
        return;
    }
    match &*t.kind {
        TermKind::Var { name, shift } => {
            out.push_str(name);
            if *shift > 0 {
                out.push('@');
                out.push_str(&shift.to_string());
            }
        }
        TermKind::Universe(n) => {
            out.push_str("Type ");
            out.push_str(&n.to_string());
        }
        TermKind::Unit => out.push_str("Unit"),
        TermKind::Star => out.push_str("tt"),
        TermKind::Lam { binder, ann, body } => {
            out.push_str("fun ");
            match ann {
                Some(a) => {
                    out.push('(');
                    out.push_str(binder);
                    out.push_str(" : ");
                    go(a, TOP, out);
                    out.push(')');
                }
                None => out.push_str(binder),
            }
            out.push_str(" => ");
            go(body, TOP, out);
        }
        TermKind::Let {
            binder,
            ty,
            value,
            body,
        } => {
            out.push_str("let ");
            out.push_str(binder);
            if let Some(ty) = ty {
                out.push_str(" : ");
                go(ty, TOP, out);
            }
            out.push_str(" := ");
            go(value, TOP, out);
            out.push_str(" in ");
            go(body, TOP, out);
        }
        TermKind::Pi {
            binder,
            domain,
            codomain,
        } => {
            if binder == "_" {
                // an annotation in domain position would read as a binder
                if matches!(&*domain.kind, TermKind::Ann(..)) {
                    out.push('(');
                    go(domain, TOP, out);
                    out.push(')');
                } else {
                    go(domain, PROD, out);
                }
            } else {
                out.push('(');
                out.push_str(binder);
                out.push_str(" : ");
                go(domain, TOP, out);
                out.push(')');
            }
            out.push_str(" -> ");
            go(codomain, TOP, out);
        }
        TermKind::Sigma {
            binder,
            first,
            second,
        } => {
            if binder == "_" {
                go(first, APP, out);
                out.push_str(" * ");
                go(second, PROD, out);
            } else {
                out.push_str("Sigma (");
                out.push_str(binder);
                out.push_str(" : ");
                go(first, TOP, out);
                out.push_str("), ");
                go(second, TOP, out);
            }
        }
        TermKind::App(f, a) => {
            go(f, APP, out);
            out.push(' ');
            go(a, ATOM, out);
        }
        TermKind::Fst(a) | TermKind::Snd(a) | TermKind::Refl(a) => {
            out.push_str(match &*t.kind {
                TermKind::Fst(_) => "fst ",
                TermKind::Snd(_) => "snd ",
                _ => "refl ",
            });
            go(a, ATOM, out);
        }
        TermKind::Id(a, x, y) => {
            out.push_str("Id");
            for arg in [a, x, y] {
                out.push(' ');
                go(arg, ATOM, out);
            }
        }
        TermKind::J {
            motive,
            base,
            lhs,
            rhs,
            path,
        } => {
            out.push('J');
            for arg in [motive, base, lhs, rhs, path] {
                out.push(' ');
                go(arg, ATOM, out);
            }
        }
        TermKind::Pair(a, b) => {
            out.push('(');
            go(a, TOP, out);
            out.push_str(", ");
            go(b, TOP, out);
            out.push(')');
        }
        TermKind::Ann(a, ty) => {
            out.push('(');
            go(a, TOP, out);
            out.push_str(" : ");
            go(ty, TOP, out);
            out.push(')');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse_term, Span};
    use super::*;

    fn v(name: &str) -> SurfaceTerm {
        SurfaceTerm::new(
            TermKind::Var {
                name: name.to_owned(),
                shift: 0,
            },
            Span::default(),
        )
    }

    #[test]
    fn variable() {
        assert_eq!(print_term(&v("x")), "x");
    }

    #[test]
    fn pi_former() {
        let t = SurfaceTerm::new(
            TermKind::Pi {
                binder: "x".to_owned(),
                domain: v("A"),
                codomain: v("A"),
            },
            Span::default(),
        );
        assert_eq!(print_term(&t), "(x : A) -> A");
    }

    #[test]
    fn round_trips() {
        for src in [
            "fun (A : Type 0) (x : A) => x",
            "(A -> B) -> A * B * C",
            "(A * B) * C",
            "((a : A)) -> B",
            "f (g x) (fst p) (snd p y)",
            "J (fun y q => Id A a y) (refl a) a b p",
            "Sigma (x : A), Id (A -> A) (fun z => x) (fun z => z)",
            "let x : A := (a, b) in f@2 x (Type 3) Unit tt",
            "fst (fun x => x)",
            "(fun x => x) a",
            "Id (Sigma (x : A), B x) (a, b) (a, b)",
        ] {
            let t = parse_term(src).unwrap();
            let printed = print_term(&t);
            let again = parse_term(&printed).unwrap();
            assert_eq!(t, again, "{src} printed as {printed}");
        }
    }
}
