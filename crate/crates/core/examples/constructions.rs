//! Builds homotopy fibers, fiber products and concretizations over a small
//! diagram of postulated types, and prints their normal forms.
//!
//! `cargo run --example constructions`

use std::collections::BTreeSet;

use cohtt::cohesion::{load_prelude, PreludeFlags};
use cohtt::kernel::{normalize, Origin, Term};
use cohtt::loader::Embedded;
use cohtt::stdlib::{build_conc, build_fiber_product, build_hfiber};

const DIAGRAM: &str = "\
axiom A : Type 0
axiom B : Type 0
axiom C : Type 0
axiom f : A -> C
axiom g : B -> C
axiom c : C
";

fn main() {
    let mut session =
        load_prelude(PreludeFlags::default(), &BTreeSet::new()).expect("builtin prelude loads");
    session
        .load_text("diagram", DIAGRAM, Origin::User, &Embedded)
        .expect("diagram checks");
    let env = &session.env;
    let hfiber = build_hfiber(env, "f", &Term::Const("c".into(), 0)).expect("f : A -> C");
    println!("hfiber f c    = {}", normalize(env, &hfiber));
    let product = build_fiber_product(env, "f", "g").expect("f and g share a codomain");
    println!("A x_C B       = {}", normalize(env, &product));
    let (conc, unit) = build_conc(env, "A").expect("A is a type");
    println!("conc A        = {}", normalize(env, &conc));
    println!("A -> conc A   = {}", normalize(env, &unit));
    if let Err(e) = build_fiber_product(env, "f", "c") {
        println!("rejected: {e}");
    }
}
