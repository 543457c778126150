//! Elaborates a closed expression against the builtin prelude and prints its
//! type and normal form.
//!
//! `cargo run --example normalize_expr -- "sharp_map Unit Unit (fun x => x)"`

use std::collections::BTreeSet;

use cohtt::cohesion::{load_prelude, PreludeFlags};
use cohtt::kernel::{infer_closed, normalize};
use cohtt::syntax::parse_term;

fn main() {
    let src = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "(fun (A : Type 0) (a : A) => eta A a) Unit tt".to_owned());
    let session =
        load_prelude(PreludeFlags::default(), &BTreeSet::new()).expect("builtin prelude loads");
    let term = parse_term(&src).unwrap_or_else(|e| {
        eprintln!("parse error: {e}");
        std::process::exit(1);
    });
    match infer_closed(&session.env, &term) {
        Ok((t, ty)) => {
            println!("{src}");
            println!("  : {ty}");
            println!("  ~> {}", normalize(&session.env, &t));
        }
        Err(e) => {
            eprintln!("type error: {e}");
            std::process::exit(1);
        }
    }
}
