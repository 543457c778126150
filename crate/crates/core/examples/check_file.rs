//! Checks a `.cht` file on top of the builtin prelude and prints each
//! declaration with its type, or the located error.
//!
//! `cargo run --example check_file -- examples/ext_diagram.cht`

use std::collections::BTreeSet;
use std::path::Path;

use cohtt::cohesion::{load_prelude, PreludeFlags};
use cohtt::kernel::Origin;
use cohtt::loader::Embedded;

fn main() {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/examples/codiscrete.cht").to_owned()
    });
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| {
        eprintln!("cannot read {path}: {e}");
        std::process::exit(2);
    });
    let module = Path::new(&path)
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("main");
    let mut session =
        load_prelude(PreludeFlags::default(), &BTreeSet::new()).expect("builtin prelude loads");
    let base = session.records.len();
    if let Err(e) = session.load_text(module, &text, Origin::User, &Embedded) {
        eprintln!("{}", e.render_as(&path, Some(&text)));
        std::process::exit(1);
    }
    for r in &session.records[base..] {
        let ty = &session
            .env
            .get(&r.name)
            .expect("checked declarations are bound")
            .ty;
        println!("{} : {ty}", r.name);
    }
}
