//! Prints the axiom manifest of the builtin prelude: one line per axiom tag
//! with the sha256 of its printed type. `--write` refreshes the golden file.

use std::collections::BTreeSet;

use cohtt::cohesion::{self, PreludeFlags};

fn main() {
    let session = match cohesion::load_prelude(PreludeFlags::default(), &BTreeSet::new()) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    };
    let manifest = cohesion::manifest(&session.env).expect("default prelude has every axiom");
    if std::env::args().any(|a| a == "--write") {
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/prelude/manifest.txt");
        std::fs::write(path, &manifest).expect("write manifest");
        eprintln!("wrote {path}");
    }
    print!("{manifest}");
}
