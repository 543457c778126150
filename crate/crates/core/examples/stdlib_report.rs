//! Checks the whole standard library and prints the status of every entry.
//! `--write-golden` refreshes the golden status file used by the tests.

use std::collections::BTreeSet;

use cohtt::cohesion::PreludeFlags;
use cohtt::stdlib;

fn main() {
    let (_, report) = stdlib::stdlib_report(PreludeFlags::default(), &BTreeSet::new());
    print!("{}", report.render_table());
    if std::env::args().any(|a| a == "--write-golden") {
        let path = concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/tests/golden/stdlib_status.txt"
        );
        std::fs::write(path, report.status_lines()).expect("write golden");
        eprintln!("wrote {path}");
    }
    std::process::exit(if report.release_ready() { 0 } else { 1 });
}
