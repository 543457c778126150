//! Runs the reflexive-graph model checks and prints the section table.
//!
//! `cargo run --release --example model_verify -- [max_vertices] [max_extra_edges] [seed]`

use cohtt::model::{verify_cohesion, VerifyParams};

fn main() {
    let mut args = std::env::args()
        .skip(1)
        .map(|a| a.parse::<u64>().expect("numeric argument"));
    let mut params = VerifyParams::default();
    if let Some(n) = args.next() {
        params.max_vertices = n as usize;
    }
    if let Some(e) = args.next() {
        params.max_extra_edges = e as usize;
    }
    if let Some(s) = args.next() {
        params.seed = s;
    }
    match verify_cohesion(&params) {
        Ok(report) => {
            print!("{}", report.render_table());
            std::process::exit(if report.passed { 0 } else { 1 });
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
