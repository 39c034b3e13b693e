//! Runs the numeric configuration checks and prints a CSV report.
//!
//! cargo run --release --example config_checks -- [seed] [samples]

use gw_tower::config::{run_checks, CheckOptions};

fn main() {
    env_logger::init();
    let mut args = std::env::args().skip(1);
    let seed = args.next().map_or(42, |s| s.parse().expect("seed"));
    let samples = args.next().map_or(1000, |s| s.parse().expect("samples"));
    let report = run_checks(&CheckOptions {
        seed,
        samples,
        ..CheckOptions::default()
    });
    print!("{}", report.to_csv());
    println!("# frames re-orthonormalized: {}", report.reorthonormalizations);
    if !report.passed() {
        std::process::exit(1);
    }
}
