//! The 0-line of E² next to chord diagrams modulo 4T and separated
//! diagrams, column by column.
//!
//! cargo run --release --example e2_zero_line -- 5 [classical]

use std::time::Instant;

use gw_tower::braid::{Convention, MemoryPresentations};
use gw_tower::chords::ChordOptions;
use gw_tower::tower::{verify_e2comp_with, TowerOptions};

fn main() {
    env_logger::init();
    let max: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5);
    let convention = std::env::args().nth(2).map_or(Ok(Convention::default()), |s| s.parse()).expect("convention");
    let opts = TowerOptions {
        convention,
        ..TowerOptions::default()
    };
    let mut src = MemoryPresentations::default();
    for m in 2..=max {
        let t = Instant::now();
        let r = verify_e2comp_with(&mut src, opts, ChordOptions::default(), m).unwrap();
        println!("{} ({:.2}s)", serde_json::to_string(&r).unwrap(), t.elapsed().as_secs_f64());
    }
}
