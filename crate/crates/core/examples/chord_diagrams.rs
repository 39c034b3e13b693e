//! Counts chord diagrams on an interval and presents them modulo the
//! four-term relation and separated diagrams.
//!
//! cargo run --release --example chord_diagrams -- 6 [paired]

use std::time::Instant;

use gw_tower::chords::{chord_report, enumerate, FourTSigns};

fn main() {
    let mut args = std::env::args().skip(1);
    let max: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(5);
    let signs: FourTSigns = args.next().map(|s| s.parse().unwrap()).unwrap_or_default();
    println!("{}", enumerate(2).iter().map(ToString::to_string).collect::<Vec<_>>().join(" "));
    println!("{:>2} {:>6} {:>5} {:>6} {:>5} {:>8} {:>7}", "m", "diags", "sep", "4T", "rank", "torsion", "secs");
    for m in 1..=max {
        let t = Instant::now();
        let r = chord_report(m, signs);
        let tors: Vec<String> = r.torsion.iter().map(ToString::to_string).collect();
        println!(
            "{:>2} {:>6} {:>5} {:>6} {:>5} {:>8} {:>7.2}",
            m,
            r.diagrams,
            r.sep_count,
            r.fourt_count,
            r.free_rank,
            format!("[{}]", tors.join(",")),
            t.elapsed().as_secs_f64()
        );
    }
}
