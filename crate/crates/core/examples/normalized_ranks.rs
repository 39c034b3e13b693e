//! Ranks of normalized homotopy lattices of configuration spaces, next to
//! the count predicted by the cube of wedges of spheres.
//!
//! cargo run --release --example normalized_ranks -- 6

use std::time::Instant;

use gw_tower::braid::{hilton_rank, npi_free};

fn main() {
    let max: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5);
    println!("{:>3} {:>3} {:>9} {:>9} {:>6} {:>6} {:>8}", "n", "len", "ambient", "relators", "rank", "cube", "secs");
    for n in 2..=max {
        for length in n - 1..=n {
            if length > max - 1 && n == max {
                continue;
            }
            let t = Instant::now();
            let p = npi_free(n, length);
            println!(
                "{:>3} {:>3} {:>9} {:>9} {:>6} {:>6} {:>8.2}",
                n,
                length,
                p.ambient.len(),
                p.relators.len(),
                p.presentation().to_string(),
                hilton_rank(n, length),
                t.elapsed().as_secs_f64()
            );
        }
    }
}
