//! The Lyndon (Hall) basis of the multilinear free Lie ring, and a bracket
//! rewritten into it.
//!
//! cargo run --example hall_basis -- 4

use std::collections::BTreeMap;

use gw_tower::lie::{multidegree_basis, multilinear_rank, BracketMonomial, Grading, Normalizer};

fn main() {
    let k: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let md: BTreeMap<u32, usize> = (1..=k).map(|l| (l, 1)).collect();
    let basis = multidegree_basis(&md);
    println!("Lie({k}) has rank {}:", multilinear_rank(k as usize));
    for m in &basis {
        println!("  {m}");
    }
    // Neither is a basis monomial; rewrite them, ungraded and with odd
    // generators.
    for text in ["[[2,1],3]", "[1,1]", "[[1,1],1]"] {
        let expr = BracketMonomial::parse(text).unwrap();
        for grading in [Grading::Classical, Grading::OddGenerators] {
            let e = Normalizer::new().with_grading(grading).normalize(&expr).unwrap();
            println!("{grading:?}: {text} = {e}");
        }
    }
}
