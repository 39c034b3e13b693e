//! Two knots shrunk into disjoint intervals, and the configuration sampled
//! from the result next to the one assembled from the pieces.
//!
//! cargo run --example little_intervals

use gw_tower::config::{act_on_knots, act_on_samples, AlignedMap, FramedKnot, IntervalFamily};

fn main() {
    let ls = IntervalFamily::new(&[(-0.8, -0.2), (0.1, 0.9)]).unwrap();
    let a = FramedKnot::trefoil();
    let b = FramedKnot::straight();
    let joined = act_on_knots(&ls, &[a.clone(), b.clone()]).unwrap();
    joined.validate().unwrap();
    let t = [-0.9, -0.5, -0.5, 0.0, 0.4, 0.95];
    let direct = joined.evaluate(&t).unwrap();
    let ea = |s: &[f64]| a.evaluate(s);
    let eb = |s: &[f64]| b.evaluate(s);
    let phis: [&AlignedMap; 2] = [&ea, &eb];
    let assembled = act_on_samples(&ls, &phis, &t).unwrap();
    for i in 1..=t.len() {
        let x = direct.point(i);
        println!("t={:+.2}  x=({:+.4}, {:+.4}, {:+.4})", t[i - 1], x.x, x.y, x.z);
    }
    println!("distance between the two configurations: {:e}", direct.distance(&assembled));
}
