//! Evaluates the sample trefoil at a few times, collided ones included, and
//! optionally writes the knot as JSON.
//!
//! cargo run --example knot_evaluation -- [out.json]

use gw_tower::config::FramedKnot;

fn main() {
    let k = FramedKnot::trefoil();
    k.validate().expect("the sample knot is valid");
    if let Some(path) = std::env::args().nth(1) {
        std::fs::write(&path, k.to_json()).expect("write knot");
        eprintln!("wrote {path}");
    }
    println!("min separation {:.4}", k.min_separation());
    let t = [-0.5, 0.0, 0.0, 0.5];
    let c = k.evaluate(&t).unwrap();
    for (i, s) in t.iter().enumerate() {
        let x = c.point(i + 1);
        println!("t={s:+.2}  x=({:+.4}, {:+.4}, {:+.4})", x.x, x.y, x.z);
    }
    for a in 0..=t.len() + 1 {
        for b in a + 1..=t.len() + 1 {
            let u = c.u(a, b);
            println!("u_{a}{b} = ({:+.4}, {:+.4}, {:+.4})", u.x, u.y, u.z);
        }
    }
    println!("frame at t=0:\n{}", c.frame(2));
}
