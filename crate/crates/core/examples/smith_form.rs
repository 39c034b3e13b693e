//! Smith normal form of a small integer matrix, with the transforms, and
//! the cokernel it presents.
//!
//! cargo run --example smith_form

use gw_tower::linalg::{cokernel, smith_normal_form, IntMatrix};

fn main() {
    let a = IntMatrix::from_i64(3, 3, &[2, 4, 4, -6, 6, 12, 10, -4, -16]);
    let sf = smith_normal_form(&a);
    println!("A =\n{a}");
    println!("U =\n{}", sf.u);
    println!("V =\n{}", sf.v);
    println!("D = U A V =\n{}", sf.d);
    assert_eq!(sf.u.mul(&a).unwrap().mul(&sf.v).unwrap(), sf.d);
    println!("coker A = {}", cokernel(&a));
}
