//! Smith forms, cokernels and kernels against brute-force oracles.

use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gw_tower::linalg::{cokernel, hermite_normal_form, in_lattice, kernel_basis, smith_normal_form, IntMatrix};

fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let v: Vec<i64> = (0..rows * cols).map(|_| rng.gen_range(-bound..=bound)).collect();
    IntMatrix::from_i64(rows, cols, &v)
}

fn check_smith(a: &IntMatrix) {
    let sf = smith_normal_form(a);
    assert_eq!(sf.u.mul(a).unwrap().mul(&sf.v).unwrap(), sf.d, "U A V != D for\n{a}");
    for m in [&sf.u, &sf.v] {
        assert_eq!(m.determinant().unwrap().abs(), BigInt::from(1), "not unimodular");
    }
    for r in 0..sf.d.rows() {
        for c in 0..sf.d.cols() {
            if r != c {
                assert!(sf.d[(r, c)].is_zero());
            }
        }
    }
    let diag: Vec<BigInt> = (0..a.rows().min(a.cols())).map(|i| sf.d[(i, i)].clone()).collect();
    assert!(diag.iter().all(|d| !d.is_negative()));
    for w in diag.windows(2) {
        if w[1].is_zero() {
            continue;
        }
        assert!(!w[0].is_zero() && w[1].is_multiple_of(&w[0]), "divisibility fails: {diag:?}");
    }
}

/// Every `k x k` minor of a small matrix.
fn minors(a: &IntMatrix, k: usize) -> Vec<BigInt> {
    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = subsets(n - 1, k);
        for mut s in subsets(n - 1, k - 1) {
            s.push(n - 1);
            out.push(s);
        }
        out
    }
    let mut out = Vec::new();
    for rs in subsets(a.rows(), k) {
        for cs in subsets(a.cols(), k) {
            out.push(a.select_rows(&rs).select_columns(&cs).determinant().unwrap());
        }
    }
    out
}

#[test]
fn smith_suite_500_random_matrices() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    for _ in 0..500 {
        let rows = rng.gen_range(1..=40);
        let cols = rng.gen_range(1..=40);
        let a = random_matrix(&mut rng, rows, cols, 9);
        check_smith(&a);
    }
    assert!(start.elapsed().as_secs() < 60, "took {:?}", start.elapsed());
}

#[test]
fn divisors_match_determinantal_divisors() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..150 {
        let rows = rng.gen_range(1..=4);
        let cols = rng.gen_range(1..=4);
        // Low rank and repeated factors show up more with small entries.
        let a = random_matrix(&mut rng, rows, cols, 4);
        let sf = smith_normal_form(&a);
        let mut prod = BigInt::from(1);
        for k in 1..=rows.min(cols) {
            let g = minors(&a, k).iter().fold(BigInt::zero(), |g, m| g.gcd(m));
            let d = sf.d[(k - 1, k - 1)].clone();
            prod *= &d;
            assert_eq!(prod, g, "k={k} for\n{a}");
        }
    }
}

#[test]
fn structured_matrices() {
    // Rank-deficient and large-entry cases.
    let a = IntMatrix::from_i64(3, 3, &[1, 2, 3, 4, 5, 6, 7, 8, 9]);
    check_smith(&a);
    assert_eq!(cokernel(&a).to_string(), "Z + Z/3");
    let big = IntMatrix::from_i64(2, 2, &[i64::MAX, 1, i64::MAX - 1, 1]);
    check_smith(&big);
    let zero = IntMatrix::zeros(3, 2);
    assert_eq!(cokernel(&zero).free_rank, 3);
}

fn permute_columns(a: &IntMatrix, perm: &[usize]) -> IntMatrix {
    a.select_columns(perm)
}

fn append_combination(a: &IntMatrix, coeffs: &[i64]) -> IntMatrix {
    let mut cols: Vec<Vec<BigInt>> = (0..a.cols()).map(|c| a.column(c)).collect();
    let mut extra = vec![BigInt::zero(); a.rows()];
    for (c, k) in coeffs.iter().enumerate().take(a.cols()) {
        for (r, e) in extra.iter_mut().enumerate() {
            *e += &a[(r, c)] * BigInt::from(*k);
        }
    }
    cols.push(extra);
    IntMatrix::from_columns(a.rows(), &cols)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn cokernel_ignores_relator_order(
        seed in any::<u64>(), rows in 1usize..8, cols in 1usize..8,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(&mut rng, rows, cols, 6);
        let mut perm: Vec<usize> = (0..cols).collect();
        for i in (1..cols).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        prop_assert_eq!(cokernel(&a), cokernel(&permute_columns(&a, &perm)));
    }

    #[test]
    fn cokernel_ignores_redundant_relators(
        seed in any::<u64>(), rows in 1usize..8, cols in 1usize..8,
        coeffs in proptest::collection::vec(-5i64..=5, 8),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(&mut rng, rows, cols, 6);
        prop_assert_eq!(cokernel(&a), cokernel(&append_combination(&a, &coeffs)));
    }

    #[test]
    fn kernel_contains_every_small_solution(seed in any::<u64>(), rows in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(&mut rng, rows, 4, 3);
        let basis = kernel_basis(&a);
        for v in &basis {
            prop_assert!(a.mul_vec(v).iter().all(Zero::is_zero));
        }
        let hnf = hermite_normal_form(&basis);
        let range = -5i64..=5;
        for x0 in range.clone() {
            for x1 in range.clone() {
                for x2 in range.clone() {
                    for x3 in range.clone() {
                        let v: Vec<BigInt> = [x0, x1, x2, x3].iter().map(|&x| BigInt::from(x)).collect();
                        if a.mul_vec(&v).iter().all(Zero::is_zero) {
                            prop_assert!(in_lattice(&hnf, &v), "{:?} missing from the kernel of\n{}", v, a);
                        }
                    }
                }
            }
        }
    }
}
