//! Large-degree Hermite values against exact integer arithmetic.

use mhf_fie::hermite::{hermite_eval, hermite_eval_scaled};
use num_bigint::BigInt;

/// Exact `H_n(z)` for integer `z` from the recurrence.
fn hermite_exact(n: usize, z: i64) -> BigInt {
    let z = BigInt::from(z);
    let mut prev = BigInt::from(1);
    if n == 0 {
        return prev;
    }
    let mut cur = BigInt::from(2) * &z;
    for k in 1..n {
        let next = BigInt::from(2) * &z * &cur - BigInt::from(2 * k) * &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Nearest f64, through the decimal string.
fn to_f64(v: &BigInt) -> f64 {
    v.to_string().parse().unwrap()
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::from(1), |f, k| f * k)
}

#[test]
fn h200_at_one_matches_integer_recurrence() {
    let exact = hermite_exact(200, 1);
    let want = to_f64(&exact);
    let got = hermite_eval(200, 1.0).unwrap();
    assert!(((got - want) / want).abs() < 1e-12, "{got:e} vs {want:e}");
}

#[test]
fn scaled_h200_matches_exact_normalization() {
    // psi_200(1) = H_200(1) e^{-1/2} / sqrt(sqrt(pi) 2^200 200!), with the
    // integer ratio H^2 / (2^200 200!) formed exactly before rounding
    let h = hermite_exact(200, 1);
    let denom = (BigInt::from(1) << 200usize) * factorial(200);
    let shift = BigInt::from(10).pow(40);
    let ratio = to_f64(&(&h * &h * &shift / &denom)) / 1e40;
    let sign = if h < BigInt::from(0) { -1.0 } else { 1.0 };
    let want = sign * (ratio / std::f64::consts::PI.sqrt()).sqrt() * (-0.5f64).exp();
    let got = hermite_eval_scaled(200, 1.0);
    assert!(((got - want) / want).abs() < 1e-12, "{got:e} vs {want:e}");
}

#[test]
fn small_degrees_match_exactly() {
    for n in 0..40 {
        for z in [-3i64, -1, 0, 2] {
            let want = to_f64(&hermite_exact(n, z));
            let got = hermite_eval(n, z as f64).unwrap();
            assert!((got - want).abs() <= 1e-13 * want.abs().max(1.0), "n={n} z={z}");
        }
    }
}
