//! Physicists' Hermite polynomials, normalized Hermite functions and
//! Gauss-Hermite rules for the weight `e^{-z^2}` on the real line.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// `ln(sqrt(pi))`.
pub(crate) const LN_SQRT_PI: f64 = 0.572_364_942_924_700_1;

/// `H_n(z)` by the three-term recurrence `H_{n+1} = 2z H_n - 2n H_{n-1}`.
///
/// Overflows for large `n z^2`; that case is reported as [`Error::Range`]
/// and callers should switch to [`hermite_eval_scaled`].
pub fn hermite_eval(n: usize, z: f64) -> Result<f64> {
    if !z.is_finite() {
        return Err(Error::Domain(format!("hermite_eval: z = {z} is not finite")));
    }
    let mut prev = 1.0;
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = 2.0 * z;
    for k in 1..n {
        let next = 2.0 * z * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    if cur.is_finite() {
        Ok(cur)
    } else {
        Err(Error::Range(format!("H_{n}({z}) overflows f64")))
    }
}

/// Normalized Hermite function `H_n(z) e^{-z^2/2} / sqrt(sqrt(pi) 2^n n!)`.
pub fn hermite_eval_scaled(n: usize, z: f64) -> f64 {
    hermite_function_pair(n, z).0
}

/// Returns `(psi_n(z), psi_{n-1}(z))` for the orthonormal Hermite functions,
/// with `psi_{-1} = 0`.
///
/// The recurrence runs on a mantissa with a separately tracked natural-log
/// scale, so the Gaussian factor never underflows before the polynomial part
/// has grown (this matters well inside the oscillatory region for large `n`).
pub fn hermite_function_pair(n: usize, z: f64) -> (f64, f64) {
    let (cur, prev, log_scale) = hermite_function_pair_scaled(n, z);
    let s = log_scale.exp();
    (cur * s, prev * s)
}

/// Mantissas and common log scale of `(psi_n(z), psi_{n-1}(z))`:
/// `psi_n(z) = cur * exp(log_scale)`.
pub fn hermite_function_pair_scaled(n: usize, z: f64) -> (f64, f64, f64) {
    let mut log_scale = -0.5 * z * z - 0.5 * LN_SQRT_PI;
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * z * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        let mag = cur.abs().max(prev.abs());
        if mag > 1e150 || (mag < 1e-150 && mag > 0.0) {
            let shift = mag.ln();
            cur /= mag;
            prev /= mag;
            log_scale += shift;
        }
    }
    (cur, prev, log_scale)
}

/// `psi_k(z)` for `k = 0..=n`; entries below the f64 range come out as 0.
pub fn hermite_functions_all(n: usize, z: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut log_scale = -0.5 * z * z - 0.5 * LN_SQRT_PI;
    let mut prev = 0.0;
    let mut cur = 1.0;
    out.push(log_scale.exp());
    for k in 0..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * z * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        let mag = cur.abs().max(prev.abs());
        if mag > 1e150 || (mag < 1e-150 && mag > 0.0) {
            cur /= mag;
            prev /= mag;
            log_scale += mag.ln();
        }
        out.push(cur * log_scale.exp());
    }
    out
}

/// Orthonormal polynomials `H_k(z) / sqrt(sqrt(pi) 2^k k!)` for `k = 0..=n`.
pub fn normalized_hermite_all(n: usize, z: f64) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(n + 1);
    let mut prev = 0.0;
    let mut cur = (-0.5 * LN_SQRT_PI).exp();
    out.push(cur);
    for k in 0..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * z * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        out.push(cur);
    }
    if cur.is_finite() && prev.is_finite() {
        Ok(out)
    } else {
        Err(Error::Range(format!(
            "normalized Hermite polynomials up to degree {n} overflow at z = {z}"
        )))
    }
}

/// Gauss-Hermite rule with `degree + 1` nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteRule {
    degree: usize,
    nodes: Vec<f64>,
    log_weights: Vec<f64>,
    weights: Vec<f64>,
}

impl HermiteRule {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Ascending nodes, symmetric about zero.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights for `e^{-z^2}`. The outermost ones underflow to zero for
    /// large rules; use [`HermiteRule::log_weights`] when that matters.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    /// `ln(w_k e^{z_k^2})`, the weight of the rule applied to `f(z)` with no
    /// Gaussian factor in the integrand.
    pub fn log_modified_weight(&self, k: usize) -> f64 {
        self.log_weights[k] + self.nodes[k] * self.nodes[k]
    }

    /// `sum_k f(z_k) w_k`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        let terms: Vec<f64> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&z, &w)| w * f(z))
            .collect();
        mirrored_sum(&terms)
    }
}

/// Sum over a symmetric rule, adding mirror pairs `(k, n-1-k)` first so odd
/// integrands cancel exactly.
pub(crate) fn mirrored_sum(terms: &[f64]) -> f64 {
    let n = terms.len();
    let mut sum = 0.0;
    for k in 0..n / 2 {
        sum += terms[k] + terms[n - 1 - k];
    }
    if n % 2 == 1 {
        sum += terms[n / 2];
    }
    sum
}

/// Gauss-Hermite rule with `degree + 1` nodes: the roots of `H_{degree+1}`.
///
/// Nodes come from the Jacobi matrix (zero diagonal, off-diagonal
/// `sqrt(k/2)`) and get one Newton correction on the scaled recurrence.
/// Weights use the Christoffel-Darboux identity
/// `w_k e^{z_k^2} = 1 / (n psi_{n-1}(z_k)^2)`, which stays representable in
/// log form where the eigenvector components underflow.
pub fn hermite_gauss_rule(degree: usize) -> Result<HermiteRule> {
    if degree > 2000 {
        return Err(Error::Contract(format!(
            "hermite_gauss_rule: degree {degree} exceeds 2000"
        )));
    }
    let n = degree + 1;
    let (mut nodes, _) = golub_welsch(n)?;
    for z in nodes.iter_mut() {
        let (p, q) = hermite_function_pair(n, *z);
        // H_n / H_n' = psi_n / (sqrt(2n) psi_{n-1})
        if q != 0.0 {
            *z -= p / ((2.0 * n as f64).sqrt() * q);
        }
    }
    for j in 0..n / 2 {
        let m = 0.5 * (nodes[n - 1 - j] - nodes[j]);
        nodes[j] = -m;
        nodes[n - 1 - j] = m;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }

    let mut log_weights = Vec::with_capacity(n);
    for &z in &nodes {
        let (_, q) = hermite_function_pair(n, z);
        let lw = -(n as f64).ln() - 2.0 * q.abs().ln() - z * z;
        log_weights.push(lw);
    }
    for j in 0..n / 2 {
        let m = 0.5 * (log_weights[j] + log_weights[n - 1 - j]);
        log_weights[j] = m;
        log_weights[n - 1 - j] = m;
    }
    let weights = log_weights.iter().map(|lw| lw.exp()).collect();
    Ok(HermiteRule {
        degree,
        nodes,
        log_weights,
        weights,
    })
}

/// Eigenvalues of the `n x n` Hermite Jacobi matrix and `sqrt(pi) v_0^2`
/// for each normalized eigenvector `v` (the textbook Golub-Welsch weights),
/// both sorted by eigenvalue.
///
/// Implicit QL with Wilkinson shifts, carrying only the first row of the
/// eigenvector matrix.
pub fn golub_welsch(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::Contract("golub_welsch: empty rule".into()));
    }
    let mut d = vec![0.0f64; n];
    let mut e: Vec<f64> = (1..n).map(|k| (k as f64 / 2.0).sqrt()).collect();
    e.push(0.0);
    let mut first = vec![0.0; n];
    first[0] = 1.0;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Construction(format!(
                    "Golub-Welsch eigensolver did not converge for eigenvalue {l} of {n}"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let fz = first[i + 1];
                first[i + 1] = s * first[i] + c * fz;
                first[i] = c * first[i] - s * fz;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let nodes = order.iter().map(|&i| d[i]).collect();
    let weights = order
        .iter()
        .map(|&i| PI.sqrt() * first[i] * first[i])
        .collect();
    Ok((nodes, weights))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ln_factorial(n: usize) -> f64 {
        (1..=n).map(|k| (k as f64).ln()).sum()
    }

    #[test]
    fn low_order_values() {
        assert_eq!(hermite_eval(0, 3.7).unwrap(), 1.0);
        assert_eq!(hermite_eval(3, 0.0).unwrap(), 0.0);
        assert_eq!(hermite_eval(2, 1.0).unwrap(), 2.0);
        assert_eq!(hermite_eval(1, 1.5).unwrap(), 3.0);
    }

    #[test]
    fn overflow_is_a_range_error() {
        assert!(matches!(hermite_eval(400, 30.0), Err(Error::Range(_))));
    }

    #[test]
    fn scaled_low_order() {
        assert!((hermite_eval_scaled(0, 0.0) - PI.powf(-0.25)).abs() < 1e-15);
        assert_eq!(hermite_eval_scaled(1, 0.0), 0.0);
    }

    #[test]
    fn scaled_matches_unscaled_where_both_fit() {
        for &(n, z) in &[(5usize, 0.3f64), (20, 1.7), (60, -2.5), (150, 4.0)] {
            let h = hermite_eval(n, z).unwrap();
            let ln_gamma = LN_SQRT_PI + n as f64 * 2f64.ln() + ln_factorial(n);
            let expect = h * (-0.5 * z * z - 0.5 * ln_gamma).exp();
            let got = hermite_eval_scaled(n, z);
            assert!(
                (got - expect).abs() <= 1e-11 * expect.abs().max(1e-300),
                "n={n} z={z}: {got} vs {expect}"
            );
        }
    }

    #[test]
    fn scaled_is_finite_in_range() {
        for &(n, z) in &[(10_000usize, 100.0f64), (10_000, -3.0), (3, 100.0)] {
            assert!(hermite_eval_scaled(n, z).is_finite());
        }
        // deep in the oscillatory region: not flushed to zero
        assert!(hermite_eval_scaled(10_000, 100.0).abs() > 1e-6);
    }

    #[test]
    fn degree_zero_and_one_rules() {
        let r = hermite_gauss_rule(0).unwrap();
        assert_eq!(r.nodes(), &[0.0]);
        assert!((r.weights()[0] - PI.sqrt()).abs() < 1e-15);

        let r = hermite_gauss_rule(1).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((r.nodes()[0] + h).abs() < 1e-15);
        assert!((r.nodes()[1] - h).abs() < 1e-15);
        for w in r.weights() {
            assert!((w - PI.sqrt() / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn eigenvector_weights_agree_with_christoffel_darboux() {
        for n in [2usize, 7, 20, 41] {
            let (_, w_eig) = golub_welsch(n).unwrap();
            let rule = hermite_gauss_rule(n - 1).unwrap();
            for (a, b) in w_eig.iter().zip(rule.weights()) {
                assert!((a - b).abs() <= 1e-12 * PI.sqrt(), "n={n}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn second_moment_and_mass() {
        for degree in [1usize, 4, 17, 64, 200] {
            let r = hermite_gauss_rule(degree).unwrap();
            let mass: f64 = r.weights().iter().sum();
            assert!((mass / PI.sqrt() - 1.0).abs() < 1e-12, "degree {degree}");
            let m2 = r.integrate(|z| z * z);
            assert!((m2 / (PI.sqrt() / 2.0) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn large_rule_is_symmetric_and_sorted() {
        let r = hermite_gauss_rule(2000).unwrap();
        let z = r.nodes();
        assert_eq!(z.len(), 2001);
        for j in 0..z.len() {
            assert_eq!(z[j], -z[z.len() - 1 - j]);
            if j > 0 {
                assert!(z[j] > z[j - 1]);
            }
        }
        assert!(r.log_weights().iter().all(|w| w.is_finite()));
        let mass: f64 = r.weights().iter().sum();
        assert!((mass / PI.sqrt() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nodes_are_roots() {
        let r = hermite_gauss_rule(99).unwrap();
        for &z in r.nodes() {
            let (p, q) = hermite_function_pair(100, z);
            assert!(p.abs() < 1e-13 * q.abs().max(1e-3), "psi_100({z}) = {p}");
        }
    }

    #[test]
    fn derivative_relation_by_finite_difference() {
        let zs = [-2.9, -2.1, -1.3, -0.77, -0.2, 0.05, 0.4, 0.93, 1.6, 2.8];
        for n in 1..=20usize {
            for &z in &zs {
                let h = 1e-5;
                let fd = (hermite_eval(n, z + h).unwrap() - hermite_eval(n, z - h).unwrap())
                    / (2.0 * h);
                let exact = 2.0 * n as f64 * hermite_eval(n - 1, z).unwrap();
                assert!(
                    (fd - exact).abs() <= 1e-6 * exact.abs().max(1.0),
                    "n={n} z={z}: {fd} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn orthogonality() {
        let r = hermite_gauss_rule(16).unwrap();
        for m in 0..=15usize {
            for n in 0..=15usize {
                if m + n > 2 * 16 + 1 {
                    continue;
                }
                let ip = r.integrate(|z| hermite_eval(m, z).unwrap() * hermite_eval(n, z).unwrap());
                let gamma = |k: usize| (LN_SQRT_PI + k as f64 * 2f64.ln() + ln_factorial(k)).exp();
                if m == n {
                    assert!((ip / gamma(n) - 1.0).abs() < 1e-10, "m=n={n}");
                } else {
                    let scale = (gamma(m) * gamma(n)).sqrt();
                    assert!(ip.abs() < 1e-10 * scale, "m={m} n={n}: {ip}");
                }
            }
        }
    }

    #[test]
    fn too_large_degree_is_rejected() {
        assert!(matches!(hermite_gauss_rule(2001), Err(Error::Contract(_))));
    }

    #[test]
    fn normalized_polynomials_match_plain_ones() {
        for &z in &[-2.5, 0.0, 0.3, 4.0] {
            let all = normalized_hermite_all(20, z).unwrap();
            for (k, v) in all.iter().enumerate() {
                let h = hermite_eval(k, z).unwrap();
                let g = (LN_SQRT_PI + k as f64 * std::f64::consts::LN_2 + ln_factorial(k)).exp();
                assert!((v - h / g.sqrt()).abs() <= 1e-12 * v.abs().max(1.0), "k={k} z={z}");
            }
        }
        assert!(normalized_hermite_all(400, 1e30).is_err());
    }

    #[test]
    fn scaled_pair_reassembles() {
        let (c, p, ls) = hermite_function_pair_scaled(300, 7.5);
        let (a, b) = hermite_function_pair(300, 7.5);
        assert!((c * ls.exp() - a).abs() <= 1e-14 * a.abs());
        assert!((p * ls.exp() - b).abs() <= 1e-14 * b.abs());
    }

    #[test]
    fn all_functions_match_pairs() {
        let all = hermite_functions_all(250, 12.0);
        for k in [0usize, 1, 17, 144, 250] {
            let (v, _) = hermite_function_pair(k, 12.0);
            assert!((all[k] - v).abs() <= 1e-13 * v.abs().max(1e-300), "k={k}");
        }
    }
}
