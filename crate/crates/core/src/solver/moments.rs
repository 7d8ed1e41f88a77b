//! Product-integration moments `M_ik = int K_i(z) C_k(z) dz` in the mapped
//! variable, where `K_i(z) = theta(sigma(z / alpha), x_i)` and `C_k` are the
//! Hermite-function cardinals at the quadrature nodes.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::hermite::{hermite_function_pair_scaled, HermiteRule};
use crate::mhf::ln_logistic;
use crate::problem::KernelKind;
use crate::quad::{gauss_legendre, tanh_sinh_rule, GaussLegendre, TsNode};

const LN_2: f64 = std::f64::consts::LN_2;

/// `ln cosh(x)` without overflow.
pub(crate) fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - LN_2
}

/// `ln sinh(y)` for `y > 0`.
fn ln_sinh(y: f64) -> f64 {
    if y < 0.5 {
        y.sinh().ln()
    } else {
        y + (-(-2.0 * y).exp()).ln_1p() - LN_2
    }
}

/// `ln|sigma(a) - sigma(b)|` given `a`, `b` and the exact difference `d = a - b`.
pub(crate) fn ln_logistic_gap(a: f64, b: f64, d: f64) -> f64 {
    ln_sinh(0.5 * d.abs()) - LN_2 - ln_cosh(0.5 * a) - ln_cosh(0.5 * b)
}

/// `ln(sigma'(z / alpha) / alpha)`.
pub(crate) fn ln_jacobian(alpha: f64, z: f64) -> f64 {
    -2.0 * ln_cosh(0.5 * z / alpha) - 2.0 * LN_2 - alpha.ln()
}

/// Cardinal functions `C_k(z) = psi_n(z) / ((z - q_k) psi_n'(q_k))` of the
/// Hermite functions at the roots `q_k` of `psi_n`.
pub(crate) struct HermiteCardinals {
    q: Vec<f64>,
    inv_deriv: Vec<f64>,
    ln_b: Vec<f64>,
    b_sign: Vec<f64>,
}

const NEAR_NODE: f64 = 1e-2;

impl HermiteCardinals {
    pub(crate) fn new(rule: &HermiteRule) -> Self {
        let q = rule.nodes().to_vec();
        let n = q.len();
        let root = (2.0 * n as f64).sqrt();
        let inv_deriv = q
            .iter()
            .map(|&qk| {
                let (_, prev, ls) = hermite_function_pair_scaled(n, qk);
                (-ls - root.ln()).exp() / prev
            })
            .collect();
        let mut ln_b = vec![0.0; n];
        let mut b_sign = vec![1.0; n];
        for k in 0..n {
            for j in (0..n).filter(|&j| j != k) {
                let d = q[k] - q[j];
                ln_b[k] -= d.abs().ln();
                if d < 0.0 {
                    b_sign[k] = -b_sign[k];
                }
            }
        }
        HermiteCardinals {
            q,
            inv_deriv,
            ln_b,
            b_sign,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.q.len()
    }

    /// Adds `scale * C_k(z)` to `acc[k]` for every `k`.
    pub(crate) fn accumulate(&self, z: f64, scale: f64, acc: &mut [f64]) {
        let (m, gap) = self
            .q
            .iter()
            .enumerate()
            .map(|(k, &qk)| (k, (z - qk).abs()))
            .fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
        if gap < NEAR_NODE {
            self.accumulate_product_form(z, m, scale, acc);
            return;
        }
        let n = self.q.len();
        let (cur, _, ls) = hermite_function_pair_scaled(n, z);
        let psi = scale * cur * ls.exp();
        if psi == 0.0 {
            return;
        }
        for k in 0..n {
            acc[k] += psi * self.inv_deriv[k] / (z - self.q[k]);
        }
    }

    /// `b_k prod_{j != k} (z - q_j) e^{-(z^2 - q_k^2)/2}`, accumulated in logs.
    fn accumulate_product_form(&self, z: f64, m: usize, scale: f64, acc: &mut [f64]) {
        let mut ln_rest = 0.0;
        let mut sign_rest = 1.0;
        for (j, &qj) in self.q.iter().enumerate() {
            if j != m {
                let d = z - qj;
                ln_rest += d.abs().ln();
                if d < 0.0 {
                    sign_rest = -sign_rest;
                }
            }
        }
        let dm = z - self.q[m];
        for k in 0..self.q.len() {
            let gauss = -0.5 * (z * z - self.q[k] * self.q[k]);
            let (ln_mag, sign) = if k == m {
                (self.ln_b[k] + ln_rest + gauss, self.b_sign[k] * sign_rest)
            } else {
                let dk = z - self.q[k];
                let s = self.b_sign[k] * sign_rest * dm.signum() * dk.signum();
                (self.ln_b[k] + ln_rest + dm.abs().ln() - dk.abs().ln() + gauss, s)
            };
            acc[k] += scale * sign * ln_mag.exp();
        }
    }
}

/// Panel layout for the moment integrals.
struct Layout {
    ts: Vec<TsNode>,
    gl: GaussLegendre,
    width: f64,
    zmax: f64,
}

impl Layout {
    fn new(alpha: f64, quad: &HermiteRule) -> Self {
        let n = quad.len() as f64;
        let qmax = quad.nodes().iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        let width = 0.5f64.min(alpha).min(4.0 / (2.0 * n).sqrt());
        Layout {
            ts: tanh_sinh_rule(4),
            gl: gauss_legendre(20),
            width,
            zmax: qmax + 10.0,
        }
    }

    /// Nodes `(d, w)` at distances `d > 0` from a singular point, out to `reach`.
    fn one_sided(&self, reach: f64, out: &mut Vec<(f64, f64)>) {
        let w = self.width.min(reach);
        for node in &self.ts {
            out.push((w * node.left, w * node.weight));
        }
        let mut a = w;
        while a < reach {
            let b = (a + self.width).min(reach);
            let half = 0.5 * (b - a);
            for (x, wt) in self.gl.nodes.iter().zip(&self.gl.weights) {
                out.push((a + half * (x + 1.0), half * wt));
            }
            a = b;
        }
    }

    /// Gauss-Legendre nodes covering `[-zmax, zmax]`.
    fn full_line(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        let mut a = -self.zmax;
        while a < self.zmax {
            let b = (a + self.width).min(self.zmax);
            let half = 0.5 * (b - a);
            for (x, wt) in self.gl.nodes.iter().zip(&self.gl.weights) {
                out.push((a + half * (x + 1.0), half * wt));
            }
            a = b;
        }
        out
    }
}

/// Moments for collocation points `z_i = alpha * logit(x_i)` against the
/// cardinals of `quad`; rows for a kernel without diagonal singularity are
/// identical.
pub(crate) fn product_moments(kind: KernelKind, alpha: f64, colloc_z: &[f64], quad: &HermiteRule) -> DMatrix<f64> {
    let cards = HermiteCardinals::new(quad);
    let layout = Layout::new(alpha, quad);
    let nq = cards.len();
    let rows: Vec<Vec<f64>> = if kind.is_diagonal() {
        colloc_z
            .par_iter()
            .map(|&zi| {
                let mut acc = vec![0.0; nq];
                let b = zi / alpha;
                for side in [1.0f64, -1.0] {
                    let reach = (layout.zmax - side * zi).max(layout.width);
                    let mut nodes = Vec::new();
                    layout.one_sided(reach, &mut nodes);
                    for (d, w) in nodes {
                        let z = zi + side * d;
                        let a = z / alpha;
                        let ln_gap = ln_logistic_gap(a, b, side * d / alpha);
                        let k = kind.from_logs(ln_gap, ln_logistic(-a));
                        cards.accumulate(z, w * k, &mut acc);
                    }
                }
                acc
            })
            .collect()
    } else {
        let mut acc = vec![0.0; nq];
        for (z, w) in layout.full_line() {
            let a = z / alpha;
            let k = kind.from_logs(f64::NAN, ln_logistic(-a));
            cards.accumulate(z, w * k, &mut acc);
        }
        vec![acc; colloc_z.len()]
    };
    DMatrix::from_fn(colloc_z.len(), nq, |i, k| rows[i][k])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::hermite_gauss_rule;
    use crate::mhf::{logistic, UnitPoint};
    use crate::problem::oracle_integral;

    #[test]
    fn logistic_gap_matches_direct_difference() {
        for &(a, b) in &[(0.3, -1.2), (5.0, 4.999), (-20.0, -19.0), (0.0, 1e-9)] {
            let direct = (logistic(a) - logistic(b)).abs().ln();
            let g = ln_logistic_gap(a, b, a - b);
            assert!((g - direct).abs() < 1e-6 * direct.abs().max(1.0), "{a} {b}");
        }
        let g = ln_logistic_gap(-40.0, -40.0 - 1e-3, 1e-3);
        let want = (logistic(-40.0) - logistic(-40.001)).ln();
        assert!((g - want).abs() < 1e-9);
    }

    #[test]
    fn cardinals_are_cardinal_and_consistent() {
        let rule = hermite_gauss_rule(12).unwrap();
        let c = HermiteCardinals::new(&rule);
        for (m, &q) in rule.nodes().iter().enumerate() {
            let mut acc = vec![0.0; 13];
            c.accumulate(q, 1.0, &mut acc);
            for (k, v) in acc.iter().enumerate() {
                assert!((v - if k == m { 1.0 } else { 0.0 }).abs() < 1e-13);
            }
        }
        // both evaluation paths agree just outside the switch radius
        let z = rule.nodes()[4] + 0.011;
        let mut direct = vec![0.0; 13];
        c.accumulate(z, 1.0, &mut direct);
        let mut product = vec![0.0; 13];
        c.accumulate_product_form(z, 4, 1.0, &mut product);
        for k in 0..13 {
            assert!((direct[k] - product[k]).abs() < 1e-11, "k={k}");
        }
    }

    fn cardinal(rule: &HermiteRule, k: usize, z: f64) -> f64 {
        let c = HermiteCardinals::new(rule);
        let mut acc = vec![0.0; rule.len()];
        c.accumulate(z, 1.0, &mut acc);
        acc[k]
    }

    #[test]
    fn moments_match_adaptive_reference() {
        let alpha = 0.5;
        let colloc = hermite_gauss_rule(6).unwrap();
        let quad = colloc.clone();
        for kind in [KernelKind::Logarithmic, KernelKind::Algebraic { mu: 0.5 }] {
            let m = product_moments(kind, alpha, colloc.nodes(), &quad);
            for &i in &[0usize, 2, 3] {
                let x = UnitPoint::from_logit(colloc.nodes()[i] / alpha);
                for &k in &[0usize, 3, 5] {
                    let reference = oracle_integral(kind, |_| 1.0, x, |s| {
                        let z = alpha * s.logit();
                        cardinal(&quad, k, z) * alpha / (s.x * s.xc)
                    })
                    .unwrap();
                    assert!(
                        (m[(i, k)] - reference).abs() < 1e-10,
                        "{kind:?} i={i} k={k}: {} vs {reference}",
                        m[(i, k)]
                    );
                }
            }
        }
    }

    #[test]
    fn endpoint_moments_are_row_independent() {
        let q = hermite_gauss_rule(10).unwrap();
        let m = product_moments(KernelKind::EndpointAlgebraic { mu: 0.5 }, 1.0, &[0.0, 1.0, 2.0], &q);
        for k in 0..11 {
            assert_eq!(m[(0, k)], m[(2, k)]);
        }
    }
}
