//! Mapped Hermite functions on (0, 1).
//!
//! The logit map `z = alpha * ln(x / (1 - x))` sends (0, 1) onto the real
//! line; `Q_n(x) = H_n(z(x))` are orthogonal under
//! `chi(x) = exp(-alpha^2 ln^2(x/(1-x))) / (x (1 - x))`.
//!
//! Points near the endpoints are carried as [`UnitPoint`]s, which keep `x`
//! and `1 - x` separately so that neither side of the interval loses
//! precision to cancellation.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::hermite::{hermite_eval, hermite_gauss_rule, HermiteRule, LN_SQRT_PI};

/// A point of (0, 1) stored together with its complement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitPoint {
    pub x: f64,
    /// `1 - x`, accurate even when `x` rounds to 1.
    pub xc: f64,
}

impl UnitPoint {
    /// Point with logit `t`, i.e. `x = 1 / (1 + e^{-t})`.
    pub fn from_logit(t: f64) -> Self {
        UnitPoint {
            x: logistic(t),
            xc: logistic(-t),
        }
    }

    /// Point from `x` alone; the complement is `1 - x` rounded.
    pub fn from_x(x: f64) -> Self {
        UnitPoint { x, xc: 1.0 - x }
    }

    /// `ln(x / (1 - x))`.
    pub fn logit(&self) -> f64 {
        self.x.ln() - self.xc.ln()
    }

    pub fn mirror(&self) -> Self {
        UnitPoint {
            x: self.xc,
            xc: self.x,
        }
    }
}

/// Branch-stable logistic `1 / (1 + e^{-t})`.
pub fn logistic(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// `ln(logistic(t))` without underflow for large negative `t`.
pub fn ln_logistic(t: f64) -> f64 {
    if t >= 0.0 {
        -(-t).exp().ln_1p()
    } else {
        t - t.exp().ln_1p()
    }
}

fn check_unit(op: &str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{op}: x = {x} is outside (0, 1)")))
    }
}

/// `z(x) = alpha * ln(x / (1 - x))`.
pub fn map_to_real(alpha: f64, x: f64) -> Result<f64> {
    check_unit("map_to_real", x)?;
    Ok(alpha * (x.ln() - (-x).ln_1p()))
}

/// Inverse of [`map_to_real`]: `e^{z/alpha} / (1 + e^{z/alpha})`.
///
/// Saturates to exactly 0 or 1 once `|z / alpha|` exceeds about 745.
pub fn map_to_unit(alpha: f64, zhat: f64) -> f64 {
    logistic(zhat / alpha)
}

/// `ln chi(x)`, evaluated without forming `chi`.
pub fn ln_weight_chi_at(alpha: f64, p: UnitPoint) -> f64 {
    let t = p.logit();
    -alpha * alpha * t * t - p.x.ln() - p.xc.ln()
}

/// The orthogonality weight `chi^alpha(x)`.
pub fn weight_chi(alpha: f64, x: f64) -> Result<f64> {
    check_unit("weight_chi", x)?;
    Ok(ln_weight_chi_at(alpha, UnitPoint::from_x(x)).exp())
}

/// Mapping parameter and truncation degree of an MHF family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MhfBasis {
    alpha: f64,
    degree: usize,
}

impl MhfBasis {
    pub fn new(alpha: f64, degree: usize) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 100.0) {
            return Err(Error::Contract(format!("alpha = {alpha} must lie in (0, 100]")));
        }
        if degree > 2000 {
            return Err(Error::Contract(format!("degree {degree} exceeds 2000")));
        }
        Ok(MhfBasis { alpha, degree })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn degree(&self) -> usize {
        self.degree
    }
}

/// `Q_n^{(alpha)}(x) = H_n(alpha ln(x/(1-x)))`.
pub fn mhf_eval(basis: &MhfBasis, n: usize, x: f64) -> Result<f64> {
    if n > basis.degree {
        return Err(Error::Contract(format!(
            "mhf_eval: n = {n} exceeds basis degree {}",
            basis.degree
        )));
    }
    hermite_eval(n, map_to_real(basis.alpha, x)?)
}

/// `ln gamma_n^{(alpha)} = ln(sqrt(pi) 2^n n! / alpha)`.
pub fn ln_gamma_n(alpha: f64, n: usize) -> f64 {
    let ln_fact: f64 = (2..=n).map(|k| (k as f64).ln()).sum();
    LN_SQRT_PI + n as f64 * std::f64::consts::LN_2 + ln_fact - alpha.ln()
}

/// `gamma_n^{(alpha)} = sqrt(pi) 2^n n! / alpha`; `inf` once it leaves f64.
pub fn gamma_n(alpha: f64, n: usize) -> f64 {
    if n <= 170 {
        let mut v = PI.sqrt() / alpha;
        for k in 1..=n {
            v *= 2.0 * k as f64;
        }
        v
    } else {
        ln_gamma_n(alpha, n).exp()
    }
}

/// MHF-Gauss rule: nodes `x_j = sigma(z_j / alpha)`, weights `omega_j / alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct MhfRule {
    basis: MhfBasis,
    hermite: HermiteRule,
    points: Vec<UnitPoint>,
    weights: Vec<f64>,
}

impl MhfRule {
    pub fn basis(&self) -> &MhfBasis {
        &self.basis
    }

    pub fn alpha(&self) -> f64 {
        self.basis.alpha
    }

    pub fn degree(&self) -> usize {
        self.basis.degree
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The underlying Gauss-Hermite rule (nodes `z_j`, weights `omega_j`).
    pub fn hermite(&self) -> &HermiteRule {
        &self.hermite
    }

    pub fn points(&self) -> &[UnitPoint] {
        &self.points
    }

    pub fn nodes(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.x).collect()
    }

    /// `chi_j = omega_j / alpha`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `ln chi_j`.
    pub fn log_weight(&self, j: usize) -> f64 {
        self.hermite.log_weights()[j] - self.basis.alpha.ln()
    }

    /// Logits `z_j / alpha` of the nodes.
    pub fn logits(&self) -> Vec<f64> {
        self.hermite
            .nodes()
            .iter()
            .map(|z| z / self.basis.alpha)
            .collect()
    }
}

pub fn mhf_gauss_rule(basis: &MhfBasis) -> Result<MhfRule> {
    let hermite = hermite_gauss_rule(basis.degree)?;
    let points = hermite
        .nodes()
        .iter()
        .map(|z| UnitPoint::from_logit(z / basis.alpha))
        .collect();
    let weights = hermite.weights().iter().map(|w| w / basis.alpha).collect();
    Ok(MhfRule {
        basis: *basis,
        hermite,
        points,
        weights,
    })
}

/// `sum_j f(x_j) chi_j`, approximating `int_0^1 f chi dx`.
pub fn mhf_quadrature<F: Fn(f64) -> f64>(rule: &MhfRule, f: F) -> Result<f64> {
    mhf_quadrature_at(rule, |p| f(p.x))
}

/// Same as [`mhf_quadrature`] but hands the integrand the full [`UnitPoint`].
pub fn mhf_quadrature_at<F: Fn(UnitPoint) -> f64>(rule: &MhfRule, f: F) -> Result<f64> {
    let mut terms = Vec::with_capacity(rule.len());
    for (j, (p, w)) in rule.points.iter().zip(&rule.weights).enumerate() {
        let v = f(*p);
        if !v.is_finite() {
            return Err(Error::Evaluation {
                index: j,
                x: p.x,
                value: v,
            });
        }
        terms.push(v * w);
    }
    Ok(crate::hermite::mirrored_sum(&terms))
}

/// Pseudo-derivative `x (1 - x) d/dx Q_n(x) = 2 n alpha Q_{n-1}(x)`.
pub fn mhf_pseudo_deriv(basis: &MhfBasis, n: usize, x: f64) -> Result<f64> {
    if n == 0 {
        check_unit("mhf_pseudo_deriv", x)?;
        return Ok(0.0);
    }
    let q = mhf_eval(basis, n - 1, x)?;
    Ok(2.0 * n as f64 * basis.alpha * q)
}
