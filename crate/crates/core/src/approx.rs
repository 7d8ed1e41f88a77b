//! Lagrange interpolation at MHF-Gauss and Hermite-Gauss nodes, discrete
//! projection onto `Q_0..Q_N`, tensor-product interpolation and error norms.
//!
//! Interpolation is barycentric in a transformed variable `t`: the logit
//! `ln(x / (1 - x))` for nodes on (0, 1), or `z` itself for nodes on the
//! real line. The generalized Lagrange functions on (0, 1) are ordinary
//! Lagrange polynomials in `t`, so one implementation serves both.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::hermite::{hermite_functions_all, normalized_hermite_all, HermiteRule};
use crate::mhf::{ln_gamma_n, mhf_gauss_rule, MhfBasis, MhfRule, UnitPoint};

/// Where the interpolation nodes live.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeDomain {
    /// Nodes on (0, 1), `t = ln(x / (1 - x))`.
    Unit,
    /// Nodes on the real line, `t = z`.
    Real,
}

/// Barycentric weights for distinct nodes, stored as log-magnitude and sign.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangeBasis {
    domain: NodeDomain,
    t: Vec<f64>,
    ln_w: Vec<f64>,
    sign: Vec<f64>,
    points: Option<Vec<UnitPoint>>,
}

/// Barycentric basis for strictly ascending transformed nodes on the real line.
pub fn lagrange_basis(t: &[f64]) -> Result<LagrangeBasis> {
    LagrangeBasis::build(NodeDomain::Real, t.to_vec(), None)
}

impl LagrangeBasis {
    fn build(domain: NodeDomain, t: Vec<f64>, points: Option<Vec<UnitPoint>>) -> Result<Self> {
        if t.is_empty() {
            return Err(Error::Construction("Lagrange basis needs at least one node".into()));
        }
        for w in t.windows(2) {
            let scale = w[0].abs().max(w[1].abs()).max(1.0);
            if !(w[1] - w[0] > 1e-14 * scale) {
                return Err(Error::Construction(format!(
                    "nodes {} and {} are not strictly ascending and distinct",
                    w[0], w[1]
                )));
            }
        }
        let n = t.len();
        let mut ln_w = vec![0.0; n];
        let mut sign = vec![1.0; n];
        for j in 0..n {
            let mut acc = 0.0;
            let mut s = 1.0;
            for i in 0..n {
                if i != j {
                    let d = t[j] - t[i];
                    acc -= d.abs().ln();
                    if d < 0.0 {
                        s = -s;
                    }
                }
            }
            ln_w[j] = acc;
            sign[j] = s;
        }
        let top = ln_w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        ln_w.iter_mut().for_each(|v| *v -= top);
        Ok(LagrangeBasis {
            domain,
            t,
            ln_w,
            sign,
            points,
        })
    }

    /// Basis at the nodes of an MHF-Gauss rule, in the logit variable.
    pub fn mhf(rule: &MhfRule) -> Result<Self> {
        Self::on_unit(rule.points())
    }

    /// Basis at arbitrary ascending points of (0, 1).
    pub fn on_unit(points: &[UnitPoint]) -> Result<Self> {
        let t = points.iter().map(|p| p.logit()).collect();
        Self::build(NodeDomain::Unit, t, Some(points.to_vec()))
    }

    /// Basis at Gauss-Hermite nodes on the real line.
    pub fn hermite(rule: &HermiteRule) -> Result<Self> {
        Self::build(NodeDomain::Real, rule.nodes().to_vec(), None)
    }

    pub fn domain(&self) -> NodeDomain {
        self.domain
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Transformed nodes `t_j`.
    pub fn nodes(&self) -> &[f64] {
        &self.t
    }

    /// Original nodes on (0, 1), when the basis lives there.
    pub fn unit_points(&self) -> Option<&[UnitPoint]> {
        self.points.as_deref()
    }

    /// Barycentric weights scaled so the largest magnitude is 1.
    pub fn weights(&self) -> Vec<f64> {
        self.ln_w
            .iter()
            .zip(&self.sign)
            .map(|(l, s)| s * l.exp())
            .collect()
    }

    /// Maps a point of the basis domain to the transformed variable.
    pub fn transform(&self, x: f64) -> Result<f64> {
        match self.domain {
            NodeDomain::Real => {
                if x.is_finite() {
                    Ok(x)
                } else {
                    Err(Error::Domain(format!("interpolation point {x} is not finite")))
                }
            }
            NodeDomain::Unit => {
                if x > 0.0 && x < 1.0 {
                    Ok(x.ln() - (-x).ln_1p())
                } else {
                    Err(Error::Domain(format!("interpolation point {x} is outside (0, 1)")))
                }
            }
        }
    }

    /// Unnormalized barycentric terms `b_j / (t - t_j)` (common scale) and
    /// their sum, or the node index on an exact hit.
    fn terms(&self, t: f64) -> std::result::Result<(Vec<f64>, f64), usize> {
        if let Some(j) = self.t.iter().position(|&tj| tj == t) {
            return Err(j);
        }
        let n = self.t.len();
        let mut out = vec![0.0; n];
        let mut top = f64::NEG_INFINITY;
        for j in 0..n {
            let a = self.ln_w[j] - (t - self.t[j]).abs().ln();
            out[j] = a;
            top = top.max(a);
        }
        let mut total = 0.0;
        for j in 0..n {
            let s = if t > self.t[j] { self.sign[j] } else { -self.sign[j] };
            out[j] = s * (out[j] - top).exp();
            total += out[j];
        }
        Ok((out, total))
    }

    /// Values `l_j(t)` of all cardinal functions.
    pub fn cardinals_t(&self, t: f64) -> Vec<f64> {
        match self.terms(t) {
            Err(j) => {
                let mut out = vec![0.0; self.t.len()];
                out[j] = 1.0;
                out
            }
            Ok((mut c, total)) => {
                c.iter_mut().for_each(|v| *v /= total);
                c
            }
        }
    }

    /// Interpolant through `values`, evaluated at `t`.
    pub fn eval_t(&self, values: &[f64], t: f64) -> f64 {
        match self.terms(t) {
            Err(j) => values[j],
            Ok((c, total)) => c.iter().zip(values).map(|(a, b)| a * b).sum::<f64>() / total,
        }
    }

    /// Matrix whose row `r` holds `l_j(targets[r])`.
    pub fn matrix_t(&self, targets: &[f64]) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(targets.len(), self.len());
        for (r, &t) in targets.iter().enumerate() {
            for (j, v) in self.cardinals_t(t).into_iter().enumerate() {
                m[(r, j)] = v;
            }
        }
        m
    }

    /// `d/dt` of the interpolant through `values`, at `t`.
    pub fn derivative_t(&self, values: &[f64], t: f64) -> f64 {
        let n = self.t.len();
        if let Some(i) = self.t.iter().position(|&tj| tj == t) {
            let mut d = 0.0;
            for j in (0..n).filter(|&j| j != i) {
                let ratio = self.sign[j] * self.sign[i] * (self.ln_w[j] - self.ln_w[i]).exp();
                d += ratio * (values[j] - values[i]) / (t - self.t[j]);
            }
            return d;
        }
        let c = self.cardinals_t(t);
        let p = self.eval_t(values, t);
        c.iter()
            .zip(values)
            .zip(&self.t)
            .map(|((cj, vj), tj)| cj * (p - vj) / (t - tj))
            .sum()
    }
}

/// Lagrange interpolant: a basis plus node values.
#[derive(Debug, Clone, PartialEq)]
pub struct Interpolant1D {
    basis: LagrangeBasis,
    values: Vec<f64>,
}

impl Interpolant1D {
    pub fn new(basis: LagrangeBasis, values: Vec<f64>) -> Result<Self> {
        if values.len() != basis.len() {
            return Err(Error::Contract(format!(
                "{} values for {} nodes",
                values.len(),
                basis.len()
            )));
        }
        Ok(Interpolant1D { basis, values })
    }

    pub fn basis(&self) -> &LagrangeBasis {
        &self.basis
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        Ok(self.eval_t(self.basis.transform(x)?))
    }

    pub fn eval_t(&self, t: f64) -> f64 {
        self.basis.eval_t(&self.values, t)
    }

    /// `d/dt` of the interpolant; on (0, 1) this is `x (1 - x) d/dx`.
    pub fn derivative_t(&self, t: f64) -> f64 {
        self.basis.derivative_t(&self.values, t)
    }
}

pub fn interp_eval(f: &Interpolant1D, x: f64) -> Result<f64> {
    f.eval(x)
}

/// Tensor-product interpolant, `values[(i, j)]` at `(x_i, y_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Interpolant2D {
    bx: LagrangeBasis,
    by: LagrangeBasis,
    values: DMatrix<f64>,
}

pub fn tensor_interpolant(
    basis_x: LagrangeBasis,
    basis_y: LagrangeBasis,
    values: DMatrix<f64>,
) -> Result<Interpolant2D> {
    if values.nrows() != basis_x.len() || values.ncols() != basis_y.len() {
        return Err(Error::Contract(format!(
            "value matrix is {}x{} but the grid is {}x{}",
            values.nrows(),
            values.ncols(),
            basis_x.len(),
            basis_y.len()
        )));
    }
    Ok(Interpolant2D {
        bx: basis_x,
        by: basis_y,
        values,
    })
}

impl Interpolant2D {
    pub fn bases(&self) -> (&LagrangeBasis, &LagrangeBasis) {
        (&self.bx, &self.by)
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        Ok(self.eval_t(self.bx.transform(x)?, self.by.transform(y)?))
    }

    pub fn eval_t(&self, tx: f64, ty: f64) -> f64 {
        let rows: Vec<f64> = (0..self.bx.len())
            .map(|i| {
                let row: Vec<f64> = self.values.row(i).iter().copied().collect();
                self.by.eval_t(&row, ty)
            })
            .collect();
        self.bx.eval_t(&rows, tx)
    }

    /// Values on the tensor grid `tx x ty`.
    pub fn eval_grid_t(&self, tx: &[f64], ty: &[f64]) -> DMatrix<f64> {
        let ex = self.bx.matrix_t(tx);
        let ey = self.by.matrix_t(ty);
        &ex * &self.values * ey.transpose()
    }
}

/// Discrete projection onto `span{Q_0, ..., Q_N}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    basis: MhfBasis,
    /// Coefficients against the orthonormal polynomials `H_n / sqrt(sqrt(pi) 2^n n!)`.
    normalized: Vec<f64>,
}

/// `u_n = (gamma_n)^{-1} sum_j f(x_j) Q_n(x_j) chi_j`.
pub fn project<F: Fn(UnitPoint) -> f64>(basis: &MhfBasis, rule: &MhfRule, f: F) -> Result<Projection> {
    if rule.alpha() != basis.alpha() {
        return Err(Error::Contract(format!(
            "rule alpha {} differs from basis alpha {}",
            rule.alpha(),
            basis.alpha()
        )));
    }
    if rule.degree() < basis.degree() {
        return Err(Error::Contract(format!(
            "rule degree {} is below basis degree {}",
            rule.degree(),
            basis.degree()
        )));
    }
    let n = basis.degree();
    let h = rule.hermite();
    let mut normalized = vec![0.0; n + 1];
    for (j, p) in rule.points().iter().enumerate() {
        let z = h.nodes()[j];
        let fj = f(*p);
        if !fj.is_finite() {
            return Err(Error::Evaluation {
                index: j,
                x: p.x,
                value: fj,
            });
        }
        let scale = (h.log_weights()[j] + 0.5 * z * z).exp();
        let psi = hermite_functions_all(n, z);
        for k in 0..=n {
            normalized[k] += fj * psi[k] * scale;
        }
    }
    Ok(Projection {
        basis: *basis,
        normalized,
    })
}

impl Projection {
    pub fn basis(&self) -> &MhfBasis {
        &self.basis
    }

    /// Coefficients `u_n` against `Q_n`; tiny ones underflow for large `n`.
    pub fn coefficients(&self) -> Vec<f64> {
        let a = self.basis.alpha();
        self.normalized
            .iter()
            .enumerate()
            .map(|(k, c)| c * (-0.5 * (ln_gamma_n(a, k) + a.ln())).exp())
            .collect()
    }

    /// `sum_n gamma_n u_n^2`.
    pub fn energy(&self) -> f64 {
        self.normalized.iter().map(|c| c * c).sum::<f64>() / self.basis.alpha()
    }

    pub fn eval_at(&self, p: UnitPoint) -> Result<f64> {
        let z = self.basis.alpha() * p.logit();
        let q = normalized_hermite_all(self.basis.degree(), z)?;
        Ok(q.iter().zip(&self.normalized).map(|(a, b)| a * b).sum())
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(x > 0.0 && x < 1.0) {
            return Err(Error::Domain(format!("projection evaluated at {x}")));
        }
        self.eval_at(UnitPoint::from_x(x))
    }
}

/// Maximum and `chi`-weighted L2 error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorNorms {
    pub inf: f64,
    pub l2chi: f64,
}

const GRID_LOGIT: f64 = 8.0;
const GRID_EDGE: f64 = 1e-3;

fn logistic_and_uniform(n_logistic: usize, n_uniform: usize) -> Vec<UnitPoint> {
    let mut out = Vec::with_capacity(n_logistic + n_uniform);
    for k in 0..n_logistic {
        let t = -GRID_LOGIT + 2.0 * GRID_LOGIT * k as f64 / (n_logistic - 1) as f64;
        out.push(UnitPoint::from_logit(t));
    }
    for k in 0..n_uniform {
        let x = GRID_EDGE + (1.0 - 2.0 * GRID_EDGE) * k as f64 / (n_uniform - 1) as f64;
        out.push(UnitPoint::from_x(x));
    }
    out
}

/// The fixed 1D evaluation grid: 2001 logistic points with logit in [-8, 8]
/// and 999 uniform points on [1e-3, 1 - 1e-3].
pub fn eval_grid_1d() -> Vec<UnitPoint> {
    logistic_and_uniform(2001, 999)
}

/// One axis of the 101 x 101 evaluation grid: 67 logistic and 34 uniform points.
pub fn eval_grid_axis_2d() -> Vec<UnitPoint> {
    logistic_and_uniform(67, 34)
}

/// Error norms of a 1D approximation for basis degree `n`.
pub fn error_norms_1d<A, E>(approx: A, exact: E, alpha: f64, n: usize) -> Result<ErrorNorms>
where
    A: Fn(UnitPoint) -> f64,
    E: Fn(UnitPoint) -> f64,
{
    let inf = eval_grid_1d()
        .iter()
        .map(|&p| (approx(p) - exact(p)).abs())
        .fold(0.0, f64::max);
    let rule = mhf_gauss_rule(&MhfBasis::new(alpha, 2 * n + 16)?)?;
    let mut sq = 0.0;
    for (p, w) in rule.points().iter().zip(rule.weights()) {
        let d = approx(*p) - exact(*p);
        sq += d * d * w;
    }
    Ok(ErrorNorms {
        inf,
        l2chi: sq.sqrt(),
    })
}

/// Error norms of a 2D approximation on the tensor grids.
pub fn error_norms_2d<A, E>(approx: A, exact: E, alpha: (f64, f64), n: usize) -> Result<ErrorNorms>
where
    A: Fn(&[UnitPoint], &[UnitPoint]) -> DMatrix<f64>,
    E: Fn(UnitPoint, UnitPoint) -> f64,
{
    let axis = eval_grid_axis_2d();
    let vals = approx(&axis, &axis);
    let mut inf: f64 = 0.0;
    for (i, px) in axis.iter().enumerate() {
        for (j, py) in axis.iter().enumerate() {
            inf = inf.max((vals[(i, j)] - exact(*px, *py)).abs());
        }
    }
    let rx = mhf_gauss_rule(&MhfBasis::new(alpha.0, 2 * n + 16)?)?;
    let ry = mhf_gauss_rule(&MhfBasis::new(alpha.1, 2 * n + 16)?)?;
    let vals = approx(rx.points(), ry.points());
    let mut sq = 0.0;
    for (i, (px, wx)) in rx.points().iter().zip(rx.weights()).enumerate() {
        for (j, (py, wy)) in ry.points().iter().zip(ry.weights()).enumerate() {
            let d = vals[(i, j)] - exact(*px, *py);
            sq += d * d * wx * wy;
        }
    }
    Ok(ErrorNorms {
        inf,
        l2chi: sq.sqrt(),
    })
}

/// Pseudo-derivative error of interpolation at the roots of `Q_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperconvergenceScan {
    /// Largest error over the roots of `Q_{n-1}`.
    pub at_roots: f64,
    /// Largest error over the logit grid and those roots.
    pub global: f64,
}

/// Interpolates `f` at the roots of `Q_n` and compares `x (1 - x) d/dx` of the
/// interpolant with `df` at the roots of `Q_{n-1}` and on a logit grid, both
/// restricted to logits in [-8, 8].
pub fn derivative_superconvergence<F, D>(f: F, df: D, alpha: f64, n: usize) -> Result<SuperconvergenceScan>
where
    F: Fn(UnitPoint) -> f64,
    D: Fn(UnitPoint) -> f64,
{
    if n < 2 {
        return Err(Error::Contract("superconvergence scan needs n >= 2".into()));
    }
    let rule = mhf_gauss_rule(&MhfBasis::new(alpha, n - 1)?)?;
    let basis = LagrangeBasis::mhf(&rule)?;
    let values = rule.points().iter().map(|p| f(*p)).collect();
    let interp = Interpolant1D::new(basis, values)?;
    let err = |p: UnitPoint| (interp.derivative_t(p.logit()) - df(p)).abs();

    let roots = mhf_gauss_rule(&MhfBasis::new(alpha, n - 2)?)?;
    let at_roots = roots
        .points()
        .iter()
        .filter(|p| p.logit().abs() <= GRID_LOGIT)
        .map(|p| err(*p))
        .fold(0.0, f64::max);
    let grid = (0..=4000)
        .map(|k| UnitPoint::from_logit(-GRID_LOGIT + 2.0 * GRID_LOGIT * k as f64 / 4000.0))
        .map(err)
        .fold(0.0, f64::max);
    Ok(SuperconvergenceScan {
        at_roots,
        global: grid.max(at_roots),
    })
}
