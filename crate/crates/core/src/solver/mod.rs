//! Nystrom collocation for `lambda u = g + int Theta psi(s, u) ds` in 1D and 2D.
//!
//! Two collocation methods are provided:
//!
//! * [`Method::MhfCollocation`] collocates at MHF-Gauss nodes `x_i` on (0, 1)
//!   and interpolates with generalized Lagrange functions in the logit.
//! * [`Method::SmoothedHermite`] maps the equation to the real line with
//!   `x = sigma(z / alpha)` and collocates at Gauss-Hermite nodes `z_i`.
//!
//! Under the change of variables the two discrete systems coincide, so their
//! node values agree to rounding.
//!
//! Two quadrature rules discretize the integral:
//!
//! * [`QuadratureRule::Product`] (default) integrates the singular kernel
//!   exactly against Hermite-function cardinals at the quadrature nodes and
//!   interpolates only the smooth factor `k psi(s, u) ds/dz`.
//! * [`QuadratureRule::Gauss`] applies the MHF-Gauss rule to the whole
//!   integrand with modified weights `chi_k / chi(s_k)`. It needs quadrature
//!   nodes disjoint from the collocation nodes and converges slowly for
//!   diagonal-singular kernels.

mod moments;
mod newton;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, DVector};

use crate::approx::{
    error_norms_1d, error_norms_2d, tensor_interpolant, ErrorNorms, Interpolant1D, Interpolant2D,
    LagrangeBasis, NodeDomain,
};
use crate::error::{Error, Result};
use crate::hermite::{hermite_gauss_rule, HermiteRule};
use crate::mhf::{ln_logistic, ln_weight_chi_at, map_to_unit, UnitPoint};
use crate::problem::{Exact, KernelKind, Nonlinearity, ProblemSpec};

pub use newton::{newton_driver, Damping, NewtonOptions, NewtonOutcome};

use moments::{ln_jacobian, ln_logistic_gap, product_moments};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    MhfCollocation,
    SmoothedHermite,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::MhfCollocation => "mhf",
            Method::SmoothedHermite => "smoothed",
        })
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mhf" | "mhf-collocation" => Ok(Method::MhfCollocation),
            "smoothed" | "smoothed-hermite" => Ok(Method::SmoothedHermite),
            _ => Err(Error::Unknown {
                kind: "method",
                name: s.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuadratureRule {
    Product,
    Gauss,
}

impl QuadratureRule {
    /// `NI - N` used when no quadrature degree is given.
    pub fn default_ni_offset(&self) -> usize {
        match self {
            QuadratureRule::Product => 0,
            QuadratureRule::Gauss => 1,
        }
    }
}

impl fmt::Display for QuadratureRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuadratureRule::Product => "product",
            QuadratureRule::Gauss => "gauss",
        })
    }
}

impl FromStr for QuadratureRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "product" => Ok(QuadratureRule::Product),
            "gauss" => Ok(QuadratureRule::Gauss),
            _ => Err(Error::Unknown {
                kind: "quadrature rule",
                name: s.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Collocation degree: `N + 1` nodes per axis.
    pub n: usize,
    /// Quadrature degree: `NI + 1` nodes per axis.
    pub ni: usize,
    pub alpha: f64,
    /// Mapping parameter of the second axis in 2D.
    pub alpha2: f64,
    pub method: Method,
    pub rule: QuadratureRule,
    pub newton: NewtonOptions,
}

impl SolverConfig {
    /// Product rule with `NI = N` and the MHF collocation method.
    pub fn new(n: usize, alpha: f64) -> Self {
        SolverConfig {
            n,
            ni: n,
            alpha,
            alpha2: alpha,
            method: Method::MhfCollocation,
            rule: QuadratureRule::Product,
            newton: NewtonOptions::default(),
        }
    }

    /// Gauss rule with `NI = N + 1`.
    pub fn gauss(n: usize, alpha: f64) -> Self {
        SolverConfig {
            ni: n + 1,
            rule: QuadratureRule::Gauss,
            ..Self::new(n, alpha)
        }
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn with_ni(mut self, ni: usize) -> Self {
        self.ni = ni;
        self
    }

    pub fn with_alpha2(mut self, alpha2: f64) -> Self {
        self.alpha2 = alpha2;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.newton.tol = tol;
        self
    }

    pub fn validate(&self, dimension: usize) -> Result<()> {
        for a in [self.alpha, self.alpha2] {
            if !(a > 0.0 && a <= 100.0) {
                return Err(Error::Contract(format!("alpha = {a} must lie in (0, 100]")));
            }
        }
        if !(self.newton.tol > 0.0) {
            return Err(Error::Contract("newton tolerance must be positive".into()));
        }
        let (max_n, max_ni) = if dimension == 2 { (48, 49) } else { (400, 400) };
        if self.n > max_n || self.ni > max_ni {
            return Err(Error::Contract(format!(
                "N = {}, NI = {} exceed the {dimension}D limits {max_n}, {max_ni}",
                self.n, self.ni
            )));
        }
        Ok(())
    }
}

/// Quadrature weights `W[row][column]`; in 2D rows are `i (N+1) + j` and
/// columns `k (NI+1) + l`.
#[derive(Debug, Clone, PartialEq)]
pub struct NystromMatrix {
    pub entries: DMatrix<f64>,
}

impl NystromMatrix {
    pub fn row_sums(&self) -> Vec<f64> {
        self.entries.row_iter().map(|r| r.sum()).collect()
    }
}

type MomentKey = (u8, u64, u64, usize, usize);

fn moment_cache() -> &'static Mutex<HashMap<MomentKey, Arc<DMatrix<f64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<MomentKey, Arc<DMatrix<f64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached_moments(kind: KernelKind, alpha: f64, colloc: &HermiteRule, quad: &HermiteRule) -> Arc<DMatrix<f64>> {
    let (tag, mu) = match kind {
        KernelKind::Algebraic { mu } => (0, mu),
        KernelKind::Logarithmic => (1, 0.0),
        KernelKind::EndpointAlgebraic { mu } => (2, mu),
    };
    let key = (tag, mu.to_bits(), alpha.to_bits(), colloc.degree(), quad.degree());
    if let Some(m) = moment_cache().lock().expect("moment cache poisoned").get(&key) {
        return m.clone();
    }
    let m = Arc::new(product_moments(kind, alpha, colloc.nodes(), quad));
    moment_cache()
        .lock()
        .expect("moment cache poisoned")
        .insert(key, m.clone());
    m
}

/// One axis of the discretization.
struct Axis {
    colloc: HermiteRule,
    /// Collocation points on (0, 1).
    x: Vec<UnitPoint>,
    /// Quadrature points on (0, 1).
    s: Vec<UnitPoint>,
    /// Collocation interpolant evaluated at the quadrature points.
    e: DMatrix<f64>,
    /// Singular part of the weights, without the smooth factor `k`.
    w: DMatrix<f64>,
}

fn unit_from_real(alpha: f64, z: f64) -> UnitPoint {
    UnitPoint {
        x: map_to_unit(alpha, z),
        xc: map_to_unit(alpha, -z),
    }
}

/// `|x - s|` for two points of (0, 1), using whichever representation keeps
/// the subtraction exact.
fn unit_gap(a: UnitPoint, b: UnitPoint) -> f64 {
    if a.x <= 0.5 && b.x <= 0.5 {
        (a.x - b.x).abs()
    } else {
        (a.xc - b.xc).abs()
    }
}

const COINCIDENCE: f64 = 1e-12;

impl Axis {
    fn build(kind: KernelKind, alpha: f64, config: &SolverConfig) -> Result<Self> {
        let colloc = hermite_gauss_rule(config.n)?;
        let quad = hermite_gauss_rule(config.ni)?;
        let method = config.method;
        let (x, s): (Vec<UnitPoint>, Vec<UnitPoint>) = match method {
            Method::MhfCollocation => (
                colloc.nodes().iter().map(|z| UnitPoint::from_logit(z / alpha)).collect(),
                quad.nodes().iter().map(|z| UnitPoint::from_logit(z / alpha)).collect(),
            ),
            Method::SmoothedHermite => (
                colloc.nodes().iter().map(|&z| unit_from_real(alpha, z)).collect(),
                quad.nodes().iter().map(|&z| unit_from_real(alpha, z)).collect(),
            ),
        };
        let e = match method {
            Method::MhfCollocation => {
                let t: Vec<f64> = s.iter().map(|p| p.logit()).collect();
                LagrangeBasis::on_unit(&x)?.matrix_t(&t)
            }
            Method::SmoothedHermite => LagrangeBasis::hermite(&colloc)?.matrix_t(quad.nodes()),
        };
        let (nr, nc) = (x.len(), s.len());
        let w = match config.rule {
            QuadratureRule::Product => {
                let m = cached_moments(kind, alpha, &colloc, &quad);
                match method {
                    Method::MhfCollocation => {
                        DMatrix::from_fn(nr, nc, |i, k| m[(i, k)] * s[k].x * s[k].xc / alpha)
                    }
                    Method::SmoothedHermite => {
                        let rho: Vec<f64> = quad.nodes().iter().map(|&q| ln_jacobian(alpha, q).exp()).collect();
                        DMatrix::from_fn(nr, nc, |i, k| m[(i, k)] * rho[k])
                    }
                }
            }
            QuadratureRule::Gauss => {
                let mut w = DMatrix::zeros(nr, nc);
                for i in 0..nr {
                    for k in 0..nc {
                        w[(i, k)] = match method {
                            Method::MhfCollocation => {
                                let gap = unit_gap(x[i], s[k]);
                                if kind.is_diagonal() && gap <= COINCIDENCE {
                                    return Err(coincidence(i, k, gap));
                                }
                                let ln_chi_k = quad.log_weights()[k] - alpha.ln();
                                let theta = kind.from_logs(gap.ln(), s[k].xc.ln());
                                theta * (ln_chi_k - ln_weight_chi_at(alpha, s[k])).exp()
                            }
                            Method::SmoothedHermite => {
                                let (zi, qk) = (colloc.nodes()[i], quad.nodes()[k]);
                                let ln_gap = ln_logistic_gap(qk / alpha, zi / alpha, (qk - zi) / alpha);
                                if kind.is_diagonal() && ln_gap <= COINCIDENCE.ln() {
                                    return Err(coincidence(i, k, ln_gap.exp()));
                                }
                                let xi = kind.from_logs(ln_gap, ln_logistic(-qk / alpha));
                                xi * (quad.log_modified_weight(k) + ln_jacobian(alpha, qk)).exp()
                            }
                        };
                    }
                }
                w
            }
        };
        Ok(Axis {
            colloc,
            x,
            s,
            e,
            w,
        })
    }

    fn basis(&self, method: Method) -> Result<LagrangeBasis> {
        match method {
            Method::MhfCollocation => LagrangeBasis::on_unit(&self.x),
            Method::SmoothedHermite => LagrangeBasis::hermite(&self.colloc),
        }
    }
}

fn coincidence(i: usize, k: usize, gap: f64) -> Error {
    Error::Assembly(format!(
        "quadrature node {k} coincides with collocation node {i} (gap {gap:e}); choose a different NI"
    ))
}

/// The assembled nonlinear system `lambda U - g - W psi(S, E U) = 0`.
pub struct DiscreteSystem {
    pub lambda: f64,
    pub w: NystromMatrix,
    pub e: DMatrix<f64>,
    pub g: DVector<f64>,
    /// Coordinates of every quadrature point, passed to `psi`.
    pub positions: Vec<Vec<f64>>,
    pub(crate) nonlinearity: Nonlinearity,
}

impl DiscreteSystem {
    fn quadrature_values(&self, u: &DVector<f64>) -> DVector<f64> {
        &self.e * u
    }

    pub fn residual(&self, u: &DVector<f64>) -> DVector<f64> {
        let v = self.quadrature_values(u);
        let psi = DVector::from_fn(v.len(), |k, _| self.nonlinearity.psi(&self.positions[k], v[k]));
        u * self.lambda - &self.g - &self.w.entries * psi
    }

    pub fn jacobian(&self, u: &DVector<f64>) -> DMatrix<f64> {
        let v = self.quadrature_values(u);
        let mut we = self.w.entries.clone();
        for k in 0..v.len() {
            let d = self.nonlinearity.dpsi(&self.positions[k], v[k]);
            we.column_mut(k).scale_mut(d);
        }
        let mut j = -(we * &self.e);
        for i in 0..j.nrows() {
            j[(i, i)] += self.lambda;
        }
        j
    }

    /// `||F(U)||_inf` recomputed entry by entry with compensated sums.
    pub fn certify(&self, u: &[f64]) -> f64 {
        let nq = self.e.nrows();
        let mut psi = vec![0.0; nq];
        for k in 0..nq {
            let v = neumaier((0..u.len()).map(|j| self.e[(k, j)] * u[j]));
            psi[k] = self.nonlinearity.psi(&self.positions[k], v);
        }
        (0..u.len())
            .map(|i| {
                let terms = (0..nq).map(|k| -self.w.entries[(i, k)] * psi[k]);
                let r = neumaier(terms.chain([self.lambda * u[i], -self.g[i]]));
                r.abs()
            })
            .fold(0.0, |a, b| if b.is_nan() { f64::NAN } else { a.max(b) })
    }
}

fn neumaier<I: Iterator<Item = f64>>(it: I) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in it {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

struct Discretization {
    axes: Vec<Axis>,
    system: DiscreteSystem,
}

fn discretize(problem: &ProblemSpec, config: &SolverConfig) -> Result<Discretization> {
    let dim = problem.dimension();
    config.validate(dim)?;
    let kinds = problem.kernel.kinds();
    if dim == 1 {
        let ax = Axis::build(kinds[0], config.alpha, config)?;
        let mut w = ax.w.clone();
        if !problem.kernel.smooth_is_one() {
            for i in 0..w.nrows() {
                for k in 0..w.ncols() {
                    w[(i, k)] *= problem.kernel.k1(ax.s[k].x, ax.x[i].x);
                }
            }
        }
        check_finite(&w)?;
        let g = DVector::from_vec(problem.forcing_1d(&ax.x)?);
        let positions = ax.s.iter().map(|p| vec![p.x]).collect();
        let e = ax.e.clone();
        let system = DiscreteSystem {
            lambda: problem.lambda,
            w: NystromMatrix { entries: w },
            e,
            g,
            positions,
            nonlinearity: problem.nonlinearity.clone(),
        };
        return Ok(Discretization { axes: vec![ax], system });
    }
    let ax = Axis::build(kinds[0], config.alpha, config)?;
    let ay = Axis::build(kinds[1], config.alpha2, config)?;
    let mut w = ax.w.kronecker(&ay.w);
    if !problem.kernel.smooth_is_one() {
        let (ny, nt) = (ay.x.len(), ay.s.len());
        for r in 0..w.nrows() {
            let (i, j) = (r / ny, r % ny);
            for c in 0..w.ncols() {
                let (k, l) = (c / nt, c % nt);
                w[(r, c)] *= problem.kernel.k2(ax.s[k].x, ay.s[l].x, ax.x[i].x, ay.x[j].x);
            }
        }
    }
    check_finite(&w)?;
    let gm = problem.forcing_2d(&ax.x, &ay.x)?;
    let g = DVector::from_fn(ax.x.len() * ay.x.len(), |r, _| gm[(r / ay.x.len(), r % ay.x.len())]);
    let mut positions = Vec::with_capacity(ax.s.len() * ay.s.len());
    for s in &ax.s {
        for t in &ay.s {
            positions.push(vec![s.x, t.x]);
        }
    }
    let e = ax.e.kronecker(&ay.e);
    let system = DiscreteSystem {
        lambda: problem.lambda,
        w: NystromMatrix { entries: w },
        e,
        g,
        positions,
        nonlinearity: problem.nonlinearity.clone(),
    };
    Ok(Discretization {
        axes: vec![ax, ay],
        system,
    })
}

fn check_finite(w: &DMatrix<f64>) -> Result<()> {
    for i in 0..w.nrows() {
        for k in 0..w.ncols() {
            if !w[(i, k)].is_finite() {
                return Err(Error::Assembly(format!("non-finite weight {} at ({i}, {k})", w[(i, k)])));
            }
        }
    }
    Ok(())
}

/// Quadrature-kernel weights of the configured scheme.
pub fn assemble_nystrom(problem: &ProblemSpec, config: &SolverConfig) -> Result<NystromMatrix> {
    Ok(discretize(problem, config)?.system.w)
}

/// The full discrete system, for inspection and residual checks.
pub fn assemble_system(problem: &ProblemSpec, config: &SolverConfig) -> Result<DiscreteSystem> {
    Ok(discretize(problem, config)?.system)
}

#[derive(Debug, Clone)]
enum SolutionInterpolant {
    OneD(Interpolant1D),
    TwoD(Interpolant2D),
}

/// Node values with their interpolant and Newton diagnostics.
#[derive(Debug, Clone)]
pub struct Solution {
    pub config: SolverConfig,
    /// Node values; row-major `(i, j) -> i (N+1) + j` in 2D.
    pub node_values: Vec<f64>,
    pub newton_iters: usize,
    /// Certified `||F(U)||_inf`.
    pub final_residual: f64,
    pub residual_history: Vec<f64>,
    nodes: Vec<Vec<UnitPoint>>,
    interpolant: SolutionInterpolant,
}

impl Solution {
    pub fn dimension(&self) -> usize {
        self.nodes.len()
    }

    /// Collocation points on (0, 1) of axis `axis`.
    pub fn nodes(&self, axis: usize) -> &[UnitPoint] {
        &self.nodes[axis]
    }

    fn t_of(&self, basis: &LagrangeBasis, alpha: f64, p: UnitPoint) -> f64 {
        match basis.domain() {
            NodeDomain::Unit => p.logit(),
            NodeDomain::Real => alpha * p.logit(),
        }
    }

    /// `u_N(x)`; NaN for a 2D solution.
    pub fn eval(&self, p: UnitPoint) -> f64 {
        match &self.interpolant {
            SolutionInterpolant::OneD(f) => f.eval_t(self.t_of(f.basis(), self.config.alpha, p)),
            SolutionInterpolant::TwoD(_) => f64::NAN,
        }
    }

    /// `u_N(x, y)`; NaN for a 1D solution.
    pub fn eval_2d(&self, p: UnitPoint, q: UnitPoint) -> f64 {
        match &self.interpolant {
            SolutionInterpolant::TwoD(f) => {
                let (bx, by) = f.bases();
                f.eval_t(self.t_of(bx, self.config.alpha, p), self.t_of(by, self.config.alpha2, q))
            }
            SolutionInterpolant::OneD(_) => f64::NAN,
        }
    }

    /// `u_N` on the tensor grid `xs x ys` (2D only).
    pub fn eval_grid(&self, xs: &[UnitPoint], ys: &[UnitPoint]) -> DMatrix<f64> {
        match &self.interpolant {
            SolutionInterpolant::TwoD(f) => {
                let (bx, by) = f.bases();
                let tx: Vec<f64> = xs.iter().map(|p| self.t_of(bx, self.config.alpha, *p)).collect();
                let ty: Vec<f64> = ys.iter().map(|p| self.t_of(by, self.config.alpha2, *p)).collect();
                f.eval_grid_t(&tx, &ty)
            }
            SolutionInterpolant::OneD(_) => DMatrix::from_element(xs.len(), ys.len(), f64::NAN),
        }
    }

    /// Node values as an `(N+1) x (N+1)` matrix (2D only).
    pub fn node_matrix(&self) -> Option<DMatrix<f64>> {
        match &self.interpolant {
            SolutionInterpolant::TwoD(f) => Some(f.values().clone()),
            SolutionInterpolant::OneD(_) => None,
        }
    }

    /// Errors on the fixed evaluation grid and in the weighted L2 norm.
    pub fn error_norms(&self, exact: &Exact) -> Result<ErrorNorms> {
        match exact {
            Exact::OneD(u) => error_norms_1d(|p| self.eval(p), |p| u(p), self.config.alpha, self.config.n),
            Exact::Separable(_) => error_norms_2d(
                |xs, ys| self.eval_grid(xs, ys),
                |p, q| exact.eval_2d(p, q),
                (self.config.alpha, self.config.alpha2),
                self.config.n,
            ),
        }
    }

    /// Largest error at the collocation points.
    pub fn collocation_error(&self, exact: &Exact) -> f64 {
        match exact {
            Exact::OneD(u) => self
                .node_values
                .iter()
                .zip(&self.nodes[0])
                .map(|(v, p)| (v - u(*p)).abs())
                .fold(0.0, f64::max),
            Exact::Separable(_) => {
                let ny = self.nodes.get(1).map_or(0, |n| n.len());
                self.node_values
                    .iter()
                    .enumerate()
                    .map(|(r, v)| (v - exact.eval_2d(self.nodes[0][r / ny], self.nodes[1][r % ny])).abs())
                    .fold(0.0, f64::max)
            }
        }
    }
}

fn finish(
    disc: Discretization,
    config: &SolverConfig,
    u: Vec<f64>,
    iters: usize,
    history: Vec<f64>,
) -> Result<Solution> {
    let residual = disc.system.certify(&u);
    if !(residual <= config.newton.tol) {
        return Err(Error::NonConvergence {
            reason: "independent residual check exceeds the tolerance".into(),
            best_residual: residual,
            best_iterate: u,
            history,
        });
    }
    let interpolant = if disc.axes.len() == 1 {
        SolutionInterpolant::OneD(Interpolant1D::new(disc.axes[0].basis(config.method)?, u.clone())?)
    } else {
        let ny = disc.axes[1].x.len();
        let v = DMatrix::from_fn(disc.axes[0].x.len(), ny, |i, j| u[i * ny + j]);
        SolutionInterpolant::TwoD(tensor_interpolant(
            disc.axes[0].basis(config.method)?,
            disc.axes[1].basis(config.method)?,
            v,
        )?)
    };
    Ok(Solution {
        config: *config,
        node_values: u,
        newton_iters: iters,
        final_residual: residual,
        residual_history: history,
        nodes: disc.axes.iter().map(|a| a.x.clone()).collect(),
        interpolant,
    })
}

/// Linear solve of `(lambda I - W E) U = g`; requires `psi(u) = u`.
pub fn solve_linear(problem: &ProblemSpec, config: &SolverConfig) -> Result<Solution> {
    if !problem.nonlinearity.is_identity() {
        return Err(Error::Contract("solve_linear needs psi(u) = u".into()));
    }
    let disc = discretize(problem, config)?;
    let sys = &disc.system;
    let mut a = -(&sys.w.entries * &sys.e);
    for i in 0..a.nrows() {
        a[(i, i)] += sys.lambda;
    }
    let lu = a.lu();
    let diag = lu.u().diagonal();
    let (lo, hi) = diag
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), d| (lo.min(d.abs()), hi.max(d.abs())));
    let rcond = if hi > 0.0 { lo / hi } else { 0.0 };
    let u = match lu.solve(&sys.g) {
        Some(u) if rcond > 1e-15 && u.iter().all(|v| v.is_finite()) => u,
        _ => return Err(Error::Singular { rcond }),
    };
    let u: Vec<f64> = u.iter().copied().collect();
    let r = sys.certify(&u);
    finish(disc, config, u, 0, vec![r])
}

/// Damped Newton on `lambda U - g - W psi(S, E U) = 0` from `U0 = g / lambda`.
pub fn solve_nonlinear(problem: &ProblemSpec, config: &SolverConfig) -> Result<Solution> {
    let disc = discretize(problem, config)?;
    let sys = &disc.system;
    let x0 = &sys.g / sys.lambda;
    let out = newton_driver(
        |u| Ok(sys.residual(u)),
        |u| Ok(sys.jacobian(u)),
        x0,
        config.newton,
    )?;
    let u = out.x.iter().copied().collect();
    finish(disc, config, u, out.iters, out.history)
}

/// 2D solve; linear problems go through the direct solver.
pub fn solve_2d(problem: &ProblemSpec, config: &SolverConfig) -> Result<Solution> {
    if problem.dimension() != 2 {
        return Err(Error::Contract("solve_2d needs a 2D problem".into()));
    }
    solve(problem, config)
}

/// Solve with the smoothing-transformation Hermite collocation method.
pub fn solve_smoothed(problem: &ProblemSpec, config: &SolverConfig) -> Result<Solution> {
    solve(problem, &config.with_method(Method::SmoothedHermite))
}

/// Dispatches to the linear or Newton solver.
pub fn solve(problem: &ProblemSpec, config: &SolverConfig) -> Result<Solution> {
    if problem.nonlinearity.is_identity() {
        solve_linear(problem, config)
    } else {
        solve_nonlinear(problem, config)
    }
}
