//! Experiment drivers behind the subcommands.

use std::f64::consts::PI;
use std::str::FromStr;
use std::time::Instant;

use crate::approx::eval_grid_1d;
use crate::error::{Error, Result};
use crate::hermite::mirrored_sum;
use crate::mhf::{ln_weight_chi_at, mhf_gauss_rule, MhfBasis};
use crate::problem::ProblemSpec;
use crate::quad::tanh_sinh;
use crate::solver::{solve, Method, Solution, SolverConfig};

use super::report::{ConvergenceReport, ConvergenceRow, Metadata};

/// One row of a node dump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeRow {
    pub j: usize,
    pub z: f64,
    pub x: f64,
    pub chi: f64,
}

/// MHF-Gauss nodes `x_j = sigma(z_j / alpha)` and weights `chi_j`.
pub fn node_table(alpha: f64, n: usize) -> Result<Vec<NodeRow>> {
    let rule = mhf_gauss_rule(&MhfBasis::new(alpha, n)?)?;
    let z = rule.hermite().nodes();
    Ok(rule
        .points()
        .iter()
        .zip(rule.weights())
        .enumerate()
        .map(|(j, (p, &chi))| NodeRow { j, z: z[j], x: p.x, chi })
        .collect())
}

/// Test integrands for the quadrature check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Integrand {
    /// `int_0^1 x^{1/2} (-log(x(1-x))) dx`.
    SqrtLogWeight,
    /// `int_0^1 log(x) (-log(x(1-x))) dx`.
    LogLogWeight,
    /// `int_0^1 logit(x)^k chi(x) dx`.
    Moment(u32),
    Zero,
}

impl FromStr for Integrand {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sqrt-logweight" => Ok(Integrand::SqrtLogWeight),
            "log-logweight" => Ok(Integrand::LogLogWeight),
            "moments" => Ok(Integrand::Moment(2)),
            "zero" => Ok(Integrand::Zero),
            _ => Err(Error::Unknown {
                kind: "integrand",
                name: s.to_string(),
            }),
        }
    }
}

fn gamma_half_odd(k: u32) -> f64 {
    // Gamma((k + 1) / 2) for even k
    let mut g = PI.sqrt();
    for m in 0..k / 2 {
        g *= m as f64 + 0.5;
    }
    g
}

impl Integrand {
    /// `f(x) w(x)` for the weight-one integrands, from `x` and `1 - x`.
    fn unit_weight_value(&self, x: f64, xc: f64) -> f64 {
        let w = -(x.ln() + xc.ln());
        match self {
            Integrand::SqrtLogWeight => x.sqrt() * w,
            Integrand::LogLogWeight => x.ln() * w,
            Integrand::Moment(_) | Integrand::Zero => 0.0,
        }
    }

    /// Reference value: tanh-sinh for the weight-one integrands, closed form
    /// for the Gaussian moments.
    pub fn reference(&self, alpha: f64) -> Result<f64> {
        match *self {
            Integrand::Moment(k) if k % 2 == 1 => Ok(0.0),
            Integrand::Moment(k) => Ok(gamma_half_odd(k) / alpha.powi(k as i32 + 1)),
            Integrand::Zero => Ok(0.0),
            _ => tanh_sinh(1.0, |l, r| self.unit_weight_value(l, r), 1e-13, 14),
        }
    }

    /// MHF-Gauss approximation with `n + 1` nodes.
    pub fn quadrature(&self, alpha: f64, n: usize) -> Result<f64> {
        let rule = mhf_gauss_rule(&MhfBasis::new(alpha, n)?)?;
        let h = rule.hermite();
        let mut terms = Vec::with_capacity(rule.len());
        for (j, p) in rule.points().iter().enumerate() {
            terms.push(match *self {
                Integrand::Zero => 0.0,
                Integrand::Moment(k) => rule.weights()[j] * (h.nodes()[j] / alpha).powi(k as i32),
                _ => {
                    // f w / chi times chi_j, with chi_j / chi(x_j) kept in logs
                    let ln_ratio = rule.log_weight(j) - ln_weight_chi_at(alpha, *p);
                    self.unit_weight_value(p.x, p.xc) * ln_ratio.exp()
                }
            });
        }
        let sum = mirrored_sum(&terms);
        if !sum.is_finite() {
            return Err(Error::Evaluation {
                index: n,
                x: f64::NAN,
                value: sum,
            });
        }
        Ok(sum)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadRow {
    pub n: usize,
    pub value: f64,
    pub error: f64,
}

pub fn quad_test(alpha: f64, ns: &[usize], integrand: Integrand) -> Result<Vec<QuadRow>> {
    let reference = integrand.reference(alpha)?;
    ns.iter()
        .map(|&n| {
            let value = integrand.quadrature(alpha, n)?;
            Ok(QuadRow {
                n,
                value,
                error: (value - reference).abs(),
            })
        })
        .collect()
}

/// Solver settings shared by the sweep commands; `N` and `NI` are filled per row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSettings {
    pub base: SolverConfig,
    pub ni_offset: usize,
}

impl SweepSettings {
    pub fn config(&self, n: usize) -> SolverConfig {
        SolverConfig {
            n,
            ni: n + self.ni_offset,
            ..self.base
        }
    }
}

/// Summary of one solve against the known solution.
#[derive(Debug, Clone)]
pub struct SolveSummary {
    pub solution: Solution,
    pub err_inf: f64,
    pub err_l2chi: f64,
    pub err_colloc: f64,
    pub runtime_ms: f64,
}

pub fn solve_summary(problem: &ProblemSpec, config: &SolverConfig) -> Result<SolveSummary> {
    let start = Instant::now();
    let solution = solve(problem, config)?;
    let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    let (err_inf, err_l2chi, err_colloc) = match &problem.exact {
        Some(exact) => {
            let e = solution.error_norms(exact)?;
            (e.inf, e.l2chi, solution.collocation_error(exact))
        }
        None => (f64::NAN, f64::NAN, f64::NAN),
    };
    Ok(SolveSummary {
        solution,
        err_inf,
        err_l2chi,
        err_colloc,
        runtime_ms,
    })
}

/// `(x, u_N(x))` on the 1D evaluation grid, or `(x, y, u_N)` on the 2D one.
pub fn solution_dump(solution: &Solution) -> Vec<Vec<f64>> {
    if solution.dimension() == 1 {
        let mut grid = eval_grid_1d();
        grid.sort_by(|a, b| a.x.total_cmp(&b.x));
        grid.iter().map(|p| vec![p.x, solution.eval(*p)]).collect()
    } else {
        let axis = crate::approx::eval_grid_axis_2d();
        let u = solution.eval_grid(&axis, &axis);
        let mut rows = Vec::with_capacity(axis.len() * axis.len());
        for (i, p) in axis.iter().enumerate() {
            for (j, q) in axis.iter().enumerate() {
                rows.push(vec![p.x, q.x, u[(i, j)]]);
            }
        }
        rows
    }
}

/// Convergence sweep; a failed N becomes a `nan` row.
pub fn converge(problem: &ProblemSpec, settings: &SweepSettings, ns: &[usize]) -> ConvergenceReport {
    let base = settings.base;
    let mut report = ConvergenceReport::new(Metadata::now(
        &problem.name,
        &base.method.to_string(),
        &base.rule.to_string(),
        base.alpha,
    ));
    let two_d = problem.dimension() == 2;
    for &n in ns {
        let cfg = settings.config(n);
        let row = match solve_summary(problem, &cfg) {
            Ok(s) => ConvergenceRow {
                n,
                ni: cfg.ni,
                alpha: cfg.alpha,
                err_inf: s.err_inf,
                err_l2chi: s.err_l2chi,
                newton_iters: Some(s.solution.newton_iters),
                runtime_ms: s.runtime_ms,
                err_colloc: two_d.then_some(s.err_colloc),
            },
            Err(_) => ConvergenceRow {
                n,
                ni: cfg.ni,
                alpha: cfg.alpha,
                err_inf: f64::NAN,
                err_l2chi: f64::NAN,
                newton_iters: None,
                runtime_ms: f64::NAN,
                err_colloc: two_d.then_some(f64::NAN),
            },
        };
        report.push(row);
    }
    report
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareRow {
    pub n: usize,
    pub ni: usize,
    pub alpha: f64,
    /// Largest node-value difference between the two methods.
    pub max_diff: f64,
    pub pass: bool,
}

/// Node values of both collocation methods, compared per N against `10 tol`.
pub fn compare(problem: &ProblemSpec, settings: &SweepSettings, ns: &[usize]) -> Result<Vec<CompareRow>> {
    ns.iter()
        .map(|&n| {
            let cfg = settings.config(n);
            let a = solve(problem, &cfg.with_method(Method::MhfCollocation))?;
            let b = solve(problem, &cfg.with_method(Method::SmoothedHermite))?;
            let max_diff = a
                .node_values
                .iter()
                .zip(&b.node_values)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            Ok(CompareRow {
                n,
                ni: cfg.ni,
                alpha: cfg.alpha,
                max_diff,
                pass: max_diff <= 10.0 * cfg.newton.tol,
            })
        })
        .collect()
}
