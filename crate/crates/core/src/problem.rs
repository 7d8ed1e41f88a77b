//! Weakly singular kernels, Hammerstein nonlinearities, problem definitions,
//! the manufactured-forcing oracle and the built-in problem registry.
//!
//! Equations have the form `lambda u(x) = g(x) + int_0^1 Theta(s, x) psi(s, u(s)) ds`
//! in 1D and the tensor analog on the unit square in 2D.

use std::f64::consts::PI;
use std::fmt;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mhf::UnitPoint;
use crate::quad::tanh_sinh;

/// Singular factor of the kernel in one coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelKind {
    /// `|x - s|^{-mu}`, `0 < mu < 1`.
    Algebraic { mu: f64 },
    /// `log|x - s|`.
    Logarithmic,
    /// `(1 - s)^{-mu}`, independent of `x`.
    EndpointAlgebraic { mu: f64 },
}

impl KernelKind {
    fn validate(&self) -> Result<()> {
        match *self {
            KernelKind::Algebraic { mu } | KernelKind::EndpointAlgebraic { mu } => {
                if mu > 0.0 && mu < 1.0 {
                    Ok(())
                } else {
                    Err(Error::Contract(format!("kernel exponent mu = {mu} must lie in (0, 1)")))
                }
            }
            KernelKind::Logarithmic => Ok(()),
        }
    }

    /// Whether the kernel blows up on the diagonal `s = x`.
    pub fn is_diagonal(&self) -> bool {
        !matches!(self, KernelKind::EndpointAlgebraic { .. })
    }

    /// Kernel value from `ln|x - s|` and `ln(1 - s)`.
    pub fn from_logs(&self, ln_dist: f64, ln_one_minus_s: f64) -> f64 {
        match *self {
            KernelKind::Algebraic { mu } => (-mu * ln_dist).exp(),
            KernelKind::Logarithmic => ln_dist,
            KernelKind::EndpointAlgebraic { mu } => (-mu * ln_one_minus_s).exp(),
        }
    }

    /// Closed form of `int_0^1 theta(s, x) ds`.
    pub fn row_integral(&self, x: UnitPoint) -> f64 {
        match *self {
            KernelKind::Algebraic { mu } => (x.x.powf(1.0 - mu) + x.xc.powf(1.0 - mu)) / (1.0 - mu),
            KernelKind::Logarithmic => x.x * x.x.ln() + x.xc * x.xc.ln() - 1.0,
            KernelKind::EndpointAlgebraic { mu } => 1.0 / (1.0 - mu),
        }
    }
}

pub type Smooth1 = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type Smooth2 = Arc<dyn Fn(f64, f64, f64, f64) -> f64 + Send + Sync>;

/// Smooth factor `k` multiplying the singular part.
#[derive(Clone)]
pub enum SmoothFactor {
    /// `k = 1`.
    One,
    /// `k(s, x)`.
    OneD(Smooth1),
    /// `k(s, t, x, y)`.
    TwoD(Smooth2),
}

impl fmt::Debug for SmoothFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SmoothFactor::One => write!(f, "One"),
            SmoothFactor::OneD(_) => write!(f, "OneD(..)"),
            SmoothFactor::TwoD(_) => write!(f, "TwoD(..)"),
        }
    }
}

/// Kernel `Theta = theta_1(s, x) [theta_2(t, y)] k`.
#[derive(Debug, Clone)]
pub struct KernelSpec {
    kinds: Vec<KernelKind>,
    smooth: SmoothFactor,
}

impl KernelSpec {
    pub fn one_d(kind: KernelKind) -> Result<Self> {
        kind.validate()?;
        Ok(KernelSpec {
            kinds: vec![kind],
            smooth: SmoothFactor::One,
        })
    }

    pub fn two_d(kx: KernelKind, ky: KernelKind) -> Result<Self> {
        kx.validate()?;
        ky.validate()?;
        Ok(KernelSpec {
            kinds: vec![kx, ky],
            smooth: SmoothFactor::One,
        })
    }

    pub fn with_smooth(mut self, smooth: SmoothFactor) -> Result<Self> {
        let ok = matches!(
            (&smooth, self.kinds.len()),
            (SmoothFactor::One, _) | (SmoothFactor::OneD(_), 1) | (SmoothFactor::TwoD(_), 2)
        );
        if !ok {
            return Err(Error::Contract("smooth factor arity does not match the kernel dimension".into()));
        }
        self.smooth = smooth;
        Ok(self)
    }

    pub fn dimension(&self) -> usize {
        self.kinds.len()
    }

    pub fn kinds(&self) -> &[KernelKind] {
        &self.kinds
    }

    pub fn smooth(&self) -> &SmoothFactor {
        &self.smooth
    }

    pub fn smooth_is_one(&self) -> bool {
        matches!(self.smooth, SmoothFactor::One)
    }

    pub fn k1(&self, s: f64, x: f64) -> f64 {
        match &self.smooth {
            SmoothFactor::OneD(k) => k(s, x),
            _ => 1.0,
        }
    }

    pub fn k2(&self, s: f64, t: f64, x: f64, y: f64) -> f64 {
        match &self.smooth {
            SmoothFactor::TwoD(k) => k(s, t, x, y),
            _ => 1.0,
        }
    }
}

fn singular_factor(kind: KernelKind, s: UnitPoint, x: UnitPoint) -> Result<f64> {
    let gap = (x.x - s.x).abs();
    if kind.is_diagonal() && gap < 1e-14 {
        return Err(Error::DiagonalSingularity { s: s.x, x: x.x, gap });
    }
    if !kind.is_diagonal() && s.xc <= 0.0 {
        return Err(Error::Domain(format!("endpoint kernel evaluated at s = {}", s.x)));
    }
    Ok(kind.from_logs(gap.ln(), s.xc.ln()))
}

/// `Theta(s, x)` in 1D.
pub fn kernel_eval(spec: &KernelSpec, s: f64, x: f64) -> Result<f64> {
    if spec.dimension() != 1 {
        return Err(Error::Contract("kernel_eval on a 2D kernel".into()));
    }
    let v = singular_factor(spec.kinds[0], UnitPoint::from_x(s), UnitPoint::from_x(x))?;
    Ok(v * spec.k1(s, x))
}

/// `Theta(s, t, x, y)` in 2D.
pub fn kernel_eval_2d(spec: &KernelSpec, s: f64, t: f64, x: f64, y: f64) -> Result<f64> {
    if spec.dimension() != 2 {
        return Err(Error::Contract("kernel_eval_2d on a 1D kernel".into()));
    }
    let a = singular_factor(spec.kinds[0], UnitPoint::from_x(s), UnitPoint::from_x(x))?;
    let b = singular_factor(spec.kinds[1], UnitPoint::from_x(t), UnitPoint::from_x(y))?;
    Ok(a * b * spec.k2(s, t, x, y))
}

/// Closed-form `int_0^1 theta(s, x) ds` for `k = 1`.
pub fn exact_smooth_integral(kind: KernelKind, x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain(format!("exact_smooth_integral at x = {x}")));
    }
    Ok(kind.row_integral(UnitPoint::from_x(x)))
}

pub type PsiFn = Arc<dyn Fn(&[f64], f64) -> f64 + Send + Sync>;

/// Which closed forms the nonlinearity has.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NonlinearKind {
    Identity,
    Square,
    Custom,
}

/// `psi(s[, t], u)` and its `u`-derivative. Positions come as a slice of
/// length 1 or 2.
#[derive(Clone)]
pub struct Nonlinearity {
    kind: NonlinearKind,
    psi: PsiFn,
    dpsi: PsiFn,
}

impl fmt::Debug for Nonlinearity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Nonlinearity({:?})", self.kind)
    }
}

impl Nonlinearity {
    pub fn identity() -> Self {
        Nonlinearity {
            kind: NonlinearKind::Identity,
            psi: Arc::new(|_, u| u),
            dpsi: Arc::new(|_, _| 1.0),
        }
    }

    pub fn square() -> Self {
        Nonlinearity {
            kind: NonlinearKind::Square,
            psi: Arc::new(|_, u| u * u),
            dpsi: Arc::new(|_, u| 2.0 * u),
        }
    }

    /// Custom nonlinearity; `dpsi` is checked against centered differences
    /// of `psi` on a probe grid.
    pub fn new(psi: PsiFn, dpsi: PsiFn) -> Result<Self> {
        for &s in &[0.1, 0.5, 0.9] {
            for &u in &[-2.0, -0.5, 0.0, 0.7, 3.0] {
                let pos = [s, 1.0 - s];
                let h = 1e-5 * f64::max(1.0, f64::abs(u));
                let fd = (psi(&pos, u + h) - psi(&pos, u - h)) / (2.0 * h);
                let d = dpsi(&pos, u);
                if !(fd - d).abs().le(&(1e-5 * d.abs().max(1.0))) {
                    return Err(Error::Contract(format!(
                        "dpsi/du = {d} disagrees with the finite difference {fd} at s = {s}, u = {u}"
                    )));
                }
            }
        }
        Ok(Nonlinearity {
            kind: NonlinearKind::Custom,
            psi,
            dpsi,
        })
    }

    pub fn kind(&self) -> NonlinearKind {
        self.kind
    }

    pub fn is_identity(&self) -> bool {
        self.kind == NonlinearKind::Identity
    }

    pub fn psi(&self, pos: &[f64], u: f64) -> f64 {
        (self.psi)(pos, u)
    }

    pub fn dpsi(&self, pos: &[f64], u: f64) -> f64 {
        (self.dpsi)(pos, u)
    }
}

pub type Field1 = Arc<dyn Fn(UnitPoint) -> f64 + Send + Sync>;
pub type Field2 = Arc<dyn Fn(UnitPoint, UnitPoint) -> f64 + Send + Sync>;

/// Known solution, as a 1D function or a sum of products `sum_r a_r(x) b_r(y)`.
#[derive(Clone)]
pub enum Exact {
    OneD(Field1),
    Separable(Vec<(Field1, Field1)>),
}

impl fmt::Debug for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exact::OneD(_) => write!(f, "OneD(..)"),
            Exact::Separable(t) => write!(f, "Separable({} terms)", t.len()),
        }
    }
}

impl Exact {
    pub fn eval(&self, x: UnitPoint) -> f64 {
        match self {
            Exact::OneD(u) => u(x),
            Exact::Separable(_) => f64::NAN,
        }
    }

    pub fn eval_2d(&self, x: UnitPoint, y: UnitPoint) -> f64 {
        match self {
            Exact::OneD(_) => f64::NAN,
            Exact::Separable(terms) => terms.iter().map(|(a, b)| a(x) * b(y)).sum(),
        }
    }
}

/// Right-hand side `g`.
#[derive(Clone)]
pub enum Forcing {
    OneD(Field1),
    TwoD(Field2),
    /// Synthesized from the exact solution by the reference oracle.
    Manufactured,
}

impl fmt::Debug for Forcing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Forcing::OneD(_) => write!(f, "OneD(..)"),
            Forcing::TwoD(_) => write!(f, "TwoD(..)"),
            Forcing::Manufactured => write!(f, "Manufactured"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub name: String,
    pub lambda: f64,
    pub kernel: KernelSpec,
    pub nonlinearity: Nonlinearity,
    pub forcing: Forcing,
    pub exact: Option<Exact>,
    /// Mapping parameter used when none is configured.
    pub default_alpha: f64,
    forcing_cache: ForcingCache,
}

/// Manufactured forcing values by point; a clone starts empty.
#[derive(Debug, Default)]
struct ForcingCache(Mutex<HashMap<(u64, u64, u64), f64>>);

impl Clone for ForcingCache {
    fn clone(&self) -> Self {
        ForcingCache::default()
    }
}

impl ProblemSpec {
    pub fn new(
        name: &str,
        lambda: f64,
        kernel: KernelSpec,
        nonlinearity: Nonlinearity,
        forcing: Forcing,
        exact: Option<Exact>,
    ) -> Result<Self> {
        if lambda == 0.0 || !lambda.is_finite() {
            return Err(Error::Contract(format!("lambda = {lambda} must be finite and nonzero")));
        }
        let dim = kernel.dimension();
        let forcing_ok = match (&forcing, dim) {
            (Forcing::OneD(_), 1) | (Forcing::TwoD(_), 2) => true,
            (Forcing::Manufactured, _) => match (&exact, dim) {
                (Some(Exact::OneD(_)), 1) | (Some(Exact::Separable(_)), 2) => true,
                _ => false,
            },
            _ => false,
        };
        if !forcing_ok {
            return Err(Error::Contract(
                "forcing/exact solution do not match the kernel dimension".into(),
            ));
        }
        Ok(ProblemSpec {
            name: name.to_string(),
            lambda,
            kernel,
            nonlinearity,
            forcing,
            exact,
            default_alpha: 0.5,
            forcing_cache: ForcingCache::default(),
        })
    }

    pub fn dimension(&self) -> usize {
        self.kernel.dimension()
    }

    /// `g` at 1D points.
    pub fn forcing_1d(&self, points: &[UnitPoint]) -> Result<Vec<f64>> {
        match &self.forcing {
            Forcing::OneD(g) => Ok(points.iter().map(|p| g(*p)).collect()),
            Forcing::Manufactured => {
                let cache = &self.forcing_cache.0;
                points
                    .par_iter()
                    .map(|p| {
                        let key = (self.lambda.to_bits(), p.x.to_bits(), p.xc.to_bits());
                        if let Some(v) = cache.lock().expect("forcing cache poisoned").get(&key) {
                            return Ok(*v);
                        }
                        let v = manufactured_forcing(self, *p)?;
                        cache.lock().expect("forcing cache poisoned").insert(key, v);
                        Ok(v)
                    })
                    .collect()
            }
            Forcing::TwoD(_) => Err(Error::Contract("1D forcing requested from a 2D problem".into())),
        }
    }

    /// `g` on the tensor grid `xs x ys`.
    pub fn forcing_2d(&self, xs: &[UnitPoint], ys: &[UnitPoint]) -> Result<DMatrix<f64>> {
        match &self.forcing {
            Forcing::TwoD(g) => Ok(DMatrix::from_fn(xs.len(), ys.len(), |i, j| g(xs[i], ys[j]))),
            Forcing::Manufactured => manufactured_forcing_grid(self, xs, ys),
            Forcing::OneD(_) => Err(Error::Contract("2D forcing requested from a 1D problem".into())),
        }
    }
}

const ORACLE_TOL: f64 = 1e-12;
const ORACLE_DEPTH: u32 = 12;

/// `int_0^1 theta(s, x) k(s, x) f(s) ds` by tanh-sinh on (0, x) and (x, 1).
pub fn oracle_integral<K, F>(kind: KernelKind, k: K, x: UnitPoint, f: F) -> Result<f64>
where
    K: Fn(f64) -> f64,
    F: Fn(UnitPoint) -> f64,
{
    // left piece: s = l, 1 - s = xc + r, |x - s| = r
    let left = tanh_sinh(
        x.x,
        |l, r| {
            let s = UnitPoint { x: l, xc: x.xc + r };
            kind.from_logs(r.ln(), s.xc.ln()) * k(s.x) * f(s)
        },
        ORACLE_TOL,
        ORACLE_DEPTH,
    )?;
    // right piece: s = x + l, 1 - s = r, |x - s| = l
    let right = tanh_sinh(
        x.xc,
        |l, r| {
            let s = UnitPoint { x: x.x + l, xc: r };
            kind.from_logs(l.ln(), r.ln()) * k(s.x) * f(s)
        },
        ORACLE_TOL,
        ORACLE_DEPTH,
    )?;
    Ok(left + right)
}

/// `g(x) = lambda u(x) - int_0^1 Theta(s, x) psi(s, u(s)) ds` for a 1D problem.
pub fn manufactured_forcing(spec: &ProblemSpec, x: UnitPoint) -> Result<f64> {
    let u = match &spec.exact {
        Some(Exact::OneD(u)) if spec.dimension() == 1 => u.clone(),
        _ => return Err(Error::Contract("manufactured forcing needs a 1D exact solution".into())),
    };
    let nl = &spec.nonlinearity;
    let integral = oracle_integral(
        spec.kernel.kinds()[0],
        |s| spec.kernel.k1(s, x.x),
        x,
        |s| nl.psi(&[s.x], u(s)),
    )?;
    Ok(spec.lambda * u(x) - integral)
}

fn separable_psi_terms(spec: &ProblemSpec) -> Result<Vec<(f64, Field1, Field1)>> {
    let terms = match &spec.exact {
        Some(Exact::Separable(t)) => t,
        _ => return Err(Error::Contract("2D manufactured forcing needs a separable exact solution".into())),
    };
    if !spec.kernel.smooth_is_one() {
        return Err(Error::Contract("2D manufactured forcing needs k = 1".into()));
    }
    match spec.nonlinearity.kind() {
        NonlinearKind::Identity => Ok(terms.iter().map(|(a, b)| (1.0, a.clone(), b.clone())).collect()),
        NonlinearKind::Square => {
            let mut out = Vec::new();
            for (r, (ar, br)) in terms.iter().enumerate() {
                for (q, (aq, bq)) in terms.iter().enumerate().skip(r) {
                    let c = if q == r { 1.0 } else { 2.0 };
                    let (ar, aq, br, bq) = (ar.clone(), aq.clone(), br.clone(), bq.clone());
                    let fa: Field1 = Arc::new(move |p| ar(p) * aq(p));
                    let fb: Field1 = Arc::new(move |p| br(p) * bq(p));
                    out.push((c, fa, fb));
                }
            }
            Ok(out)
        }
        NonlinearKind::Custom => Err(Error::Contract(
            "2D manufactured forcing supports psi(u) = u or u^2 only".into(),
        )),
    }
}

/// 2D manufactured forcing at one point.
pub fn manufactured_forcing_2d(spec: &ProblemSpec, x: UnitPoint, y: UnitPoint) -> Result<f64> {
    Ok(manufactured_forcing_grid(spec, &[x], &[y])?[(0, 0)])
}

/// 2D manufactured forcing on a tensor grid; every 2D integral is a sum of
/// products of 1D oracle integrals.
pub fn manufactured_forcing_grid(spec: &ProblemSpec, xs: &[UnitPoint], ys: &[UnitPoint]) -> Result<DMatrix<f64>> {
    if spec.dimension() != 2 {
        return Err(Error::Contract("manufactured_forcing_grid on a 1D problem".into()));
    }
    let terms = separable_psi_terms(spec)?;
    let (kx, ky) = (spec.kernel.kinds()[0], spec.kernel.kinds()[1]);
    let mut integral = DMatrix::<f64>::zeros(xs.len(), ys.len());
    for (c, fa, fb) in &terms {
        let ix: Vec<f64> = xs
            .par_iter()
            .map(|p| oracle_integral(kx, |_| 1.0, *p, |s| fa(s)))
            .collect::<Result<_>>()?;
        let iy: Vec<f64> = ys
            .par_iter()
            .map(|p| oracle_integral(ky, |_| 1.0, *p, |t| fb(t)))
            .collect::<Result<_>>()?;
        for i in 0..xs.len() {
            for j in 0..ys.len() {
                integral[(i, j)] += c * ix[i] * iy[j];
            }
        }
    }
    let exact = spec.exact.as_ref().expect("checked by separable_psi_terms");
    Ok(DMatrix::from_fn(xs.len(), ys.len(), |i, j| {
        spec.lambda * exact.eval_2d(xs[i], ys[j]) - integral[(i, j)]
    }))
}

/// Names accepted by [`problem_by_name`].
pub const REGISTRY: [&str; 5] = ["ex1-log", "ex1-alg", "ex2-sqrt", "ex3-log", "ex3-alg"];

fn field(f: impl Fn(UnitPoint) -> f64 + Send + Sync + 'static) -> Field1 {
    Arc::new(f)
}

/// `ln x ln(1 - x)`.
pub fn log_log(p: UnitPoint) -> f64 {
    p.x.ln() * p.xc.ln()
}

/// `sqrt(x (1 - x))`.
pub fn sqrt_bump(p: UnitPoint) -> f64 {
    (p.x * p.xc).sqrt()
}

/// Built-in test problems.
pub fn problem_by_name(name: &str) -> Result<ProblemSpec> {
    let alg = KernelKind::Algebraic { mu: 0.5 };
    let log = KernelKind::Logarithmic;
    let spec = match name {
        "ex1-log" => ProblemSpec::new(
            name,
            10.0,
            KernelSpec::one_d(log)?,
            Nonlinearity::identity(),
            Forcing::Manufactured,
            Some(Exact::OneD(field(log_log))),
        )?,
        "ex1-alg" => ProblemSpec::new(
            name,
            10.0,
            KernelSpec::one_d(alg)?,
            Nonlinearity::identity(),
            Forcing::Manufactured,
            Some(Exact::OneD(field(sqrt_bump))),
        )?,
        "ex2-sqrt" => {
            let mut p = ProblemSpec::new(
                name,
                1.0,
                KernelSpec::one_d(KernelKind::EndpointAlgebraic { mu: 0.5 })?,
                Nonlinearity::identity(),
                Forcing::OneD(field(|p| p.x.sqrt() - PI / 2.0)),
                Some(Exact::OneD(field(|p| p.x.sqrt()))),
            )?;
            p.default_alpha = 1.0;
            p
        }
        "ex3-log" => ProblemSpec::new(
            name,
            10.0,
            KernelSpec::two_d(log, log)?,
            Nonlinearity::square(),
            Forcing::Manufactured,
            Some(Exact::Separable(vec![
                (field(log_log), field(|_| 1.0)),
                (field(|_| 1.0), field(log_log)),
            ])),
        )?,
        "ex3-alg" => ProblemSpec::new(
            name,
            10.0,
            KernelSpec::two_d(alg, alg)?,
            Nonlinearity::square(),
            Forcing::Manufactured,
            Some(Exact::Separable(vec![(field(sqrt_bump), field(sqrt_bump))])),
        )?,
        _ => {
            return Err(Error::Unknown {
                kind: "problem",
                name: name.to_string(),
            })
        }
    };
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn manufactured_1d(kind: KernelKind, lambda: f64, u: Field1, nl: Nonlinearity) -> ProblemSpec {
        ProblemSpec::new(
            "t",
            lambda,
            KernelSpec::one_d(kind).unwrap(),
            nl,
            Forcing::Manufactured,
            Some(Exact::OneD(u)),
        )
        .unwrap()
    }

    #[test]
    fn kernel_examples() {
        let alg = KernelSpec::one_d(KernelKind::Algebraic { mu: 0.5 }).unwrap();
        assert!((kernel_eval(&alg, 0.25, 0.5).unwrap() - 2.0).abs() < 1e-15);
        let log = KernelSpec::one_d(KernelKind::Logarithmic).unwrap();
        let e = std::f64::consts::E;
        assert!((kernel_eval(&log, 0.5 + 1.0 / e, 0.5).unwrap() + 1.0).abs() < 1e-15);
        let zero = KernelSpec::one_d(KernelKind::Logarithmic)
            .unwrap()
            .with_smooth(SmoothFactor::OneD(Arc::new(|_, _| 0.0)))
            .unwrap();
        assert_eq!(kernel_eval(&zero, 0.1, 0.7).unwrap(), 0.0);
        match kernel_eval(&alg, 0.3, 0.3) {
            Err(Error::DiagonalSingularity { s, x, .. }) => assert_eq!((s, x), (0.3, 0.3)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(KernelSpec::one_d(KernelKind::Algebraic { mu: 1.0 }).is_err());
        let two = KernelSpec::two_d(KernelKind::Logarithmic, KernelKind::Algebraic { mu: 0.5 }).unwrap();
        let v = kernel_eval_2d(&two, 0.5 + 1.0 / e, 0.25, 0.5, 0.5).unwrap();
        assert!((v + 2.0).abs() < 1e-15);
    }

    #[test]
    fn exact_integral_examples() {
        let v = exact_smooth_integral(KernelKind::Logarithmic, 0.5).unwrap();
        assert!((v + 1.693_147_180_6).abs() < 1e-10);
        let v = exact_smooth_integral(KernelKind::Algebraic { mu: 0.5 }, 0.5).unwrap();
        assert!((v - 2.828_427_124_7).abs() < 1e-10);
        for &x in &[0.05, 0.3] {
            let a = exact_smooth_integral(KernelKind::Algebraic { mu: 0.3 }, x).unwrap();
            let b = exact_smooth_integral(KernelKind::Algebraic { mu: 0.3 }, 1.0 - x).unwrap();
            assert!((a - b).abs() < 1e-14);
        }
        assert!(exact_smooth_integral(KernelKind::Logarithmic, 1.0).is_err());
    }

    #[test]
    fn oracle_matches_closed_form_row_integrals() {
        for kind in [KernelKind::Logarithmic, KernelKind::Algebraic { mu: 0.5 }] {
            let spec = manufactured_1d(kind, 10.0, Arc::new(|_| 1.0), Nonlinearity::identity());
            for k in 0..20 {
                let x = UnitPoint::from_x(0.013 + 0.049 * k as f64);
                let g = manufactured_forcing(&spec, x).unwrap();
                let want = 10.0 - kind.row_integral(x);
                assert!((g - want).abs() < 1e-10, "{kind:?} x={}", x.x);
            }
        }
    }

    #[test]
    fn oracle_example_forcings() {
        let spec = manufactured_1d(
            KernelKind::Algebraic { mu: 0.5 },
            10.0,
            Arc::new(|_| 1.0),
            Nonlinearity::identity(),
        );
        let x = UnitPoint::from_x(0.37);
        let want = 10.0 - (0.37f64.sqrt() + 0.63f64.sqrt()) / 0.5;
        assert!((manufactured_forcing(&spec, x).unwrap() - want).abs() < 1e-10);

        let zero = manufactured_1d(KernelKind::Logarithmic, 3.0, Arc::new(|_| 0.0), Nonlinearity::square());
        assert_eq!(manufactured_forcing(&zero, x).unwrap(), 0.0);

        let ex2 = problem_by_name("ex2-sqrt").unwrap();
        let mut synth = ex2.clone();
        synth.forcing = Forcing::Manufactured;
        for &xv in &[1e-6, 0.2, 0.5, 0.99] {
            let p = UnitPoint::from_x(xv);
            let g = manufactured_forcing(&synth, p).unwrap();
            assert!((g - (xv.sqrt() - PI / 2.0)).abs() < 1e-10);
        }
    }

    #[test]
    fn forcing_is_symmetric_for_symmetric_data() {
        for name in ["ex1-log", "ex1-alg"] {
            let spec = problem_by_name(name).unwrap();
            for &x in &[0.01, 0.2, 0.45] {
                let a = manufactured_forcing(&spec, UnitPoint::from_x(x)).unwrap();
                let b = manufactured_forcing(&spec, UnitPoint::from_x(x).mirror()).unwrap();
                assert!((a - b).abs() < 1e-10, "{name} x={x}");
            }
        }
    }

    #[test]
    fn separable_forcing_matches_product_of_1d() {
        let spec = problem_by_name("ex3-alg").unwrap();
        let x = UnitPoint::from_x(0.3);
        let y = UnitPoint::from_x(0.8);
        let kind = KernelKind::Algebraic { mu: 0.5 };
        let ix = oracle_integral(kind, |_| 1.0, x, |s| s.x * s.xc).unwrap();
        let iy = oracle_integral(kind, |_| 1.0, y, |s| s.x * s.xc).unwrap();
        let want = 10.0 * sqrt_bump(x) * sqrt_bump(y) - ix * iy;
        let got = manufactured_forcing_2d(&spec, x, y).unwrap();
        assert!((got - want).abs() < 1e-12);
        let swapped = manufactured_forcing_2d(&spec, y, x).unwrap();
        assert!((got - swapped).abs() < 1e-12);
    }

    #[test]
    fn nonlinearity_probe() {
        let ok = Nonlinearity::new(Arc::new(|_, u| u.sin()), Arc::new(|_, u| u.cos()));
        assert!(ok.is_ok());
        let bad = Nonlinearity::new(Arc::new(|_, u| u.sin()), Arc::new(|_, u| -u.cos()));
        assert!(matches!(bad, Err(Error::Contract(_))));
    }

    #[test]
    fn registry() {
        for name in REGISTRY {
            let p = problem_by_name(name).unwrap();
            assert_eq!(p.name, name);
            assert!(p.exact.is_some());
        }
        assert!(matches!(problem_by_name("ex9"), Err(Error::Unknown { .. })));
        assert_eq!(problem_by_name("ex3-log").unwrap().dimension(), 2);
        assert_eq!(problem_by_name("ex2-sqrt").unwrap().default_alpha, 1.0);
    }
}
