//! Damped Newton iteration with dense LU.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Damping {
    /// Always take the full step.
    None,
    /// Halve the step until the residual decreases, at most this many times.
    Halving(u32),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub damping: Damping,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            tol: 1e-12,
            max_iter: 50,
            damping: Damping::Halving(30),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonOutcome {
    pub x: DVector<f64>,
    pub iters: usize,
    pub residual_norm: f64,
    /// `||F||_inf` after each accepted iterate, starting with `x0`.
    pub history: Vec<f64>,
}

fn inf_norm(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0, |a, b| if b.is_nan() { f64::NAN } else { a.max(b.abs()) })
}

/// Extra steps taken after reaching `tol`, kept only while they lower the residual.
const POLISH_STEPS: usize = 2;

pub fn newton_driver<R, J>(mut residual: R, mut jacobian: J, x0: DVector<f64>, opts: NewtonOptions) -> Result<NewtonOutcome>
where
    R: FnMut(&DVector<f64>) -> Result<DVector<f64>>,
    J: FnMut(&DVector<f64>) -> Result<DMatrix<f64>>,
{
    let mut x = x0;
    let mut r = residual(&x)?;
    if r.len() != x.len() {
        return Err(Error::Contract(format!(
            "residual has length {} for {} unknowns",
            r.len(),
            x.len()
        )));
    }
    let mut norm = inf_norm(&r);
    let mut history = vec![norm];
    let mut iters = 0;
    let mut polish = 0;
    let fail = |reason: String, x: &DVector<f64>, norm: f64, history: &[f64]| Error::NonConvergence {
        reason,
        best_residual: norm,
        best_iterate: x.iter().copied().collect(),
        history: history.to_vec(),
    };
    while !(norm <= opts.tol) || polish < POLISH_STEPS {
        let converged = norm <= opts.tol;
        if converged {
            polish += 1;
        } else if iters == opts.max_iter {
            return Err(fail(
                format!("{} iterations without reaching {:e}", opts.max_iter, opts.tol),
                &x,
                norm,
                &history,
            ));
        }
        let jac = jacobian(&x)?;
        let step = jac
            .lu()
            .solve(&(-&r))
            .filter(|s| s.iter().all(|v| v.is_finite()))
            .ok_or(Error::SingularJacobian { iteration: iters + 1 });
        let step = match step {
            Ok(s) => s,
            Err(_) if converged => break,
            Err(e) => return Err(e),
        };
        let mut t = 1.0;
        let mut halvings = 0;
        let accepted = loop {
            let trial = &x + &step * t;
            let rt = residual(&trial)?;
            let nt = inf_norm(&rt);
            let better = nt < norm;
            match opts.damping {
                Damping::None if !converged => break Some((trial, rt, nt)),
                _ if better => break Some((trial, rt, nt)),
                Damping::Halving(max) if !converged && halvings < max => {
                    t *= 0.5;
                    halvings += 1;
                }
                _ => break None,
            }
        };
        match accepted {
            Some((xn, rn, nn)) => {
                x = xn;
                r = rn;
                norm = nn;
                if !converged {
                    iters += 1;
                }
                history.push(norm);
            }
            None if converged => break,
            None => {
                return Err(fail(
                    "step halving did not reduce the residual".into(),
                    &x,
                    norm,
                    &history,
                ))
            }
        }
    }
    Ok(NewtonOutcome {
        x,
        iters,
        residual_norm: norm,
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(
        f: impl Fn(f64) -> f64,
        df: impl Fn(f64) -> f64,
        x0: f64,
        opts: NewtonOptions,
    ) -> Result<NewtonOutcome> {
        newton_driver(
            |x| Ok(DVector::from_element(1, f(x[0]))),
            |x| Ok(DMatrix::from_element(1, 1, df(x[0]))),
            DVector::from_element(1, x0),
            opts,
        )
    }

    #[test]
    fn linear_residual_in_one_iteration() {
        let a = DMatrix::from_row_slice(2, 2, &[3.0, 1.0, -1.0, 2.0]);
        let b = DVector::from_vec(vec![1.0, 4.0]);
        let out = newton_driver(
            |x| Ok(&a * x - &b),
            |_| Ok(a.clone()),
            DVector::zeros(2),
            NewtonOptions::default(),
        )
        .unwrap();
        assert_eq!(out.iters, 1);
        assert!(out.residual_norm <= 1e-12);
    }

    #[test]
    fn quadratic_root() {
        let out = scalar(|x| 0.1 * x * x - x + 1.0, |x| 0.2 * x - 1.0, 1.0, NewtonOptions::default()).unwrap();
        assert!((out.x[0] - (1.0 - 0.6f64.sqrt()) / 0.2).abs() < 1e-12);
        assert!(out.iters <= 6);
    }

    #[test]
    fn no_real_root_fails_with_monotone_history() {
        let err = scalar(|x| x * x + 1.0, |x| 2.0 * x, 0.3, NewtonOptions::default()).unwrap_err();
        match err {
            Error::NonConvergence { history, best_residual, .. } => {
                assert!(history.windows(2).all(|w| w[1] < w[0]));
                assert!(best_residual >= 1.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn singular_jacobian_names_iteration() {
        let err = scalar(|x| x * x + 1.0, |_| 0.0, 0.0, NewtonOptions::default()).unwrap_err();
        assert!(matches!(err, Error::SingularJacobian { iteration: 1 }));
    }

    #[test]
    fn undamped_accepts_full_steps() {
        let opts = NewtonOptions {
            damping: Damping::None,
            ..NewtonOptions::default()
        };
        let out = scalar(|x| x.atan(), |x| 1.0 / (1.0 + x * x), 0.5, opts).unwrap();
        assert!(out.x[0].abs() < 1e-12);
    }
}
