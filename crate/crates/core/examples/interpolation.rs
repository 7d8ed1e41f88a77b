//! Interpolation and projection of a function with logarithmic endpoint growth.

use mhf_fie::approx::{error_norms_1d, project, Interpolant1D, LagrangeBasis};
use mhf_fie::mhf::{mhf_gauss_rule, MhfBasis};
use mhf_fie::problem::log_log;

fn main() -> mhf_fie::Result<()> {
    let alpha = 0.5;
    for n in [8, 16, 32, 64] {
        let rule = mhf_gauss_rule(&MhfBasis::new(alpha, n)?)?;
        let values = rule.points().iter().map(|p| log_log(*p)).collect();
        let interp = Interpolant1D::new(LagrangeBasis::mhf(&rule)?, values)?;
        let e_int = error_norms_1d(|p| interp.eval_t(p.logit()), log_log, alpha, n)?;

        let proj = project(&MhfBasis::new(alpha, n)?, &rule, log_log)?;
        let e_proj = error_norms_1d(|p| proj.eval_at(p).unwrap_or(f64::NAN), log_log, alpha, n)?;
        println!(
            "N={n:<3} interpolation inf {:.3e} l2 {:.3e} | projection inf {:.3e} l2 {:.3e}",
            e_int.inf, e_int.l2chi, e_proj.inf, e_proj.l2chi
        );
    }
    Ok(())
}
