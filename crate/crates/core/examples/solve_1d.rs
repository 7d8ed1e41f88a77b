//! Linear 1D equation with a logarithmic kernel, solved at increasing N.

use mhf_fie::problem::problem_by_name;
use mhf_fie::solver::{solve, SolverConfig};

fn main() -> mhf_fie::Result<()> {
    let problem = problem_by_name("ex1-log")?;
    let exact = problem.exact.clone().expect("manufactured solution");
    for n in [8, 16, 32, 48] {
        let s = solve(&problem, &SolverConfig::new(n, 0.5))?;
        let e = s.error_norms(&exact)?;
        println!("N={n:<3} err_inf {:.3e} err_l2chi {:.3e} residual {:.1e}", e.inf, e.l2chi, s.final_residual);
    }
    Ok(())
}
