//! Nonlinear 2D equation on the unit square, solved by Newton's method.

use mhf_fie::mhf::UnitPoint;
use mhf_fie::problem::problem_by_name;
use mhf_fie::solver::{solve, SolverConfig};

fn main() -> mhf_fie::Result<()> {
    let problem = problem_by_name("ex3-log")?;
    let exact = problem.exact.clone().expect("manufactured solution");
    for n in [4, 8, 12] {
        let s = solve(&problem, &SolverConfig::new(n, problem.default_alpha))?;
        let e = s.error_norms(&exact)?;
        println!(
            "N={n:<3} newton {} residual {:.1e} err_inf {:.3e} at nodes {:.3e}",
            s.newton_iters,
            s.final_residual,
            e.inf,
            s.collocation_error(&exact)
        );
        let c = UnitPoint::from_x(0.5);
        println!("      u(0.5, 0.5) = {:.12} vs {:.12}", s.eval_2d(c, c), exact.eval_2d(c, c));
    }
    Ok(())
}
