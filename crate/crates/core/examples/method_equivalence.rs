//! The mapped collocation and the smoothed Hermite formulation give the same
//! node values.

use mhf_fie::problem::problem_by_name;
use mhf_fie::solver::{solve, Method, QuadratureRule, SolverConfig};

fn main() -> mhf_fie::Result<()> {
    let problem = problem_by_name("ex1-alg")?;
    for rule in [QuadratureRule::Product, QuadratureRule::Gauss] {
        for n in [4, 8, 16] {
            let cfg = match rule {
                QuadratureRule::Product => SolverConfig::new(n, 0.5),
                QuadratureRule::Gauss => SolverConfig::gauss(n, 0.5),
            };
            let a = solve(&problem, &cfg)?;
            let b = solve(&problem, &cfg.with_method(Method::SmoothedHermite))?;
            let diff = a
                .node_values
                .iter()
                .zip(&b.node_values)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            println!("{rule} N={n:<3} NI={:<3} max node difference {diff:.2e}", cfg.ni);
        }
    }
    Ok(())
}
