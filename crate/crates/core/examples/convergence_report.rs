//! Convergence sweep written as CSV with a metadata sidecar.

use mhf_fie::cli::commands::{converge, SweepSettings};
use mhf_fie::cli::report::ConvergenceReport;
use mhf_fie::problem::problem_by_name;
use mhf_fie::solver::SolverConfig;

fn main() -> mhf_fie::Result<()> {
    let problem = problem_by_name("ex1-alg")?;
    let settings = SweepSettings {
        base: SolverConfig::new(0, 0.5),
        ni_offset: 0,
    };
    let report = converge(&problem, &settings, &[8, 16, 24, 32]);
    print!("{}", report.to_csv()?);

    let path = std::env::temp_dir().join("mhf-fie-convergence.csv");
    report.save(&path)?;
    let back = ConvergenceReport::load(&path)?;
    println!("saved {} rows to {}", back.rows.len(), path.display());
    Ok(())
}
