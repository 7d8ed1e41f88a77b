//! Mapped Gauss-Hermite nodes and weights on (0, 1).

use mhf_fie::mhf::{mhf_gauss_rule, MhfBasis};

fn main() -> mhf_fie::Result<()> {
    let rule = mhf_gauss_rule(&MhfBasis::new(0.5, 8)?)?;
    println!("{:>3} {:>12} {:>22} {:>12}", "j", "z", "x", "chi");
    for (j, p) in rule.points().iter().enumerate() {
        println!("{j:>3} {:>12.6} {:>22.16e} {:>12.6e}", rule.hermite().nodes()[j], p.x, rule.weights()[j]);
    }
    // weights integrate chi itself, whose mass is sqrt(pi) / alpha
    let mass: f64 = rule.weights().iter().sum();
    println!("sum of weights {mass:.15} vs {:.15}", std::f64::consts::PI.sqrt() / 0.5);
    Ok(())
}
