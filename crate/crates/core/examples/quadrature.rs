//! Quadrature of endpoint-singular integrands against the MHF weight.

use mhf_fie::cli::commands::{quad_test, Integrand};

fn main() -> mhf_fie::Result<()> {
    let ns = [4, 8, 16, 32, 64];
    for name in ["sqrt-logweight", "log-logweight", "moments"] {
        let integrand: Integrand = name.parse()?;
        println!("{name}: reference {:.15}", integrand.reference(1.0)?);
        for row in quad_test(1.0, &ns, integrand)? {
            println!("  N={:<3} error {:.3e}", row.n, row.error);
        }
    }
    Ok(())
}
