//! Sweep the critical flux alpha_crit across attractive strengths.
//!
//! alpha_crit separates flux values with infinitely many eigenvalues below
//! the threshold (alpha < alpha_crit) from at most finitely many. It tends
//! to 0 as beta -> 0- and to 1/2 as beta -> -inf; in the strong-coupling
//! limit c_crit approaches -(beta d)^2 / 8 * exp(-|beta| d / 2).
//!
//!     cargo run --example critical_flux_sweep

use ringflux::lattice::{strong_coupling_estimate, sweep_alpha_crit, LatticeParams};

fn main() -> ringflux::Result<()> {
    let d = 1.0;
    let betas: Vec<f64> = (0..12).map(|i| -(10f64).powf(-3.0 + 4.5 * i as f64 / 11.0)).collect();
    println!("{:>14}  {:>14}  {:>14}  {:>16}", "beta", "c_crit", "alpha_crit", "c_crit/estimate");
    for entry in sweep_alpha_crit(&betas, d)? {
        let row = entry.row?;
        let ratio = match LatticeParams::new(d, entry.beta).and_then(|p| strong_coupling_estimate(&p)) {
            Ok(est) => format!("{:>16.10}", row.c_crit / est),
            Err(_) => " ".repeat(16),
        };
        println!(
            "{:>14.6e}  {:>14.8e}  {:>14.10}  {ratio}",
            entry.beta, row.c_crit, row.alpha_crit
        );
    }
    println!();
    println!("the last column approaches 1 from below as |beta| grows.");
    Ok(())
}
