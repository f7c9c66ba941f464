//! Scan the lattice threshold E0 across delta strengths.
//!
//! Prints E0, the dispersion branch, the decay/momentum rate, and the
//! residual of the band-edge condition Delta(E0) = 1 for each strength.
//!
//!     cargo run --example threshold_scan

use ringflux::lattice::{kp_discriminant_minus_one, solve_threshold, threshold_residual, LatticeParams};

fn main() -> ringflux::Result<()> {
    let d = 1.0;
    println!("ring spacing d = {d}");
    println!("{:>9}  {:>20}  {:>10}  {:>18}  {:>12}", "beta", "E0", "branch", "rate", "|Delta-1|");
    for beta in [-20.0, -5.0, -2.0, -0.5, 0.0, 0.5, 2.0, 5.0, 20.0] {
        let p = LatticeParams::new(d, beta)?;
        let th = solve_threshold(&p)?;
        let resid = threshold_residual(&p, &th);
        let edge = kp_discriminant_minus_one(&p, th.e0).abs();
        println!(
            "{beta:>9}  {:>20.14}  {:>10}  {:>18.14}  {edge:>12.2e}",
            th.e0,
            format!("{:?}", th.branch).to_lowercase(),
            th.rate,
        );
        assert!(resid.abs() < 1e-11, "threshold condition residual {resid}");
    }
    println!();
    println!("attractive strengths give E0 = -kappa^2 with kappa tanh(kappa d/2) = |beta|/2;");
    println!("repulsive ones give E0 = k^2 with 2k sin(kd/2) = beta cos(kd/2) on (0, pi/d).");
    Ok(())
}
