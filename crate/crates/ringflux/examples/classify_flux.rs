//! Classify the discrete spectrum below the threshold for several fluxes.
//!
//! The decisive quantity is 4AB = c / c_crit in the l = 0 channel: the
//! Kepler phase winds without bound iff 4AB > 1, producing infinitely many
//! eigenvalues accumulating at E0. The classifier computes 4AB from cell
//! averages by quadrature and cross-checks the verdict against alpha_crit.
//!
//!     cargo run --example classify_flux

use ringflux::lattice::LatticeParams;
use ringflux::radial::classify_discrete_spectrum;

fn main() -> ringflux::Result<()> {
    println!(
        "{:>7}  {:>7}  {:>10}  {:>14}  {:>12}  {}",
        "alpha", "beta", "c", "4AB", "alpha_crit", "classification"
    );
    let cases = [
        (0.05, -2.0),
        (0.05, -20.0),
        (0.3, -2.0),
        (0.3, -20.0),
        (0.49, -20.0),
        (0.5, -20.0),
        (0.3, 2.0),
        (0.05, 0.0),
    ];
    for (alpha, beta) in cases {
        let lat = LatticeParams::new(1.0, beta)?;
        let res = classify_discrete_spectrum(alpha, &lat)?;
        println!(
            "{alpha:>7}  {beta:>7}  {:>10.6}  {:>14.10}  {:>12}  {:?}",
            res.c,
            res.four_ab,
            res.alpha_crit.map(|a| format!("{a:.8}")).unwrap_or_else(|| "-".into()),
            res.classification
        );
    }
    println!();
    println!("flux values above 1/2 reduce by symmetry:");
    match classify_discrete_spectrum(0.7, &LatticeParams::new(1.0, -2.0)?) {
        Err(e) => println!("  classify(0.7) -> {e}"),
        Ok(_) => unreachable!("0.7 is outside the reduced range"),
    }
    Ok(())
}
