//! Ladder of eigenvalues accumulating at the threshold from below.
//!
//! For a strongly attractive lattice and supercritical flux, the truncated
//! channel carries a geometric ladder of eigenvalues under E0. The example
//! locates them by bisection on the oscillation count, prints the depths
//! E0 - E_j and the ratios of consecutive depths, and cross-checks the
//! count against the finite-difference matrix on the same domain.
//!
//!     cargo run --example eigenvalue_ladder

use ringflux::lattice::{solve_threshold, LatticeParams};
use ringflux::radial::RadialParams;
use ringflux::spectral::{fd_count_below, fd_grid, find_eigenvalues, TruncatedDomain};

fn main() -> ringflux::Result<()> {
    let lat = LatticeParams::new(1.0, -20.0)?;
    let p = RadialParams::new(lat, 0.3, 0)?;
    let e0 = solve_threshold(&lat)?.e0;
    let dom = TruncatedDomain::new(1e-3, 60.0)?;
    let window = (e0 - 1.0, e0 - 1e-6);
    let res = find_eigenvalues(&p, &dom, window, 1e-9)?;

    println!("alpha = 0.3, beta = -20, domain [{}, {}]", dom.r_min, dom.r_max);
    println!("E0 = {e0:.12}, window ({:.6}, {:.6})", window.0, window.1);
    println!();
    println!("{:>3}  {:>20}  {:>14}  {:>12}", "j", "E_j", "depth E0-E_j", "depth ratio");
    let depths: Vec<f64> = res.eigenvalues.iter().map(|e| e0 - e).collect();
    for (j, (&e, depth)) in res.eigenvalues.iter().zip(&depths).enumerate() {
        let ratio = if j + 1 < depths.len() {
            format!("{:>12.6}", depth / depths[j + 1])
        } else {
            " ".repeat(12)
        };
        println!("{j:>3}  {e:>20.12}  {depth:>14.8e}  {ratio}");
    }

    // the finite-difference matrix sees the same number of states once the
    // margin clears its own discretization shift (about 2.5e-3 here)
    let grid = fd_grid(&p, &dom, 60_000)?;
    let margin = e0 - 0.03;
    println!();
    println!(
        "states below E0 - 0.03: shooting {}, fd oracle {}",
        res.eigenvalues.iter().filter(|&&e| e < margin).count(),
        fd_count_below(&grid, margin)
    );
    println!("(near-threshold ratios approach the universal accumulation factor)");
    Ok(())
}
