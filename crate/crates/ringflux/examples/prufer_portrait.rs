//! Phase portrait of the radial solution at the threshold energy.
//!
//! Integrates the regular solution at E = E0 for a supercritical and a
//! subcritical flux and prints the lifted Prufer angle theta(r) together
//! with the Kepler phases (gamma, phi) built from the periodic band-edge
//! pair. Supercritical channels wind at a fixed rate per e-fold of radius;
//! subcritical ones settle into a bounded window.
//!
//!     cargo run --example prufer_portrait

use ringflux::lattice::{periodic_solution, solve_threshold, LatticeParams};
use ringflux::radial::{
    integrate_radial, kepler_phase, prufer_trajectory, regular_launch, second_solution,
    RadialParams,
};

fn portrait(alpha: f64, beta: f64) -> ringflux::Result<()> {
    let lat = LatticeParams::new(1.0, beta)?;
    let th = solve_threshold(&lat)?;
    let p = RadialParams::new(lat, alpha, 0)?;
    let (r0, r1) = (1e-3, 1e3);
    let y0 = regular_launch(&p, r0);
    let sol = integrate_radial(&p, th.e0, (r0, r1), y0, 1e-10)?;
    let theta = prufer_trajectory(&sol);

    let u = periodic_solution(&p.lattice, &th);
    let v = second_solution(&u, r0)?;
    let phases = kepler_phase(&sol, &u, &v)?;

    println!("alpha = {alpha}, beta = {beta}, E0 = {:.10}", th.e0);
    println!(
        "{:>10}  {:>12}  {:>12}  {:>12}",
        "r", "theta(r)", "gamma(r)", "phi(r)"
    );
    for decade in 0..=6 {
        let r = 1e-3 * 10f64.powi(decade);
        println!(
            "{r:>10.3}  {:>12.6}  {:>12.6}  {:>12.6}",
            theta.at(r),
            phases.gamma.at(r),
            phases.phi.at(r)
        );
    }
    let (lo, hi) = theta.window();
    println!("zeros of y on ({r0}, {r1}): {}", sol.zero_count());
    println!("theta window width: {:.6} rad", hi - lo);
    println!();
    Ok(())
}

fn main() -> ringflux::Result<()> {
    // supercritical: alpha below the critical flux of beta = -20
    portrait(0.05, -20.0)?;
    // subcritical: alpha = 1/2 never winds
    portrait(0.5, -20.0)?;
    // weak coupling: bounded phase either way
    portrait(0.3, -0.01)?;
    Ok(())
}
