//! Sample the periodic band-edge solution u across a few lattice cells.
//!
//! u solves -u'' = E0 u between rings, satisfies the jump condition
//! u'(r+) - u'(r-) = beta u(r) on each ring, and repeats with period d.
//! The cell means D1 = <u^2> / u(0)^2 and D2 = u(0)^2 <u^-2> feed the
//! critical-flux formula c_crit = -1 / (4 D1 D2).
//!
//!     cargo run --example band_edge_profile

use ringflux::lattice::{
    critical_coupling, mean_squares, periodic_solution, solve_threshold, LatticeParams,
    QuadratureMode, Side,
};

fn main() -> ringflux::Result<()> {
    let p = LatticeParams::new(1.0, -2.0)?;
    let th = solve_threshold(&p)?;
    let u = periodic_solution(&p, &th);
    println!("beta = {}, d = {}, E0 = {:.12}", p.beta, p.d, th.e0);
    println!();
    println!("{:>6}  {:>18}  {:>18}  {:>18}", "r", "u(r)", "u'(r-)", "u'(r+)");
    for i in 0..=20 {
        let r = 0.125 * i as f64;
        let below = u.deriv(r, Side::Below);
        let above = u.deriv(r, Side::Above);
        println!("{r:>6.3}  {:>18.12}  {below:>18.12}  {above:>18.12}", u.value(r));
    }
    println!();

    // the jump at a ring equals beta u, and u repeats with period d
    let r = 1.5;
    let jump = u.deriv(r, Side::Above) - u.deriv(r, Side::Below);
    println!("jump of u' at r = {r}: {jump:.12}  (beta u = {:.12})", p.beta * u.value(r));
    println!("u(0.3) = {:.15}, u(0.3 + d) = {:.15}", u.value(0.3), u.value(0.3 + p.d));
    println!();

    let (d1_closed, d2_closed) = mean_squares(&u, QuadratureMode::ClosedForm)?;
    let (d1_quad, d2_quad) = mean_squares(&u, QuadratureMode::Quadrature)?;
    println!("D1 closed form  = {d1_closed:.15}");
    println!("D1 quadrature   = {d1_quad:.15}");
    println!("D2 closed form  = {d2_closed:.15}");
    println!("D2 quadrature   = {d2_quad:.15}");
    let crit = critical_coupling(&p)?;
    println!("c_crit = {:.15}, alpha_crit = {:.15}", crit.c_crit, crit.alpha_crit);
    Ok(())
}
