//! Probe the channel quadratic form with trial functions.
//!
//! The form q[f] = int f'^2 + c int f^2/r^2 + beta sum f(r_n)^2 - E0 |f|^2
//! decides whether anything lives below the threshold: a negative value is
//! a certificate. Weak coupling keeps every tent positive; a deep well
//! goes negative on the interpolated finite-difference ground vector.
//!
//!     cargo run --example quadratic_form_probe

use ringflux::lattice::LatticeParams;
use ringflux::radial::RadialParams;
use ringflux::spectral::{fd_grid, fd_ground_vector, quadratic_form, TruncatedDomain};

fn main() -> ringflux::Result<()> {
    // weak coupling: tents of several widths all stay positive
    println!("weak coupling, alpha = 0.3, beta = -0.01:");
    let p = RadialParams::new(LatticeParams::new(1.0, -0.01)?, 0.3, 0)?;
    let tents: [(&[f64], &[f64]); 4] = [
        (&[0.5, 1.0, 1.5], &[0.0, 1.0, 0.0]),
        (&[1.0, 2.0, 3.0], &[0.0, 1.0, 0.0]),
        (&[0.2, 5.0, 12.0], &[0.0, 1.0, 0.0]),
        (&[1.0, 20.0, 50.0], &[0.0, 1.0, 0.0]),
    ];
    for (rs, fs) in tents {
        let q = quadratic_form(&p, rs, fs)?;
        println!("  tent on [{:>5}, {:>5}]: q = {q:+.8}", rs[0], rs[rs.len() - 1]);
    }
    println!();

    // deep well: interpolate the finite-difference ground vector and feed
    // it back through the exact form. Circles sit on grid nodes so the
    // polyline kink lands exactly on each delta.
    println!("deep well, alpha = 0.3, beta = -20:");
    let p = RadialParams::new(LatticeParams::new(1.0, -20.0)?, 0.3, 0)?;
    let dom = TruncatedDomain::new(0.0025, 60.0025)?;
    let grid = fd_grid(&p, &dom, 23_999)?;
    let (lambda, v) = fd_ground_vector(&grid, 1e-10);
    let mut rs = vec![dom.r_min];
    let mut fs = vec![0.0];
    for (i, &vi) in v.iter().enumerate() {
        rs.push(grid.node_radius(i));
        fs.push(vi);
    }
    rs.push(dom.r_max);
    fs.push(0.0);
    let q = quadratic_form(&p, &rs, &fs)?;
    println!("  fd ground eigenvalue: {lambda:.8}");
    println!("  q[interpolated ground vector] = {q:+.8}  (negative: spectrum below E0)");
    Ok(())
}
