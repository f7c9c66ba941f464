/// Sturm counts and bisection for a symmetric tridiagonal matrix with a
/// constant off-diagonal, the shape produced by a uniform-grid second
/// difference.

/// Number of eigenvalues strictly below `x`, by the LDL^T inertia count.
pub fn count_below(diag: &[f64], off: f64, x: f64) -> usize {
    let off2 = off * off;
    let mut count = 0;
    // seeding with infinity makes the first pivot plain d - x
    let mut q = f64::INFINITY;
    for &d in diag {
        q = if q == 0.0 { d - x - off2 / f64::MIN_POSITIVE } else { d - x - off2 / q };
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `k` lowest eigenvalues, each bracketed by Sturm bisection to an
/// absolute width `tol`.
pub fn lowest_eigenvalues(diag: &[f64], off: f64, k: usize, tol: f64) -> Vec<f64> {
    let hi0 = diag.iter().fold(f64::NEG_INFINITY, |m, &d| m.max(d)) + 2.0 * off.abs();
    let lo0 = diag.iter().fold(f64::INFINITY, |m, &d| m.min(d)) - 2.0 * off.abs();
    let mut out = Vec::with_capacity(k);
    let mut lo_start = lo0;
    for j in 1..=k.min(diag.len()) {
        let (mut lo, mut hi) = (lo_start, hi0);
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if count_below(diag, off, mid) >= j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let lambda = 0.5 * (lo + hi);
        out.push(lambda);
        lo_start = lo; // eigenvalues are ordered; restart above the last bracket floor
    }
    out
}

/// Eigenvector for an eigenvalue already known to bisection accuracy, by
/// inverse iteration. Returned with unit sup norm and positive peak.
pub fn eigenvector(diag: &[f64], off: f64, lambda: f64) -> Vec<f64> {
    let n = diag.len();
    let scale = diag.iter().fold(off.abs(), |m, &d| m.max(d.abs()));
    let floor = f64::EPSILON * scale.max(f64::MIN_POSITIVE);
    let mut x = vec![1.0; n];
    let mut work = vec![0.0; n];
    for _ in 0..3 {
        // Thomas solve of (T - lambda I) w = x with tiny-pivot nudging
        let mut piv = diag[0] - lambda;
        if piv.abs() < floor {
            piv = floor;
        }
        work[0] = x[0] / piv;
        let mut uppers = vec![0.0; n];
        uppers[0] = off / piv;
        for i in 1..n {
            let mut p = diag[i] - lambda - off * uppers[i - 1];
            if p.abs() < floor {
                p = floor;
            }
            uppers[i] = off / p;
            work[i] = (x[i] - off * work[i - 1]) / p;
        }
        for i in (0..n - 1).rev() {
            work[i] -= uppers[i] * work[i + 1];
        }
        let peak = work.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        for (xi, wi) in x.iter_mut().zip(&work) {
            *xi = wi / peak;
        }
    }
    let (imax, _) = x
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).expect("finite"))
        .expect("nonempty");
    if x[imax] < 0.0 {
        for v in &mut x {
            *v = -*v;
        }
    }
    x
}
