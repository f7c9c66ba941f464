use crate::error::{Error, Result};

/// Root of `f` inside `[a, b]`, given `f(a)` and `f(b)` of opposite sign.
///
/// Secant steps accelerated by a bisection safeguard; converges to machine
/// precision on the abscissa for any continuous `f`.
pub fn bracketed_root<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64) -> Result<f64> {
    let (mut lo, mut hi) = (a, b);
    let (mut flo, mut fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::InvalidInput(format!(
            "no sign change on [{lo}, {hi}]: f(a)={flo}, f(b)={fhi}"
        )));
    }

    let mut stale = 0u32; // iterations since the bracket last halved
    let mut width = hi - lo;
    for _ in 0..200 {
        let tol = 2.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
        if hi - lo <= tol {
            break;
        }
        // Secant candidate, demoted to the midpoint when it leaves the
        // bracket or the bracket has stopped shrinking geometrically.
        let mut x = lo - flo * (hi - lo) / (fhi - flo);
        if !(x > lo && x < hi) || stale >= 2 {
            x = 0.5 * (lo + hi);
            stale = 0;
        }
        if x <= lo || x >= hi {
            break; // bracket exhausted at machine resolution
        }
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        if hi - lo <= 0.5 * width {
            width = hi - lo;
            stale = 0;
        } else {
            stale += 1;
        }
    }
    // Prefer the endpoint with the smaller residual.
    Ok(if flo.abs() <= fhi.abs() { lo } else { hi })
}
