use crate::error::{Error, Result};

/// Adaptive Simpson quadrature of `f` over `[a, b]` to relative accuracy `rel`.
///
/// Two passes: a coarse composite pass sizes the integral, then the adaptive
/// pass spends an absolute budget `rel * |I|`. Budgeting absolutely keeps
/// integrands with large dynamic range (sharp exponential peaks) honest:
/// panels carrying no mass exit early instead of burning subdivisions.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) || a >= b {
        return Err(Error::InvalidInput(format!("bad interval [{a}, {b}]")));
    }
    let mut coarse = 0.0;
    let n = 64;
    let h = (b - a) / n as f64;
    for i in 0..n {
        let (x0, x1) = (a + i as f64 * h, a + (i + 1) as f64 * h);
        coarse += simpson(f(x0), f(0.5 * (x0 + x1)), f(x1), h);
    }
    let atol = rel * coarse.abs().max(f64::MIN_POSITIVE);
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = simpson(fa, fm, fb, b - a);
    refine(f, a, b, fa, fm, fb, whole, atol, 60)
}

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    atol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * atol || m <= a || m >= b {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::ConvergenceFailure(format!(
            "quadrature depth exhausted near [{a}, {b}]"
        )));
    }
    let half = 0.5 * atol;
    Ok(refine(f, a, m, fa, flm, fm, left, half, depth - 1)?
        + refine(f, m, b, fm, frm, fb, right, half, depth - 1)?)
}
