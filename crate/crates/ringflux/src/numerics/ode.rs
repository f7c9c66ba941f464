use crate::error::{Error, Result};

/// Controls for the adaptive Runge-Kutta driver.
#[derive(Debug, Clone, Copy)]
pub struct StepControl {
    pub rtol: f64,
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl { rtol: 1e-10, max_step: f64::INFINITY, max_steps: 50_000_000 }
    }
}

/// Dormand-Prince 5(4) from `t0` to `t1` (t0 < t1). Calls `on_step` after
/// every accepted step with the new abscissa and state; the final step lands
/// on `t1` exactly. Error control is relative to the sup norm of the state,
/// which keeps zero crossings of individual components from stalling the
/// step size.
pub fn dp54<const N: usize, F, S>(
    f: F,
    t0: f64,
    t1: f64,
    y0: [f64; N],
    ctl: &StepControl,
    mut on_step: S,
) -> Result<[f64; N]>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    S: FnMut(f64, &[f64; N]),
{
    if !(t1 > t0) {
        return Err(Error::InvalidInput(format!("bad span [{t0}, {t1}]")));
    }
    let span = t1 - t0;
    let mut t = t0;
    let mut y = y0;
    let mut h = (span / 100.0).min(ctl.max_step);
    let h_floor = span * 1e-14;

    let mut steps = 0usize;
    while t < t1 {
        steps += 1;
        if steps > ctl.max_steps {
            return Err(Error::IntegrationFailure(format!(
                "step budget {} exhausted at t = {t}",
                ctl.max_steps
            )));
        }
        let last = h >= t1 - t;
        if last {
            h = t1 - t;
        }

        let (y5, err) = dp54_step(&f, t, &y, h);
        let scale = 1e-300 + ctl.rtol * norm_inf(&y).max(norm_inf(&y5));
        let err_ratio = norm_inf(&err) / scale;

        if err_ratio <= 1.0 {
            t = if last { t1 } else { t + h };
            y = y5;
            on_step(t, &y);
            let grow = if err_ratio > 0.0 { 0.9 * err_ratio.powf(-0.2) } else { 5.0 };
            h = (h * grow.clamp(0.2, 5.0)).min(ctl.max_step);
        } else {
            h *= (0.9 * err_ratio.powf(-0.2)).clamp(0.1, 0.9);
            if h < h_floor {
                return Err(Error::IntegrationFailure(format!(
                    "step size underflow at t = {t}"
                )));
            }
        }
    }
    Ok(y)
}

fn norm_inf<const N: usize>(y: &[f64; N]) -> f64 {
    y.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// One 5th-order step with embedded 4th-order error estimate.
fn dp54_step<const N: usize, F>(f: &F, t: f64, y: &[f64; N], h: f64) -> ([f64; N], [f64; N])
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
    const A: [&[f64]; 6] = [
        &[1.0 / 5.0],
        &[3.0 / 40.0, 9.0 / 40.0],
        &[44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0],
        &[19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0],
        &[9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0],
        &[35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    // difference of the 5th- and 4th-order weights
    const E: [f64; 7] = [
        35.0 / 384.0 - 5179.0 / 57600.0,
        0.0,
        500.0 / 1113.0 - 7571.0 / 16695.0,
        125.0 / 192.0 - 393.0 / 640.0,
        -2187.0 / 6784.0 + 92097.0 / 339200.0,
        11.0 / 84.0 - 187.0 / 2100.0,
        -1.0 / 40.0,
    ];

    let mut k = [[0.0; N]; 7];
    k[0] = f(t, y);
    for s in 0..6 {
        let mut ys = *y;
        for (j, &a) in A[s].iter().enumerate() {
            if a != 0.0 {
                for i in 0..N {
                    ys[i] += h * a * k[j][i];
                }
            }
        }
        k[s + 1] = f(t + C[s] * h, &ys);
    }
    // stage 7 already evaluates at the 5th-order result, so k[6] closes it
    let mut y5 = *y;
    for (j, &a) in A[5].iter().enumerate() {
        if a != 0.0 {
            for i in 0..N {
                y5[i] += h * a * k[j][i];
            }
        }
    }
    let mut err = [0.0; N];
    for (j, &e) in E.iter().enumerate() {
        if e != 0.0 {
            for i in 0..N {
                err[i] += h * e * k[j][i];
            }
        }
    }
    (y5, err)
}
