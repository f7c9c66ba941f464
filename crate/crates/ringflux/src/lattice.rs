//! Comparison lattice: a half-line Kronig-Penney chain of delta interactions
//! of strength `beta` at spacing `d`, one per concentric circle
//! r_n = d (n + 1/2). The rest of the crate keys off two of its invariants:
//! the lowest spectral edge E0 and the positive band-edge profile u at E0.

use crate::error::{Error, Result};
use crate::numerics::{quad, roots};
use serde::Serialize;

/// Ring spacing and delta strength. `d > 0`; `beta` of any sign, `beta = 0`
/// meaning the free lattice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatticeParams {
    pub d: f64,
    pub beta: f64,
}

impl LatticeParams {
    pub fn new(d: f64, beta: f64) -> Result<Self> {
        if !(d.is_finite() && d > 0.0) {
            return Err(Error::InvalidInput(format!("spacing d = {d}, need d > 0")));
        }
        if !beta.is_finite() {
            return Err(Error::InvalidInput(format!("delta strength beta = {beta}")));
        }
        Ok(LatticeParams { d, beta })
    }

    pub fn branch(&self) -> Branch {
        if self.beta < 0.0 {
            Branch::Attractive
        } else if self.beta > 0.0 {
            Branch::Repulsive
        } else {
            Branch::Free
        }
    }

    /// Circle radii r_n = d (n + 1/2) inside the open interval `(lo, hi)`.
    pub fn circles_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut out = Vec::new();
        let mut n = ((lo / self.d - 0.5).floor().max(-1.0)) as i64;
        loop {
            let r = self.d * (n as f64 + 0.5);
            if r >= hi {
                break;
            }
            if r > lo {
                out.push(r);
            }
            n += 1;
        }
        out
    }
}

/// Sign class of the delta strength.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Attractive,
    Free,
    Repulsive,
}

/// Lowest spectral edge of the comparison chain.
///
/// `rate` is the decay rate kappa0 (`E0 = -kappa0^2`) on the attractive
/// branch, the momentum k0 (`E0 = k0^2`) on the repulsive branch, and 0 for
/// the free lattice.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ThresholdData {
    pub e0: f64,
    pub rate: f64,
    pub branch: Branch,
}

/// Solve for the lowest spectral edge E0.
///
/// Attractive: kappa tanh(kappa d / 2) = |beta| / 2, E0 = -kappa^2 < 0.
/// Repulsive: 2 k sin(k d / 2) = beta cos(k d / 2) on (0, pi/d), E0 = k^2.
/// Free: E0 = 0.
pub fn solve_threshold(p: &LatticeParams) -> Result<ThresholdData> {
    let (d, beta) = (p.d, p.beta);
    match p.branch() {
        Branch::Free => Ok(ThresholdData { e0: 0.0, rate: 0.0, branch: Branch::Free }),
        Branch::Attractive => {
            let half = 0.5 * beta.abs();
            let g = |k: f64| k * (0.5 * k * d).tanh() - half;
            // g(0) < 0 and g is increasing; expand until the sign flips.
            let mut hi = half + 2.0 / d;
            let mut tries = 0;
            while g(hi) < 0.0 {
                hi *= 2.0;
                tries += 1;
                if tries > 100 {
                    return Err(Error::ConvergenceFailure(
                        "no upper bracket for the decay rate".into(),
                    ));
                }
            }
            let kappa = roots::bracketed_root(g, 0.0, hi)?;
            Ok(ThresholdData { e0: -kappa * kappa, rate: kappa, branch: Branch::Attractive })
        }
        Branch::Repulsive => {
            // increasing on (0, pi/d): unique root below the first band top
            let g = |k: f64| 2.0 * k * (0.5 * k * d).sin() - beta * (0.5 * k * d).cos();
            let k0 = roots::bracketed_root(g, 0.0, std::f64::consts::PI / d)?;
            Ok(ThresholdData { e0: k0 * k0, rate: k0, branch: Branch::Repulsive })
        }
    }
}

/// Residual of the defining threshold condition at `th.rate`; zero at the
/// exact edge. Attractive: kappa tanh(kappa d/2) - |beta|/2. Repulsive:
/// 2 k sin(k d/2) - beta cos(k d/2). Free: 0.
pub fn threshold_residual(p: &LatticeParams, th: &ThresholdData) -> f64 {
    match th.branch {
        Branch::Free => 0.0,
        Branch::Attractive => th.rate * (0.5 * th.rate * p.d).tanh() - 0.5 * p.beta.abs(),
        Branch::Repulsive => {
            2.0 * th.rate * (0.5 * th.rate * p.d).sin() - p.beta * (0.5 * th.rate * p.d).cos()
        }
    }
}

/// Kronig-Penney discriminant (half the transfer-matrix trace) at energy `E`.
///
/// E inside the essential spectrum iff |Delta| <= 1; Delta(E0) = 1 at the
/// lowest edge. The E = 0 value is the removable limit 1 + beta d / 2.
pub fn kp_discriminant(p: &LatticeParams, e: f64) -> f64 {
    let (d, beta) = (p.d, p.beta);
    if e == 0.0 {
        1.0 + 0.5 * beta * d
    } else if e > 0.0 {
        let k = e.sqrt();
        (k * d).cos() + 0.5 * beta / k * (k * d).sin()
    } else {
        let q = (-e).sqrt();
        (q * d).cosh() + 0.5 * beta / q * (q * d).sinh()
    }
}

/// `kp_discriminant(E) - 1`, evaluated without the catastrophic cancellation
/// the direct form suffers near a band edge at large |beta| d. Half-angle
/// identity: for E < 0,
///   Delta - 1 = 2 sinh(q d/2) [ sinh(q d/2) + (beta / 2q) cosh(q d/2) ],
/// and the bracket vanishes identically at the threshold condition.
pub fn kp_discriminant_minus_one(p: &LatticeParams, e: f64) -> f64 {
    let (d, beta) = (p.d, p.beta);
    if e == 0.0 {
        0.5 * beta * d
    } else if e > 0.0 {
        let k = e.sqrt();
        let (s, c) = (0.5 * k * d).sin_cos();
        2.0 * s * (0.5 * beta / k * c - s)
    } else {
        let q = (-e).sqrt();
        let (s, c) = ((0.5 * q * d).sinh(), (0.5 * q * d).cosh());
        2.0 * s * (s + 0.5 * beta / q * c)
    }
}

/// Positive periodic band-edge profile u at E0, normalized so that the
/// half-cell peak value is u(0) = 2 e^{kappa0 d / 2} (attractive),
/// u(0) = amplitude (repulsive and free). `with_amplitude` rescales.
#[derive(Debug, Clone, Copy)]
pub struct PeriodicSolution {
    params: LatticeParams,
    threshold: ThresholdData,
    amplitude: f64,
}

/// One-sided limit selector at a circle radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Below,
    Above,
}

/// Build the band-edge profile for `th = solve_threshold(p)`.
pub fn periodic_solution(p: &LatticeParams, th: &ThresholdData) -> PeriodicSolution {
    PeriodicSolution { params: *p, threshold: *th, amplitude: 1.0 }
}

impl PeriodicSolution {
    pub fn params(&self) -> &LatticeParams {
        &self.params
    }

    pub fn threshold(&self) -> &ThresholdData {
        &self.threshold
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn with_amplitude(&self, amplitude: f64) -> PeriodicSolution {
        PeriodicSolution { amplitude, ..*self }
    }

    /// Reduce r >= 0 to the fundamental cell [0, d).
    fn reduce(&self, r: f64) -> f64 {
        let d = self.params.d;
        let x = r - d * (r / d).floor();
        if x < 0.0 {
            x + d
        } else {
            x
        }
    }

    /// True when the reduced coordinate sits on the mid-cell circle, up to
    /// the reduction roundoff for radii this many cells out.
    fn on_circle(&self, r: f64, x: f64) -> bool {
        let d = self.params.d;
        let slop = 8.0 * f64::EPSILON * d * (r.abs() / d + 2.0);
        (x - 0.5 * d).abs() <= slop
    }

    /// u(r). Continuous, periodic, strictly positive.
    pub fn value(&self, r: f64) -> f64 {
        let d = self.params.d;
        let x = self.reduce(r);
        let t = (x - 0.5 * d).abs();
        match self.threshold.branch {
            Branch::Free => self.amplitude,
            Branch::Attractive => {
                let k = self.threshold.rate;
                self.amplitude * ((k * t).exp() + ((k * d).exp()) * (-k * t).exp())
            }
            Branch::Repulsive => {
                let k = self.threshold.rate;
                // cos(k x) mirrored about the half cell
                self.amplitude * (k * (0.5 * d - t)).cos()
            }
        }
    }

    /// One-sided derivative u'(r). The two sides differ only on circles,
    /// where the jump is u'(r+) - u'(r-) = beta u(r).
    pub fn deriv(&self, r: f64, side: Side) -> f64 {
        let d = self.params.d;
        let x = self.reduce(r);
        let (t, sign) = if self.on_circle(r, x) {
            (0.0, if side == Side::Above { 1.0 } else { -1.0 })
        } else {
            ((x - 0.5 * d).abs(), (x - 0.5 * d).signum())
        };
        match self.threshold.branch {
            Branch::Free => 0.0,
            Branch::Attractive => {
                let k = self.threshold.rate;
                self.amplitude * sign * k * ((k * t).exp() - (k * d).exp() * (-k * t).exp())
            }
            Branch::Repulsive => {
                let k = self.threshold.rate;
                self.amplitude * sign * k * (k * (0.5 * d - t)).sin()
            }
        }
    }

    /// Partial integral of u^{-2} over one cell: int_0^x u^{-2}, x in [0, d].
    /// Closed form on every branch, so downstream Wronskians hold to roundoff.
    pub fn inv_square_integral(&self, x: f64) -> f64 {
        let d = self.params.d;
        debug_assert!((-1e-12..=d * (1.0 + 1e-12)).contains(&x));
        let x = x.clamp(0.0, d);
        let half = 0.5 * d;
        if x <= half {
            self.inv_square_first_half(x)
        } else {
            2.0 * self.inv_square_first_half(half) - self.inv_square_first_half(d - x)
        }
    }

    /// int over one full cell; equals d * D2 for the current amplitude.
    pub fn inv_square_period(&self) -> f64 {
        self.inv_square_integral(self.params.d)
    }

    fn inv_square_first_half(&self, x: f64) -> f64 {
        let d = self.params.d;
        let a2 = self.amplitude * self.amplitude;
        match self.threshold.branch {
            Branch::Free => x / a2,
            Branch::Repulsive => {
                let k = self.threshold.rate;
                (k * x).tan() / (a2 * k)
            }
            Branch::Attractive => {
                let k = self.threshold.rate;
                let big = (k * d).exp();
                let w = (2.0 * k * (0.5 * d - x)).exp();
                (1.0 / (w + big) - 0.5 / big) / (2.0 * k * a2)
            }
        }
    }
}

/// How to evaluate the cell averages of u^2 and u^{-2}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureMode {
    /// Exact antiderivatives; defined only on the attractive branch.
    ClosedForm,
    /// Adaptive quadrature on any branch.
    Quadrature,
}

/// Cell averages (D1, D2) = ( <u^2>, <u^{-2}> ) of the band-edge profile.
/// Scales as (a^2 D1, D2 / a^2) under u -> a u; the product is invariant.
pub fn mean_squares(u: &PeriodicSolution, mode: QuadratureMode) -> Result<(f64, f64)> {
    let p = *u.params();
    match mode {
        QuadratureMode::ClosedForm => {
            if u.threshold().branch != Branch::Attractive {
                return Err(Error::UnsupportedMode(
                    "closed-form cell averages exist only for beta < 0".into(),
                ));
            }
            let t = u.threshold().rate * p.d;
            let a2 = u.amplitude() * u.amplitude();
            let d1 = 2.0 * t.exp() * (t.sinh() + t) / t;
            let d2 = (-t).exp() * (0.5 * t).tanh() / (2.0 * t);
            Ok((a2 * d1, d2 / a2))
        }
        QuadratureMode::Quadrature => {
            // both integrands are symmetric about the half cell
            let half = 0.5 * p.d;
            let d1 = quad::integrate(&|x| u.value(x) * u.value(x), 0.0, half, 1e-13)?;
            let d2 = quad::integrate(
                &|x| {
                    let v = u.value(x);
                    1.0 / (v * v)
                },
                0.0,
                half,
                1e-13,
            )?;
            Ok((d1 / half, d2 / half))
        }
    }
}

/// Critical inverse-square coupling and the matching critical flux.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CriticalData {
    pub d1: f64,
    pub d2: f64,
    pub c_crit: f64,
    pub alpha_crit: f64,
}

/// c_crit = -1 / (4 D1 D2) and alpha_crit = sqrt(c_crit + 1/4).
///
/// By Cauchy-Schwarz D1 D2 >= 1 with equality only at beta = 0, so
/// c_crit lies in (-1/4, 0) whenever it is defined.
pub fn critical_coupling(p: &LatticeParams) -> Result<CriticalData> {
    let th = solve_threshold(p)?;
    if th.branch == Branch::Free {
        return Err(Error::UndefinedCriticalValue(
            "free lattice: D1 D2 = 1 exactly and the critical flux degenerates to 0".into(),
        ));
    }
    let u = periodic_solution(p, &th);
    let mode = if th.branch == Branch::Attractive {
        QuadratureMode::ClosedForm
    } else {
        QuadratureMode::Quadrature
    };
    let (d1, d2) = mean_squares(&u, mode)?;
    let c_crit = -1.0 / (4.0 * d1 * d2);
    if !(-0.25..0.0).contains(&c_crit) {
        return Err(Error::CrossCheck(format!(
            "c_crit = {c_crit} outside (-1/4, 0): D1 D2 = {}",
            d1 * d2
        )));
    }
    Ok(CriticalData { d1, d2, c_crit, alpha_crit: (c_crit + 0.25).sqrt() })
}

/// Deep-well asymptotic of the critical coupling on the attractive branch:
/// with T = kappa0 d, D1 D2 = tanh(T/2)(sinh T + T)/T^2 -> e^T / (2 T^2) and
/// T -> |beta| d / 2, so c_crit ~ -(beta^2 d^2 / 8) e^{-|beta| d / 2}.
pub fn strong_coupling_estimate(p: &LatticeParams) -> Result<f64> {
    if p.beta >= 0.0 {
        return Err(Error::UnsupportedBranch(
            "deep-well estimate needs beta < 0".into(),
        ));
    }
    let bd = p.beta * p.d;
    Ok(-(bd * bd / 8.0) * (-0.5 * bd.abs()).exp())
}

/// One row of a critical-flux sweep.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepRow {
    pub e0: f64,
    pub d1: f64,
    pub d2: f64,
    pub c_crit: f64,
    pub alpha_crit: f64,
}

/// Sweep outcome for one beta; rows where the critical value is undefined
/// (beta = 0) or a solve fails carry the error instead of a row.
#[derive(Debug)]
pub struct SweepEntry {
    pub beta: f64,
    pub row: Result<SweepRow>,
}

/// Critical flux across a list of delta strengths at fixed spacing.
pub fn sweep_alpha_crit(betas: &[f64], d: f64) -> Result<Vec<SweepEntry>> {
    let mut out = Vec::with_capacity(betas.len());
    for &beta in betas {
        let row = LatticeParams::new(d, beta).and_then(|p| {
            let th = solve_threshold(&p)?;
            let crit = critical_coupling(&p)?;
            Ok(SweepRow {
                e0: th.e0,
                d1: crit.d1,
                d2: crit.d2,
                c_crit: crit.c_crit,
                alpha_crit: crit.alpha_crit,
            })
        });
        out.push(SweepEntry { beta, row });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(d: f64, beta: f64) -> LatticeParams {
        LatticeParams::new(d, beta).unwrap()
    }

    #[test]
    fn rejects_bad_params() {
        assert!(LatticeParams::new(0.0, 1.0).is_err());
        assert!(LatticeParams::new(-1.0, 1.0).is_err());
        assert!(LatticeParams::new(1.0, f64::NAN).is_err());
    }

    #[test]
    fn threshold_frozen_values() {
        // (d, beta, e0, rate)
        let table = [
            (1.0, -2.0, -2.38209787789084, 1.54340463841821),
            (1.0, 2.0, 1.70705297555092, 1.30654237418881),
            (1.0, -20.0, -100.018145150398, 10.0009072163678),
            (1.0, -0.5, -0.521544438882469, 0.722180336815168),
            (1.0, 0.5, 0.479844724338868, 0.692708253407499),
            (1.0, -5.0, -7.93941708903376, 2.81769712514205),
            (1.0, 5.0, 3.46523232107684, 1.86151344907224),
            (0.5, -2.0, -4.35662838880812, 2.08725379118307),
            (2.0, -2.0, -1.43922883989064, 1.19967864025773),
            (1.0, -1.0, -1.08915709720203, 1.04362689559154),
        ];
        for (d, beta, e0, rate) in table {
            let th = solve_threshold(&lat(d, beta)).unwrap();
            assert!(
                (th.e0 - e0).abs() <= 1e-10 * e0.abs().max(1.0),
                "E0({beta}, {d}) = {} vs {e0}",
                th.e0
            );
            assert!((th.rate - rate).abs() <= 1e-10 * rate.abs());
        }
    }

    #[test]
    fn free_lattice_threshold() {
        let th = solve_threshold(&lat(1.0, 0.0)).unwrap();
        assert_eq!(th.e0, 0.0);
        assert_eq!(th.branch, Branch::Free);
    }

    #[test]
    fn weak_coupling_threshold_scaling() {
        // shallow wells: E0 ~ -(beta/2)^2 for |beta| d << 1
        let th = solve_threshold(&lat(1.0, -1e-4)).unwrap();
        assert!((th.e0 - (-1.00000833338889e-4)).abs() < 1e-17);
        let th = solve_threshold(&lat(1.0, -1e-3)).unwrap();
        assert!((th.e0 - (-1.00008333888915e-3)).abs() < 1e-15);
    }

    #[test]
    fn residual_and_discriminant_agree_at_threshold() {
        for beta in [-0.5, 0.5, -2.0, 2.0, -5.0, 5.0, -20.0] {
            for d in [0.5, 1.0, 2.0] {
                let p = lat(d, beta);
                let th = solve_threshold(&p).unwrap();
                let res = threshold_residual(&p, &th).abs();
                assert!(res <= 1e-12, "residual {res} at beta={beta}, d={d}");
                // the f64 floor of |Delta - 1| grows like e^{rate d} |E0| eps;
                // keep the tight assertion to points where that floor < 1e-10
                if th.rate * d < 14.0 {
                    let dm1 = kp_discriminant_minus_one(&p, th.e0).abs();
                    assert!(dm1 <= 1e-10, "|Delta-1| = {dm1} at beta={beta}, d={d}");
                }
            }
        }
    }

    #[test]
    fn free_discriminant_is_cosine() {
        let p = lat(1.0, 0.0);
        let e = std::f64::consts::PI * std::f64::consts::PI;
        assert!((kp_discriminant(&p, e) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn discriminant_continuous_at_zero_energy() {
        for beta in [-2.0, 2.0] {
            let p = lat(1.0, beta);
            let at0 = kp_discriminant(&p, 0.0);
            assert!((kp_discriminant(&p, 1e-14) - at0).abs() < 1e-9);
            assert!((kp_discriminant(&p, -1e-14) - at0).abs() < 1e-9);
            assert!((at0 - (1.0 + 0.5 * beta)).abs() < 1e-15);
        }
    }

    #[test]
    fn minus_one_matches_plain_form_at_moderate_energy() {
        for beta in [-2.0, 0.0, 3.0] {
            let p = lat(1.0, beta);
            for e in [-3.0, -0.7, 0.0, 0.9, 6.0] {
                let a = kp_discriminant(&p, e) - 1.0;
                let b = kp_discriminant_minus_one(&p, e);
                assert!((a - b).abs() < 1e-12 * (1.0 + a.abs()), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn band_edge_profile_attractive() {
        let p = lat(1.0, -2.0);
        let th = solve_threshold(&p).unwrap();
        let u = periodic_solution(&p, &th);
        let k = th.rate;
        let big = (k * p.d).exp();
        assert!((u.value(0.0) - 2.0 * (0.5 * k * p.d).exp()).abs() < 1e-12);
        assert!((u.value(0.5) - (1.0 + big)).abs() < 1e-12);
        assert!(u.deriv(0.0, Side::Above).abs() < 1e-12);
        // distributional jump at the circle
        let jump = u.deriv(0.5, Side::Above) - u.deriv(0.5, Side::Below);
        assert!((jump - p.beta * u.value(0.5)).abs() < 1e-10);
    }

    #[test]
    fn band_edge_profile_repulsive() {
        let p = lat(1.0, 2.0);
        let th = solve_threshold(&p).unwrap();
        let u = periodic_solution(&p, &th);
        assert!((u.value(0.0) - 1.0).abs() < 1e-15);
        assert!((u.value(0.3) - (th.rate * 0.3).cos()).abs() < 1e-14);
        let jump = u.deriv(0.5, Side::Above) - u.deriv(0.5, Side::Below);
        assert!((jump - p.beta * u.value(0.5)).abs() < 1e-12);
    }

    #[test]
    fn profile_periodic_symmetric_positive() {
        for beta in [-2.0, -20.0, 2.0, 0.0] {
            let p = lat(1.0, beta);
            let th = solve_threshold(&p).unwrap();
            let u = periodic_solution(&p, &th);
            for i in 0..=40 {
                let x = i as f64 * 0.025;
                assert!(u.value(x) > 0.0);
                let rel = 1e-12 * u.value(x).abs();
                assert!((u.value(x + 7.0) - u.value(x)).abs() <= rel.max(1e-12));
                assert!((u.value(p.d - x) - u.value(x)).abs() <= rel.max(1e-12));
            }
        }
    }

    #[test]
    fn inv_square_integral_consistent_with_mean() {
        for beta in [-2.0, -20.0, 2.0, 0.0] {
            let p = lat(1.0, beta);
            let th = solve_threshold(&p).unwrap();
            let u = periodic_solution(&p, &th);
            let (_, d2) = mean_squares(&u, QuadratureMode::Quadrature).unwrap();
            let per = u.inv_square_period();
            assert!(
                ((per - p.d * d2) / per).abs() < 1e-10,
                "period integral {per} vs d*D2 {}",
                p.d * d2
            );
            assert_eq!(u.inv_square_integral(0.0), 0.0);
        }
    }

    #[test]
    fn mean_squares_frozen_and_cross_checked() {
        // closed-form vs quadrature across the attractive grid
        for beta in [-0.5, -2.0, -5.0, -20.0] {
            for d in [0.5, 1.0, 2.0] {
                let p = lat(d, beta);
                let th = solve_threshold(&p).unwrap();
                let u = periodic_solution(&p, &th);
                let (c1, c2) = mean_squares(&u, QuadratureMode::ClosedForm).unwrap();
                let (q1, q2) = mean_squares(&u, QuadratureMode::Quadrature).unwrap();
                assert!(((c1 - q1) / c1).abs() < 1e-9, "D1 {c1} vs {q1} at ({beta}, {d})");
                assert!(((c2 - q2) / c2).abs() < 1e-9, "D2 {c2} vs {q2} at ({beta}, {d})");
            }
        }
        let p = lat(1.0, -2.0);
        let u = periodic_solution(&p, &solve_threshold(&p).unwrap());
        let (d1, d2) = mean_squares(&u, QuadratureMode::ClosedForm).unwrap();
        assert!((d1 - 22.9070669563).abs() < 1e-8);
        assert!((d2 - 0.0448454394702).abs() < 1e-10);
    }

    #[test]
    fn closed_form_requires_attractive_branch() {
        for beta in [0.0, 2.0] {
            let p = lat(1.0, beta);
            let u = periodic_solution(&p, &solve_threshold(&p).unwrap());
            assert!(matches!(
                mean_squares(&u, QuadratureMode::ClosedForm),
                Err(Error::UnsupportedMode(_))
            ));
        }
    }

    #[test]
    fn amplitude_scaling_leaves_product_invariant() {
        let p = lat(1.0, -2.0);
        let u = periodic_solution(&p, &solve_threshold(&p).unwrap());
        let (d1, d2) = mean_squares(&u, QuadratureMode::ClosedForm).unwrap();
        let (s1, s2) = mean_squares(&u.with_amplitude(3.0), QuadratureMode::ClosedForm).unwrap();
        assert!((s1 - 9.0 * d1).abs() < 1e-9 * d1);
        assert!((s2 - d2 / 9.0).abs() < 1e-12);
        assert!(((s1 * s2 - d1 * d2) / (d1 * d2)).abs() < 1e-13);
    }

    #[test]
    fn critical_frozen_values() {
        // (beta, c_crit, alpha_crit), all at d = 1
        let table = [
            (-2.0, -0.243361704837, 0.0814757335815),
            (2.0, -0.245433972216, 0.0675723892111),
            (-20.0, -0.00226649905953, 0.497728340504),
            (-1.0, -0.248476301855, 0.0390345762797),
            (-5.0, -0.200510548657, 0.222462247006),
            (5.0, -0.22878019396, 0.145670196129),
        ];
        for (beta, c_crit, alpha_crit) in table {
            let crit = critical_coupling(&lat(1.0, beta)).unwrap();
            assert!(
                (crit.c_crit - c_crit).abs() < 1e-9,
                "c_crit({beta}) = {} vs {c_crit}",
                crit.c_crit
            );
            assert!((crit.alpha_crit - alpha_crit).abs() < 1e-9);
        }
        // cancellation floor: alpha_crit^2 = 1.4e-9 is a difference of
        // near-quarter quantities, good to ~3e-12 in alpha here
        let crit = critical_coupling(&lat(1.0, -1e-3)).unwrap();
        assert!((crit.alpha_crit - 3.72695974851e-5).abs() < 1e-10);
    }

    #[test]
    fn critical_undefined_for_free_lattice() {
        assert!(matches!(
            critical_coupling(&lat(1.0, 0.0)),
            Err(Error::UndefinedCriticalValue(_))
        ));
    }

    #[test]
    fn weak_coupling_cell_averages() {
        // With the pinned peak normalization the averages approach (4, 1/4)
        // only linearly in kappa0 d = sqrt(|beta| d): at beta = -1e-4 they
        // still sit 1% / 0.25% away.
        let p = lat(1.0, -1e-4);
        let u = periodic_solution(&p, &solve_threshold(&p).unwrap());
        let (d1, d2) = mean_squares(&u, QuadratureMode::ClosedForm).unwrap();
        assert!((d1 - 4.04023450547).abs() < 1e-8);
        assert!((d2 - 0.247510385524).abs() < 1e-10);
        // the invariant product, by contrast, is already within 6e-8 of 1
        assert!((d1 * d2 - 1.0).abs() < 1e-7);
    }

    #[test]
    fn strong_coupling_estimate_tracks_critical() {
        let est = strong_coupling_estimate(&lat(1.0, -20.0)).unwrap();
        assert!((est - (-2.2699964881242427e-3)).abs() < 1e-15 * est.abs());
        let frozen = [(-20.0, 0.99845928), (-30.0, 0.99998348), (-40.0, 0.99999985)];
        let mut prev = 0.0;
        for (beta, expected) in frozen {
            let p = lat(1.0, beta);
            let ratio = critical_coupling(&p).unwrap().c_crit / strong_coupling_estimate(&p).unwrap();
            assert!((ratio - expected).abs() < 1e-7, "ratio({beta}) = {ratio}");
            assert!(ratio > prev, "ratio should increase toward 1");
            prev = ratio;
        }
    }

    #[test]
    fn strong_coupling_estimate_needs_attraction() {
        assert!(matches!(
            strong_coupling_estimate(&lat(1.0, 2.0)),
            Err(Error::UnsupportedBranch(_))
        ));
        assert!(strong_coupling_estimate(&lat(1.0, 0.0)).is_err());
    }

    #[test]
    fn sweep_flags_free_lattice_and_orders_rows() {
        let entries = sweep_alpha_crit(&[-2.0, 0.0, 2.0], 1.0).unwrap();
        assert_eq!(entries.len(), 3);
        assert!(entries[0].row.is_ok());
        assert!(entries[1].row.is_err());
        assert!(entries[2].row.is_ok());
        assert_eq!(entries[0].beta, -2.0);
    }

    #[test]
    fn alpha_crit_monotone_in_strength() {
        let betas: Vec<f64> = (1..=30).map(|i| -(i as f64)).collect();
        let mut prev = 0.0;
        for entry in sweep_alpha_crit(&betas, 1.0).unwrap() {
            let a = entry.row.unwrap().alpha_crit;
            assert!(a > prev && a < 0.5, "alpha_crit({}) = {a}", entry.beta);
            prev = a;
        }
    }

    #[test]
    fn circles_enumeration() {
        let p = lat(1.0, -2.0);
        assert_eq!(p.circles_in(0.3, 2.7), vec![0.5, 1.5, 2.5]);
        assert_eq!(p.circles_in(0.5, 2.5), vec![1.5]);
        assert!(p.circles_in(0.6, 1.4).is_empty());
        let q = lat(0.25, 1.0);
        assert_eq!(q.circles_in(0.0, 1.0), vec![0.125, 0.375, 0.625, 0.875]);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn threshold_solves_its_condition(
                beta in prop_oneof![-12.0..-0.01f64, 0.01..10.0f64],
                d in 0.1..2.0f64,
            ) {
                let p = lat(d, beta);
                let th = solve_threshold(&p).unwrap();
                prop_assert!(threshold_residual(&p, &th).abs() <= 1e-10);
                match p.branch() {
                    Branch::Attractive => prop_assert!(th.e0 < 0.0),
                    Branch::Repulsive => {
                        let top = std::f64::consts::PI / d;
                        prop_assert!(th.e0 > 0.0 && th.e0 < top * top);
                    }
                    Branch::Free => unreachable!(),
                }
                // the edge never sits strictly inside the band
                let dm1 = kp_discriminant_minus_one(&p, th.e0).abs();
                prop_assert!(dm1 <= 1e-6, "|Delta(E0)-1| = {dm1}");
            }

            #[test]
            fn critical_flux_bounded(
                beta in prop_oneof![-12.0..-0.01f64, 0.01..10.0f64],
                d in 0.1..2.0f64,
            ) {
                let crit = critical_coupling(&lat(d, beta)).unwrap();
                prop_assert!(crit.c_crit > -0.25 && crit.c_crit < 0.0);
                prop_assert!(crit.alpha_crit > 0.0 && crit.alpha_crit < 0.5);
                prop_assert!(crit.d1 * crit.d2 > 1.0);
            }
        }
    }
}
