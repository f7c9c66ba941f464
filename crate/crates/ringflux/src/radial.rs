//! Half-line radial problem in one angular channel: the operator
//! -y'' + (c / r^2) y with delta jumps y'(r_n+) - y'(r_n-) = beta y(r_n)
//! on the circles r_n = d (n + 1/2), where c = (l + alpha)^2 - 1/4 collects
//! the flux alpha and the angular momentum l.

use crate::error::{Error, Result};
use crate::lattice::{
    self, Branch, LatticeParams, PeriodicSolution, QuadratureMode, Side, ThresholdData,
};
use crate::numerics::ode::{self, StepControl};
use serde::Serialize;

/// Inverse-square coupling c = (l + alpha)^2 - 1/4 for flux `alpha` in
/// [0, 1) and integer channel `l`. The l = 0 channel minimizes it on
/// alpha in [0, 1/2].
pub fn effective_coupling(alpha: f64, l: i32) -> Result<f64> {
    if !alpha.is_finite() || !(0.0..1.0).contains(&alpha) {
        return Err(Error::InvalidInput(format!(
            "flux alpha = {alpha}, need 0 <= alpha < 1"
        )));
    }
    let m = l as f64 + alpha;
    Ok(m * m - 0.25)
}

/// One angular channel over the comparison lattice.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RadialParams {
    pub lattice: LatticeParams,
    pub alpha: f64,
    pub l: i32,
}

impl RadialParams {
    pub fn new(lattice: LatticeParams, alpha: f64, l: i32) -> Result<Self> {
        effective_coupling(alpha, l)?;
        Ok(RadialParams { lattice, alpha, l })
    }

    pub fn c(&self) -> f64 {
        let m = self.l as f64 + self.alpha;
        m * m - 0.25
    }

    /// Frobenius index: the regular solution behaves like r^{nu + 1/2} at 0.
    pub fn nu(&self) -> f64 {
        (self.l as f64 + self.alpha).abs()
    }
}

/// One accepted integration point. `yp_in`/`yp_out` are the one-sided
/// derivatives; they differ only on a circle. The represented value is
/// y * e^{log_scale} up to the overall normalization of the launch.
#[derive(Debug, Clone, Copy)]
pub struct Sample {
    pub r: f64,
    pub y: f64,
    pub yp_in: f64,
    pub yp_out: f64,
    pub log_scale: f64,
}

/// Radial solution sampled along the adaptive grid.
#[derive(Debug, Clone)]
pub struct RadialSolution {
    pub e: f64,
    pub samples: Vec<Sample>,
}

impl RadialSolution {
    pub fn first(&self) -> &Sample {
        self.samples.first().expect("nonempty by construction")
    }

    pub fn last(&self) -> &Sample {
        self.samples.last().expect("nonempty by construction")
    }

    /// Sign changes of y along the grid; interior zeros of the solution.
    pub fn zero_count(&self) -> usize {
        let mut count = 0;
        let mut prev: Option<f64> = None;
        for s in &self.samples {
            if s.y == 0.0 {
                count += 1;
                prev = None;
                continue;
            }
            if let Some(py) = prev {
                if py.signum() != s.y.signum() {
                    count += 1;
                }
            }
            prev = Some(s.y);
        }
        count
    }

    /// log of the largest |y| (true scale) over samples with r in [lo, hi].
    pub fn log_envelope(&self, lo: f64, hi: f64) -> f64 {
        self.samples
            .iter()
            .filter(|s| s.r >= lo && s.r <= hi)
            .map(|s| s.y.abs().max(f64::MIN_POSITIVE).ln() + s.log_scale)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Cauchy data of the regular (recessive) solution at a small radius:
/// y = r^{nu + 1/2}, y' = (nu + 1/2) r^{nu - 1/2}.
pub fn regular_launch(p: &RadialParams, r: f64) -> (f64, f64) {
    let s = p.nu() + 0.5;
    (r.powf(s), s * r.powf(s - 1.0))
}

/// Integrate -y'' + (c/r^2) y = E y across `(r_range.0, r_range.1)`,
/// applying the delta jump at every interior circle. The pair is jointly
/// renormalized at circles to keep exponentially growing solutions in
/// range; `log_scale` tracks the factored-out magnitude.
pub fn integrate_radial(
    p: &RadialParams,
    e: f64,
    r_range: (f64, f64),
    y0: (f64, f64),
    rtol: f64,
) -> Result<RadialSolution> {
    let (r0, r1) = r_range;
    if !(r0 > 0.0) {
        return Err(Error::Singularity(format!(
            "integration must start at r > 0, got {r0}"
        )));
    }
    if !(r1 > r0) || !r1.is_finite() {
        return Err(Error::InvalidInput(format!("bad radial range ({r0}, {r1})")));
    }
    if !(1e-14..=1e-2).contains(&rtol) {
        return Err(Error::InvalidInput(format!("rtol = {rtol} out of range")));
    }
    if !e.is_finite() || y0.0 == 0.0 && y0.1 == 0.0 {
        return Err(Error::InvalidInput("need finite E and nontrivial data".into()));
    }

    let c = p.c();
    let rhs = move |r: f64, y: &[f64; 2]| [y[1], (c / (r * r) - e) * y[0]];
    let ctl = StepControl { rtol, max_step: p.lattice.d / 8.0, max_steps: 40_000_000 };

    let mut samples = Vec::new();
    let mut log_scale = 0.0;
    let mut state = [y0.0, y0.1];
    samples.push(Sample { r: r0, y: state[0], yp_in: state[1], yp_out: state[1], log_scale });

    let mut segments = p.lattice.circles_in(r0, r1);
    segments.push(r1);
    let mut left = r0;
    for (i, &right) in segments.iter().enumerate() {
        // every segment boundary except r1 itself is a circle; a circle
        // sitting exactly at r1 lies outside the half-open span, no jump
        let at_circle = i + 1 < segments.len();
        state = ode::dp54(rhs, left, right, state, &ctl, |r, y| {
            if r < right {
                samples.push(Sample { r, y: y[0], yp_in: y[1], yp_out: y[1], log_scale });
            }
        })?;
        if !state[0].is_finite() || !state[1].is_finite() {
            return Err(Error::IntegrationFailure(format!(
                "solution left f64 range near r = {right}"
            )));
        }
        let yp_out = if at_circle { state[1] + p.lattice.beta * state[0] } else { state[1] };
        samples.push(Sample { r: right, y: state[0], yp_in: state[1], yp_out, log_scale });
        state[1] = yp_out;
        // joint renormalization keeps the represented function continuous
        let mag = state[0].abs().max(state[1].abs());
        if mag > 1e100 || (mag > 0.0 && mag < 1e-100) {
            state[0] /= mag;
            state[1] /= mag;
            log_scale += mag.ln();
        }
        left = right;
    }
    Ok(RadialSolution { e, samples })
}

/// Phase conventions carried by a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseKind {
    /// theta = atan2(y', y), lifted; jumps by less than pi at circles.
    Raw,
    /// gamma from the (u, v) frame; continuous across circles.
    Generalized,
    /// phi with tan(phi) = y / (r u P); continuous across circles.
    Kepler,
    /// running cell average of another trajectory.
    Averaged,
}

/// A lifted (continuous-branch) phase along the radius.
#[derive(Debug, Clone)]
pub struct PhaseTrajectory {
    pub kind: PhaseKind,
    pub points: Vec<(f64, f64)>,
}

fn wrap_angle(x: f64) -> f64 {
    use std::f64::consts::PI;
    let w = x - 2.0 * PI * (x / (2.0 * PI)).round();
    if w <= -PI {
        w + 2.0 * PI
    } else if w > PI {
        w - 2.0 * PI
    } else {
        w
    }
}

impl PhaseTrajectory {
    pub fn first(&self) -> (f64, f64) {
        *self.points.first().expect("nonempty")
    }

    pub fn last(&self) -> (f64, f64) {
        *self.points.last().expect("nonempty")
    }

    /// Total phase wound over the whole trajectory.
    pub fn wound(&self) -> f64 {
        self.last().1 - self.first().1
    }

    /// Extreme phases reached: (min, max).
    pub fn window(&self) -> (f64, f64) {
        self.points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, a)| {
            (lo.min(a), hi.max(a))
        })
    }

    /// Linear interpolation of the lifted phase at radius `r`.
    pub fn at(&self, r: f64) -> f64 {
        let pts = &self.points;
        let i = pts.partition_point(|&(pr, _)| pr < r);
        if i == 0 {
            return pts[0].1;
        }
        if i == pts.len() {
            return pts[pts.len() - 1].1;
        }
        let (r0, a0) = pts[i - 1];
        let (r1, a1) = pts[i];
        if r1 == r0 {
            a1
        } else {
            a0 + (a1 - a0) * (r - r0) / (r1 - r0)
        }
    }

    /// Phase wound between two radii (interpolated endpoints).
    pub fn wound_between(&self, lo: f64, hi: f64) -> f64 {
        self.at(hi) - self.at(lo)
    }

    /// Crossings of pi/2 mod pi, the zero set of y in phase language.
    /// Counts both directions; valid because every stored increment stays
    /// below pi in magnitude.
    pub fn crossing_count(&self) -> usize {
        use std::f64::consts::{FRAC_PI_2, PI};
        let level = |a: f64| ((a - FRAC_PI_2) / PI).floor() as i64;
        let mut count = 0usize;
        let mut prev = level(self.first().1);
        for &(_, a) in &self.points[1..] {
            let k = level(a);
            count += k.abs_diff(prev) as usize;
            prev = k;
        }
        count
    }
}

/// Lifted raw phase theta = atan2(y', y) along a solution. At a circle the
/// stored pair produces two points at the same radius, the delta kick
/// rotating (y, y') within one half-plane (|increment| < pi, never through
/// a zero of y).
pub fn prufer_trajectory(sol: &RadialSolution) -> PhaseTrajectory {
    let mut points: Vec<(f64, f64)> = Vec::with_capacity(sol.samples.len() + 8);
    let mut lifted = 0.0;
    let mut prev_angle = 0.0;
    for (i, s) in sol.samples.iter().enumerate() {
        let a_in = f64::atan2(s.yp_in, s.y);
        if i == 0 {
            lifted = a_in;
        } else {
            lifted += wrap_angle(a_in - prev_angle);
        }
        points.push((s.r, lifted));
        prev_angle = a_in;
        if s.yp_out != s.yp_in {
            let a_out = f64::atan2(s.yp_out, s.y);
            lifted += wrap_angle(a_out - a_in);
            points.push((s.r, lifted));
            prev_angle = a_out;
        }
    }
    PhaseTrajectory { kind: PhaseKind::Raw, points }
}

/// Second solution v = u(r) int_{r0}^r u^{-2}, the canonical Wronskian
/// partner of the band-edge profile: W[u, v] = u v' - u' v = 1 identically.
#[derive(Debug, Clone, Copy)]
pub struct SecondSolution {
    u: PeriodicSolution,
    r0: f64,
    i0: f64,
    per: f64,
}

/// Build the partner from the profile and a base radius `r0 >= 0` where
/// v(r0) = 0.
pub fn second_solution(u: &PeriodicSolution, r0: f64) -> Result<SecondSolution> {
    if !(r0 >= 0.0) || !r0.is_finite() {
        return Err(Error::InvalidInput(format!("base radius r0 = {r0}")));
    }
    let per = u.inv_square_period();
    let mut v = SecondSolution { u: *u, r0, i0: 0.0, per };
    v.i0 = v.accumulated(r0);
    Ok(v)
}

impl SecondSolution {
    /// int_0^r u^{-2}, assembled cell by cell from closed forms.
    fn accumulated(&self, r: f64) -> f64 {
        let d = self.u.params().d;
        let n = (r / d).floor();
        let x = (r - n * d).clamp(0.0, d);
        n * self.per + self.u.inv_square_integral(x)
    }

    pub fn value(&self, r: f64) -> f64 {
        self.u.value(r) * (self.accumulated(r) - self.i0)
    }

    /// One-sided derivative; v inherits the delta jump through u.
    pub fn deriv(&self, r: f64, side: Side) -> f64 {
        self.u.deriv(r, side) * (self.accumulated(r) - self.i0) + 1.0 / self.u.value(r)
    }

    pub fn base(&self) -> f64 {
        self.r0
    }
}

/// The two auxiliary phases built on the (u, v) frame.
pub struct KeplerPhases {
    pub gamma: PhaseTrajectory,
    pub phi: PhaseTrajectory,
}

/// Frame phases along a solution: gamma = atan2(Q, P) and
/// phi = atan2(y, r u P), with P = u'y - u y' and Q = v'y - v y'.
/// P and Q are continuous across circles (u, v, y share one jump), so both
/// phases lift without circle kinks, unlike the raw theta.
pub fn kepler_phase(
    sol: &RadialSolution,
    u: &PeriodicSolution,
    v: &SecondSolution,
) -> Result<KeplerPhases> {
    let mut gamma_pts = Vec::with_capacity(sol.samples.len());
    let mut phi_pts = Vec::with_capacity(sol.samples.len());
    let (mut gamma, mut phi) = (0.0, 0.0);
    let (mut prev_g, mut prev_f) = (0.0, 0.0);
    for (i, s) in sol.samples.iter().enumerate() {
        // outgoing side; the incoming side gives the same P and Q
        let uu = u.value(s.r);
        let up = u.deriv(s.r, Side::Above);
        let vv = v.value(s.r);
        let vp = v.deriv(s.r, Side::Above);
        let p = up * s.y - uu * s.yp_out;
        let q = vp * s.y - vv * s.yp_out;
        let g = f64::atan2(q, p);
        let f = f64::atan2(s.y, s.r * uu * p);
        if i == 0 {
            gamma = g;
            phi = f;
        } else {
            gamma += wrap_angle(g - prev_g);
            phi += wrap_angle(f - prev_f);
        }
        gamma_pts.push((s.r, gamma));
        phi_pts.push((s.r, phi));
        prev_g = g;
        prev_f = f;
    }
    Ok(KeplerPhases {
        gamma: PhaseTrajectory { kind: PhaseKind::Generalized, points: gamma_pts },
        phi: PhaseTrajectory { kind: PhaseKind::Kepler, points: phi_pts },
    })
}

/// Running average of a phase over one lattice cell:
/// avg(r) = (1/d) int_r^{r+d} phase. Defined for points with r + d inside
/// the trajectory.
pub fn averaged_phase(traj: &PhaseTrajectory, d: f64) -> PhaseTrajectory {
    let pts = &traj.points;
    // prefix trapezoid integral over the sampled polyline
    let mut prefix = Vec::with_capacity(pts.len());
    let mut acc = 0.0;
    prefix.push(0.0);
    for w in pts.windows(2) {
        acc += 0.5 * (w[1].1 + w[0].1) * (w[1].0 - w[0].0);
        prefix.push(acc);
    }
    let integral_to = |r: f64| -> f64 {
        let i = pts.partition_point(|&(pr, _)| pr < r);
        if i == 0 {
            return 0.0;
        }
        if i == pts.len() {
            return prefix[pts.len() - 1];
        }
        let (r0, a0) = pts[i - 1];
        let (r1, a1) = pts[i];
        let a = if r1 == r0 { a1 } else { a0 + (a1 - a0) * (r - r0) / (r1 - r0) };
        prefix[i - 1] + 0.5 * (a + a0) * (r - r0)
    };
    let r_last = pts.last().map(|&(r, _)| r).unwrap_or(0.0);
    let mut out = Vec::new();
    for &(r, _) in pts.iter() {
        if r + d > r_last {
            break;
        }
        out.push((r, (integral_to(r + d) - integral_to(r)) / d));
    }
    PhaseTrajectory { kind: PhaseKind::Averaged, points: out }
}

/// Cell averages of the phase-equation coefficients at threshold energy:
/// A = -<u^{-2}>, B = c <u^2>. Their product controls winding:
/// 4AB = c / c_crit when the critical value exists.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AveragedCoefficients {
    pub a: f64,
    pub b: f64,
    pub four_ab: f64,
    /// c / c_crit; equals four_ab up to numerics, kept as a cross-check.
    pub ratio: f64,
}

/// Compute the averaged coefficients for one channel. Always evaluates the
/// cell averages by quadrature, so comparing `four_ab` with `ratio`
/// (closed-form on the attractive branch) cross-checks two routes.
pub fn coefficient_averages(p: &RadialParams) -> Result<AveragedCoefficients> {
    let c = p.c();
    let th = lattice::solve_threshold(&p.lattice)?;
    let u = lattice::periodic_solution(&p.lattice, &th);
    let (d1, d2) = lattice::mean_squares(&u, QuadratureMode::Quadrature)?;
    let a = -d2;
    let b = c * d1;
    // + 0.0 turns a negative zero (c = 0 channels) into plain zero
    let four_ab = 4.0 * a * b + 0.0;
    let ratio = match th.branch {
        Branch::Free => four_ab,
        _ => {
            if c == 0.0 {
                0.0
            } else {
                c / lattice::critical_coupling(&p.lattice)?.c_crit
            }
        }
    };
    Ok(AveragedCoefficients { a, b, four_ab, ratio })
}

/// Outcome of the accumulation dichotomy below the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    /// Infinitely many eigenvalues accumulating at E0 from below.
    InfiniteAccumulating,
    /// At most finitely many eigenvalues below E0.
    AtMostFinite,
}

/// Classification plus the numbers that decided it.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ClassifyResult {
    pub classification: Classification,
    pub c: f64,
    pub four_ab: f64,
    /// Critical flux of the lattice; absent for the free lattice.
    pub alpha_crit: Option<f64>,
}

/// Decide the dichotomy for flux `alpha` in (0, 1/2] in the decisive l = 0
/// channel: infinite accumulation iff 4AB > 1, equivalently alpha below the
/// lattice's critical flux. Both routes are computed and must agree.
pub fn classify_discrete_spectrum(alpha: f64, lat: &LatticeParams) -> Result<ClassifyResult> {
    if !alpha.is_finite() || alpha <= 0.0 || alpha >= 1.0 {
        return Err(Error::InvalidInput(format!(
            "flux alpha = {alpha}, need 0 < alpha <= 1/2"
        )));
    }
    if alpha > 0.5 {
        return Err(Error::ReduceBySymmetry { alpha, reduced: 1.0 - alpha });
    }
    let p = RadialParams::new(*lat, alpha, 0)?;
    let avg = coefficient_averages(&p)?;
    let by_product = avg.four_ab > 1.0;
    let (alpha_crit, by_flux) = match lat.branch() {
        Branch::Free => (None, false),
        _ => {
            let crit = lattice::critical_coupling(lat)?;
            (Some(crit.alpha_crit), alpha < crit.alpha_crit)
        }
    };
    if by_product != by_flux {
        return Err(Error::CrossCheck(format!(
            "4AB = {} vs alpha_crit = {alpha_crit:?} disagree at alpha = {alpha}",
            avg.four_ab
        )));
    }
    Ok(ClassifyResult {
        classification: if by_product {
            Classification::InfiniteAccumulating
        } else {
            Classification::AtMostFinite
        },
        c: p.c(),
        four_ab: avg.four_ab,
        alpha_crit,
    })
}

/// Growth fingerprint at one truncation radius.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GrowthEntry {
    pub r_max: f64,
    /// Raw phase wound from the launch radius.
    pub wound_phase: f64,
    /// Phase change across the last e-fold of radius.
    pub phase_slope: f64,
    /// Envelope log-gain across the last e-fold: ~1/2 at the borderline,
    /// large in a spectral gap, ~1/2 with winding when supercritical.
    pub amp_log_slope: f64,
    pub zero_count: usize,
}

/// Growth summary along increasing truncation radii.
#[derive(Debug, Clone, Serialize)]
pub struct GrowthReport {
    pub e: f64,
    pub entries: Vec<GrowthEntry>,
}

/// Integrate once from r = 1e-3 d with the regular launch and summarize
/// winding and envelope growth at each requested radius.
pub fn phase_growth(p: &RadialParams, e: f64, r_maxes: &[f64]) -> Result<GrowthReport> {
    if r_maxes.is_empty() {
        return Err(Error::InvalidInput("no truncation radii".into()));
    }
    let r_start = 1e-3 * p.lattice.d;
    let mut sorted = r_maxes.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite radii"));
    if sorted[0] <= r_start * 10.0 {
        return Err(Error::InvalidInput(format!(
            "truncation radius {} too close to the launch radius {r_start}",
            sorted[0]
        )));
    }
    let r_end = *sorted.last().expect("nonempty");
    let y0 = regular_launch(p, r_start);
    let sol = integrate_radial(p, e, (r_start, r_end), y0, 1e-10)?;
    let theta = prufer_trajectory(&sol);
    let e1 = std::f64::consts::E;
    let entries = sorted
        .iter()
        .map(|&r_max| {
            let zero_count = sol
                .samples
                .iter()
                .take_while(|s| s.r <= r_max)
                .fold((0usize, Option::<f64>::None), |(n, prev), s| {
                    if s.y == 0.0 {
                        (n + 1, None)
                    } else if let Some(py) = prev {
                        (n + usize::from(py.signum() != s.y.signum()), Some(s.y))
                    } else {
                        (n, Some(s.y))
                    }
                })
                .0;
            GrowthEntry {
                r_max,
                wound_phase: theta.wound_between(r_start, r_max),
                phase_slope: theta.wound_between(r_max / e1, r_max),
                amp_log_slope: sol.log_envelope(r_max / e1, r_max)
                    - sol.log_envelope(r_max / (e1 * e1), r_max / e1),
                zero_count,
            }
        })
        .collect();
    Ok(GrowthReport { e, entries })
}

/// Convenience: threshold data for the lattice of `p`.
pub fn threshold_of(p: &RadialParams) -> Result<ThresholdData> {
    lattice::solve_threshold(&p.lattice)
}
