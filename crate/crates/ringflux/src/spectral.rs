//! Spectra of one angular channel truncated to [r_min, r_max]: oscillation
//! counts by shooting, eigenvalues below the lattice threshold located by
//! bisection on the count, an independent finite-difference route through
//! a Sturm-sequence tridiagonal solver, and the shifted quadratic form for
//! variational bounds.

use crate::error::{Error, Result};
use crate::lattice::{self, LatticeParams};
use crate::numerics::tridiag;
use crate::radial::{integrate_radial, regular_launch, RadialParams, RadialSolution};
use serde::Serialize;

/// Truncation interval. The inner boundary carries the regular power-law
/// launch (y ~ r^{nu + 1/2}), the outer one a Dirichlet condition. Valid
/// when 0 < r_min < d/2 < r_max; r_max may fall on a circle (the circle at
/// the end then contributes no jump).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TruncatedDomain {
    pub r_min: f64,
    pub r_max: f64,
}

impl TruncatedDomain {
    pub fn new(r_min: f64, r_max: f64) -> Result<Self> {
        if !(r_min > 0.0 && r_max > r_min && r_max.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "truncation [{r_min}, {r_max}] must satisfy 0 < r_min < r_max < inf"
            )));
        }
        Ok(TruncatedDomain { r_min, r_max })
    }

    /// Check the interval against a lattice: it must straddle the first circle.
    pub fn validate(&self, lat: &LatticeParams) -> Result<()> {
        let first = 0.5 * lat.d;
        if !(self.r_min < first && first < self.r_max) {
            return Err(Error::InvalidInput(format!(
                "truncation [{}, {}] must straddle the first circle at {first}",
                self.r_min, self.r_max
            )));
        }
        Ok(())
    }
}

/// Which solver produced a spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Shooting,
    FdOracle,
}

/// Eigenvalues on a truncated domain, ascending.
#[derive(Debug, Clone, Serialize)]
pub struct EigenResult {
    pub method: Method,
    pub domain: TruncatedDomain,
    pub count: usize,
    pub eigenvalues: Vec<f64>,
    /// Final bisection bracket width per eigenvalue: the energy uncertainty.
    pub widths: Vec<f64>,
}

/// Interior zeros of the regular solution at energy `e`, equal to the
/// number of Dirichlet eigenvalues below `e` by oscillation theory.
pub fn oscillation_count(p: &RadialParams, e: f64, dom: &TruncatedDomain) -> Result<usize> {
    dom.validate(&p.lattice)?;
    let y0 = regular_launch(p, dom.r_min);
    let sol = integrate_radial(p, e, (dom.r_min, dom.r_max), y0, 1e-10)?;
    Ok(sol.zero_count())
}

/// Dirichlet eigenvalues inside `window = (lo, hi)` with `hi` at or below
/// the lattice threshold E0, each bracketed to width `tol` by bisection on
/// the oscillation count.
pub fn find_eigenvalues(
    p: &RadialParams,
    dom: &TruncatedDomain,
    window: (f64, f64),
    tol: f64,
) -> Result<EigenResult> {
    dom.validate(&p.lattice)?;
    let (lo, hi) = window;
    if !(lo < hi) || !lo.is_finite() {
        return Err(Error::InvalidWindow(format!("empty window ({lo}, {hi})")));
    }
    let e0 = lattice::solve_threshold(&p.lattice)?.e0;
    if hi > e0 {
        return Err(Error::InvalidWindow(format!(
            "window top {hi} reaches above the lattice threshold E0 = {e0}"
        )));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidInput(format!("bisection tolerance {tol}")));
    }

    let count = |e: f64| oscillation_count(p, e, dom);
    let mut found: Vec<(f64, f64)> = Vec::new();
    let mut stack = vec![(lo, count(lo)?, hi, count(hi)?)];
    while let Some((a, na, b, nb)) = stack.pop() {
        if nb == na {
            continue;
        }
        let width_floor = 8.0 * f64::EPSILON * a.abs().max(b.abs()).max(1.0);
        if b - a <= tol.max(width_floor) {
            // nb - na > 1 inside one bracket means numerically degenerate
            for _ in 0..(nb - na) {
                found.push((0.5 * (a + b), b - a));
            }
            continue;
        }
        let mid = 0.5 * (a + b);
        let nm = count(mid)?;
        stack.push((a, na, mid, nm));
        stack.push((mid, nm, b, nb));
    }
    found.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite eigenvalues"));
    let (eigenvalues, widths): (Vec<f64>, Vec<f64>) = found.into_iter().unzip();
    Ok(EigenResult {
        method: Method::Shooting,
        domain: *dom,
        count: eigenvalues.len(),
        eigenvalues,
        widths,
    })
}

/// Uniform-grid second-difference matrix for one channel, deltas snapped to
/// the nearest interior node as beta/h diagonal loads.
#[derive(Debug, Clone)]
pub struct FdGrid {
    pub n: usize,
    pub h: f64,
    pub r_min: f64,
    pub diag: Vec<f64>,
    pub off: f64,
    /// (circle radius, snapped interior node index, 0-based)
    pub snapped: Vec<(f64, usize)>,
}

impl FdGrid {
    /// Radius of interior node `i` (0-based).
    pub fn node_radius(&self, i: usize) -> f64 {
        self.r_min + (i + 1) as f64 * self.h
    }
}

/// Assemble the finite-difference matrix on `n >= 100` interior nodes.
pub fn fd_grid(p: &RadialParams, dom: &TruncatedDomain, n: usize) -> Result<FdGrid> {
    dom.validate(&p.lattice)?;
    if n < 100 {
        return Err(Error::InvalidInput(format!("grid too coarse: n = {n} < 100")));
    }
    let h = (dom.r_max - dom.r_min) / (n + 1) as f64;
    let c = p.c();
    let mut diag: Vec<f64> = (1..=n)
        .map(|i| {
            let r = dom.r_min + i as f64 * h;
            2.0 / (h * h) + c / (r * r)
        })
        .collect();
    let mut snapped = Vec::new();
    for circle in p.lattice.circles_in(dom.r_min, dom.r_max) {
        let j = ((circle - dom.r_min) / h).round() as usize;
        let j = j.clamp(1, n) - 1;
        diag[j] += p.lattice.beta / h;
        snapped.push((circle, j));
    }
    Ok(FdGrid { n, h, r_min: dom.r_min, diag, off: -1.0 / (h * h), snapped })
}

/// Eigenvalues of the grid operator strictly below `e`.
pub fn fd_count_below(grid: &FdGrid, e: f64) -> usize {
    tridiag::count_below(&grid.diag, grid.off, e)
}

/// Lowest `k` grid eigenvalues by Sturm bisection, each to width `tol`.
pub fn fd_spectrum(
    p: &RadialParams,
    dom: &TruncatedDomain,
    n: usize,
    k: usize,
    tol: f64,
) -> Result<EigenResult> {
    if k == 0 || k > n {
        return Err(Error::InvalidInput(format!("need 0 < k <= n, got k = {k}")));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidInput(format!("bisection tolerance {tol}")));
    }
    let grid = fd_grid(p, dom, n)?;
    let eigenvalues = tridiag::lowest_eigenvalues(&grid.diag, grid.off, k, tol);
    let widths = vec![tol; eigenvalues.len()];
    Ok(EigenResult {
        method: Method::FdOracle,
        domain: *dom,
        count: eigenvalues.len(),
        eigenvalues,
        widths,
    })
}

/// Ground eigenvector of the grid operator (unit sup norm), for use as an
/// interpolated trial function.
pub fn fd_ground_vector(grid: &FdGrid, tol: f64) -> (f64, Vec<f64>) {
    let lambda = tridiag::lowest_eigenvalues(&grid.diag, grid.off, 1, tol)[0];
    (lambda, tridiag::eigenvector(&grid.diag, grid.off, lambda))
}

/// Shifted quadratic form of one channel on a piecewise-linear trial
/// function with nodes `(rs, fs)`:
///   q[f] = int f'^2 + int (c/r^2) f^2 + beta sum_n f(r_n)^2 - E0 int f^2,
/// exact for the polyline. Negative values certify an eigenvalue below the
/// lattice threshold E0.
pub fn quadratic_form(p: &RadialParams, rs: &[f64], fs: &[f64]) -> Result<f64> {
    if rs.len() != fs.len() || rs.len() < 2 {
        return Err(Error::InvalidInput("need matching node/value lists, len >= 2".into()));
    }
    if !(rs[0] > 0.0) {
        return Err(Error::Singularity(format!("trial support starts at r = {}", rs[0])));
    }
    if rs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput("radii must increase strictly".into()));
    }
    let fmax = fs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if fmax == 0.0 {
        return Err(Error::InvalidInput("trial function vanishes identically".into()));
    }
    let edge = 1e-12 * fmax;
    if fs[0].abs() > edge || fs[fs.len() - 1].abs() > edge {
        return Err(Error::BoundaryViolation(format!(
            "trial function must vanish at both ends, got {} and {}",
            fs[0],
            fs[fs.len() - 1]
        )));
    }

    let e0 = lattice::solve_threshold(&p.lattice)?.e0;
    let c = p.c();
    let mut q = 0.0;
    let mut norm_sq = 0.0;
    for i in 1..rs.len() {
        let (r0, r1) = (rs[i - 1], rs[i]);
        let (f0, f1) = (fs[i - 1], fs[i]);
        let dr = r1 - r0;
        let slope = (f1 - f0) / dr;
        q += slope * slope * dr;
        // f(r) = a + b r on the segment
        let b = slope;
        let a = f0 - b * r0;
        // int (a + b r)^2 dr
        let cube = |r: f64| {
            let f = a + b * r;
            f * f * f
        };
        norm_sq += if b == 0.0 { a * a * dr } else { (cube(r1) - cube(r0)) / (3.0 * b) };
        // int (a + b r)^2 / r^2 dr = -a^2/r + 2 a b ln r + b^2 r
        let inv = |r: f64| -a * a / r + 2.0 * a * b * r.ln() + b * b * r;
        q += c * (inv(r1) - inv(r0));
    }
    let interp = |r: f64| {
        let i = rs.partition_point(|&x| x < r);
        if i == 0 || i == rs.len() {
            0.0
        } else {
            let w = (r - rs[i - 1]) / (rs[i] - rs[i - 1]);
            fs[i - 1] + w * (fs[i] - fs[i - 1])
        }
    };
    for circle in p.lattice.circles_in(rs[0], rs[rs.len() - 1]) {
        let f = interp(circle);
        q += p.lattice.beta * f * f;
    }
    Ok(q - e0 * norm_sq)
}

/// One channel of an assembled spectrum.
#[derive(Debug, Clone, Serialize)]
pub struct ChannelSpectrum {
    pub l: i32,
    pub c: f64,
    pub result: EigenResult,
}

/// Spectra of several angular channels in a common window below E0.
/// Channels with c >= 0 are verified empty (their form lies above the
/// threshold) instead of being bisected.
pub fn assemble_spectrum(
    alpha: f64,
    lat: &LatticeParams,
    ls: &[i32],
    dom: &TruncatedDomain,
    window: (f64, f64),
    tol: f64,
) -> Result<Vec<ChannelSpectrum>> {
    let mut ls = ls.to_vec();
    ls.sort_unstable();
    ls.dedup();
    let mut out = Vec::with_capacity(ls.len());
    for l in ls {
        let p = RadialParams::new(*lat, alpha, l)?;
        let result = if p.c() >= 0.0 {
            let below =
                oscillation_count(&p, window.1, dom)? - oscillation_count(&p, window.0, dom)?;
            if below != 0 {
                return Err(Error::CrossCheck(format!(
                    "channel l = {l} has c = {} >= 0 but {below} states in the window",
                    p.c()
                )));
            }
            EigenResult {
                method: Method::Shooting,
                domain: *dom,
                count: 0,
                eigenvalues: Vec::new(),
                widths: Vec::new(),
            }
        } else {
            find_eigenvalues(&p, dom, window, tol)?
        };
        out.push(ChannelSpectrum { l, c: p.c(), result });
    }
    Ok(out)
}

/// Snapshot of the regular solution across the domain, for inspection.
pub fn sample_solution(
    p: &RadialParams,
    e: f64,
    dom: &TruncatedDomain,
) -> Result<RadialSolution> {
    dom.validate(&p.lattice)?;
    let y0 = regular_launch(p, dom.r_min);
    integrate_radial(p, e, (dom.r_min, dom.r_max), y0, 1e-10)
}
