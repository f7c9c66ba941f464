//! Command-line front end: four subcommands covering the threshold solver,
//! the critical-flux sweep, the dichotomy classifier, and the truncated
//! eigenvalue solver. Payloads are deterministic JSON (default) or CSV.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{
    kp_discriminant_minus_one, solve_threshold, sweep_alpha_crit, Branch, LatticeParams,
};
use crate::radial::{classify_discrete_spectrum, phase_growth, Classification, GrowthEntry,
    RadialParams};
use crate::spectral::{
    fd_count_below, fd_grid, find_eigenvalues, oscillation_count, Method, TruncatedDomain,
};

#[derive(Parser)]
#[command(
    name = "ringflux",
    version,
    about = "Threshold, phase, and spectral tools for a flux line dressed by concentric delta rings"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Lowest spectral edge of the ring lattice
    Threshold(ThresholdArgs),
    /// Critical flux of the lattice, single strength or a sweep
    Critical(CriticalArgs),
    /// Infinite-vs-finite classification of one flux value
    Classify(ClassifyArgs),
    /// Eigenvalues below the threshold on a truncated domain
    Eigen(EigenArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the payload to a file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ThresholdArgs {
    /// Delta strength
    #[arg(long, allow_hyphen_values = true)]
    beta: f64,
    /// Ring spacing
    #[arg(long, default_value_t = 1.0)]
    d: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
#[command(group(
    clap::ArgGroup::new("strength").required(true).args(["beta", "beta_range"])
))]
struct CriticalArgs {
    /// Single delta strength
    #[arg(long, allow_hyphen_values = true, conflicts_with = "points")]
    beta: Option<f64>,
    /// Sweep specification lo:hi:lin or lo:hi:log
    #[arg(long, allow_hyphen_values = true, requires = "points")]
    beta_range: Option<String>,
    /// Number of sweep points (at least 2)
    #[arg(long)]
    points: Option<usize>,
    /// Ring spacing
    #[arg(long, default_value_t = 1.0)]
    d: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Flux through the origin, in (0, 1/2]
    #[arg(long)]
    alpha: f64,
    /// Delta strength
    #[arg(long, allow_hyphen_values = true)]
    beta: f64,
    /// Ring spacing
    #[arg(long, default_value_t = 1.0)]
    d: f64,
    /// Truncation radii for growth diagnostics at the threshold energy
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    r_max: Vec<f64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct EigenArgs {
    /// Flux through the origin, in [0, 1)
    #[arg(long)]
    alpha: f64,
    /// Delta strength
    #[arg(long, allow_hyphen_values = true)]
    beta: f64,
    /// Ring spacing
    #[arg(long, default_value_t = 1.0)]
    d: f64,
    /// Angular channel
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    l: i32,
    /// Inner truncation radius
    #[arg(long, default_value_t = 1e-3)]
    r_min: f64,
    /// Outer truncation radius
    #[arg(long, default_value_t = 60.0)]
    r_max: f64,
    /// Energy window lo:hi (default: the unit below the threshold)
    #[arg(long, allow_hyphen_values = true)]
    e_window: Option<String>,
    /// Bisection tolerance in energy
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Cross-check counts and values against the finite-difference oracle
    #[arg(long)]
    oracle: bool,
    /// Oracle grid size
    #[arg(long, default_value_t = 60_000)]
    grid_n: usize,
    #[command(flatten)]
    out: OutputArgs,
}

/// Parse argv, run, write output; returns the process exit code.
/// Usage errors are handled by the parser itself (it exits with code 2).
pub fn run() -> i32 {
    let cli = Cli::parse();
    let (payload, out) = match dispatch(cli.cmd) {
        Ok(pair) => pair,
        Err(err) => {
            eprintln!("error: {err}");
            return exit_code(&err);
        }
    };
    match write_payload(&payload, &out) {
        Ok(()) => 0,
        Err(msg) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidInput(_)
        | Error::InvalidWindow(_)
        | Error::ReduceBySymmetry { .. }
        | Error::Singularity(_)
        | Error::BoundaryViolation(_)
        | Error::UndefinedCriticalValue(_) => 2,
        _ => 1,
    }
}

fn dispatch(cmd: Cmd) -> Result<(String, OutputArgs)> {
    match cmd {
        Cmd::Threshold(a) => {
            let payload = cmd_threshold(&a)?;
            Ok((payload, a.out))
        }
        Cmd::Critical(a) => {
            let payload = cmd_critical(&a)?;
            Ok((payload, a.out))
        }
        Cmd::Classify(a) => {
            let payload = cmd_classify(&a)?;
            Ok((payload, a.out))
        }
        Cmd::Eigen(a) => {
            let payload = cmd_eigen(&a)?;
            Ok((payload, a.out))
        }
    }
}

fn write_payload(payload: &str, out: &OutputArgs) -> std::result::Result<(), String> {
    match &out.output {
        Some(path) => std::fs::write(path, payload)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{payload}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable payload");
    s.push('\n');
    s
}

/// Minimal CSV field quoting: wrap and double quotes only when needed.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

// ---- threshold ----

#[derive(Serialize)]
struct ThresholdReport {
    beta: f64,
    d: f64,
    e0: f64,
    branch: Branch,
    rate: f64,
    discriminant_residual: f64,
}

fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::Attractive => "attractive",
        Branch::Free => "free",
        Branch::Repulsive => "repulsive",
    }
}

fn cmd_threshold(a: &ThresholdArgs) -> Result<String> {
    let p = LatticeParams::new(a.d, a.beta)?;
    let th = solve_threshold(&p)?;
    let report = ThresholdReport {
        beta: a.beta,
        d: a.d,
        e0: th.e0,
        branch: th.branch,
        rate: th.rate,
        discriminant_residual: kp_discriminant_minus_one(&p, th.e0).abs(),
    };
    Ok(match a.out.format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut s = String::from("beta,d,e0,branch,rate,discriminant_residual\n");
            let _ = writeln!(
                s,
                "{},{},{},{},{},{}",
                report.beta,
                report.d,
                report.e0,
                branch_name(report.branch),
                report.rate,
                report.discriminant_residual
            );
            s
        }
    })
}

// ---- critical ----

#[derive(Serialize)]
struct CriticalRow {
    beta: f64,
    e0: f64,
    d1: Option<f64>,
    d2: Option<f64>,
    c_crit: Option<f64>,
    alpha_crit: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

fn parse_range(spec: &str, points: usize) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [lo, hi, spacing] = parts.as_slice() else {
        return Err(Error::InvalidInput(format!(
            "range `{spec}` must look like lo:hi:lin or lo:hi:log"
        )));
    };
    let lo: f64 = lo
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad range endpoint `{lo}`")))?;
    let hi: f64 = hi
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad range endpoint `{hi}`")))?;
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::InvalidInput("range endpoints must be finite".into()));
    }
    if points < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 points, got {points}")));
    }
    let n = (points - 1) as f64;
    match *spacing {
        "lin" => Ok((0..points).map(|i| lo + (hi - lo) * i as f64 / n).collect()),
        "log" => {
            if lo == 0.0 || hi == 0.0 || lo.signum() != hi.signum() {
                return Err(Error::InvalidInput(
                    "log spacing needs endpoints of one sign, away from zero".into(),
                ));
            }
            let (la, lb) = (lo.abs().ln(), hi.abs().ln());
            Ok((0..points)
                .map(|i| lo.signum() * (la + (lb - la) * i as f64 / n).exp())
                .collect())
        }
        other => Err(Error::InvalidInput(format!(
            "unknown spacing `{other}`, expected lin or log"
        ))),
    }
}

fn cmd_critical(a: &CriticalArgs) -> Result<String> {
    let betas = match (&a.beta, &a.beta_range) {
        (Some(b), None) => vec![*b],
        (None, Some(spec)) => parse_range(spec, a.points.unwrap_or(0))?,
        _ => unreachable!("clap group enforces exactly one"),
    };
    let entries = sweep_alpha_crit(&betas, a.d)?;
    let mut rows = Vec::with_capacity(entries.len());
    for entry in entries {
        let row = match entry.row {
            Ok(r) => CriticalRow {
                beta: entry.beta,
                e0: r.e0,
                d1: Some(r.d1),
                d2: Some(r.d2),
                c_crit: Some(r.c_crit),
                alpha_crit: Some(r.alpha_crit),
                note: None,
            },
            Err(Error::UndefinedCriticalValue(msg)) => CriticalRow {
                beta: entry.beta,
                e0: solve_threshold(&LatticeParams::new(a.d, entry.beta)?)?.e0,
                d1: None,
                d2: None,
                c_crit: None,
                alpha_crit: None,
                note: Some(msg),
            },
            Err(other) => return Err(other),
        };
        rows.push(row);
    }
    Ok(match a.out.format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut s = String::from("beta,e0,d1,d2,c_crit,alpha_crit,note\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{}",
                    r.beta,
                    r.e0,
                    csv_opt(r.d1),
                    csv_opt(r.d2),
                    csv_opt(r.c_crit),
                    csv_opt(r.alpha_crit),
                    csv_field(r.note.as_deref().unwrap_or(""))
                );
            }
            s
        }
    })
}

// ---- classify ----

#[derive(Serialize)]
struct ClassifyReport {
    alpha: f64,
    beta: f64,
    d: f64,
    classification: Classification,
    c: f64,
    four_ab: f64,
    alpha_crit: Option<f64>,
    e0: f64,
    growth: Vec<GrowthEntry>,
}

fn classification_name(c: Classification) -> &'static str {
    match c {
        Classification::InfiniteAccumulating => "infinite_accumulating",
        Classification::AtMostFinite => "at_most_finite",
    }
}

fn cmd_classify(a: &ClassifyArgs) -> Result<String> {
    let lat = LatticeParams::new(a.d, a.beta)?;
    let res = classify_discrete_spectrum(a.alpha, &lat)?;
    let e0 = solve_threshold(&lat)?.e0;
    let growth = if a.r_max.is_empty() {
        Vec::new()
    } else {
        let p = RadialParams::new(lat, a.alpha, 0)?;
        phase_growth(&p, e0, &a.r_max)?.entries
    };
    let report = ClassifyReport {
        alpha: a.alpha,
        beta: a.beta,
        d: a.d,
        classification: res.classification,
        c: res.c,
        four_ab: res.four_ab,
        alpha_crit: res.alpha_crit,
        e0,
        growth,
    };
    Ok(match a.out.format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut s = String::from(
                "alpha,beta,d,classification,c,four_ab,alpha_crit,e0,\
                 r_max,wound_phase,phase_slope,amp_log_slope,zero_count\n",
            );
            let head = format!(
                "{},{},{},{},{},{},{},{}",
                report.alpha,
                report.beta,
                report.d,
                classification_name(report.classification),
                report.c,
                report.four_ab,
                csv_opt(report.alpha_crit),
                report.e0
            );
            if report.growth.is_empty() {
                let _ = writeln!(s, "{head},,,,");
            }
            for g in &report.growth {
                let _ = writeln!(
                    s,
                    "{head},{},{},{},{},{}",
                    g.r_max, g.wound_phase, g.phase_slope, g.amp_log_slope, g.zero_count
                );
            }
            s
        }
    })
}

// ---- eigen ----

#[derive(Serialize)]
struct EigenRow {
    j: usize,
    e: f64,
    method: Method,
    /// Half-width of the final bisection bracket: the energy uncertainty.
    residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    fd_e: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fd_diff: Option<f64>,
}

#[derive(Serialize)]
struct OracleSummary {
    grid_n: usize,
    fd_count: usize,
    shooting_count: usize,
    agree: bool,
}

#[derive(Serialize)]
struct EigenReport {
    alpha: f64,
    beta: f64,
    d: f64,
    l: i32,
    r_min: f64,
    r_max: f64,
    e0: f64,
    window: (f64, f64),
    tol: f64,
    count: usize,
    rows: Vec<EigenRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleSummary>,
}

fn parse_window(spec: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [lo, hi] = parts.as_slice() else {
        return Err(Error::InvalidInput(format!("window `{spec}` must look like lo:hi")));
    };
    let lo: f64 = lo
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad window endpoint `{lo}`")))?;
    let hi: f64 = hi
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad window endpoint `{hi}`")))?;
    Ok((lo, hi))
}

fn cmd_eigen(a: &EigenArgs) -> Result<String> {
    let lat = LatticeParams::new(a.d, a.beta)?;
    let p = RadialParams::new(lat, a.alpha, a.l)?;
    let dom = TruncatedDomain::new(a.r_min, a.r_max)?;
    dom.validate(&lat)?;
    let e0 = solve_threshold(&lat)?.e0;
    let window = match &a.e_window {
        Some(spec) => parse_window(spec)?,
        None => (e0 - 1.0, e0 - 1e-6),
    };
    let res = find_eigenvalues(&p, &dom, window, a.tol)?;
    let mut rows: Vec<EigenRow> = res
        .eigenvalues
        .iter()
        .zip(&res.widths)
        .enumerate()
        .map(|(j, (&e, &w))| EigenRow {
            j,
            e,
            method: Method::Shooting,
            residual: 0.5 * w,
            fd_e: None,
            fd_diff: None,
        })
        .collect();
    let oracle = if a.oracle {
        let grid = fd_grid(&p, &dom, a.grid_n)?;
        let fd_below_hi = fd_count_below(&grid, window.1);
        let fd_below_lo = fd_count_below(&grid, window.0);
        let shooting_below_hi = oscillation_count(&p, window.1, &dom)?;
        let fd_in_window = fd_below_hi - fd_below_lo;
        if fd_in_window > 0 {
            let all = crate::numerics::tridiag::lowest_eigenvalues(
                &grid.diag,
                grid.off,
                fd_below_hi,
                a.tol.min(1e-9),
            );
            for (row, fd_e) in rows.iter_mut().zip(all.into_iter().skip(fd_below_lo)) {
                row.fd_e = Some(fd_e);
                row.fd_diff = Some(row.e - fd_e);
            }
        }
        Some(OracleSummary {
            grid_n: a.grid_n,
            fd_count: fd_below_hi,
            shooting_count: shooting_below_hi,
            agree: fd_below_hi == shooting_below_hi && fd_in_window == res.count,
        })
    } else {
        None
    };
    let report = EigenReport {
        alpha: a.alpha,
        beta: a.beta,
        d: a.d,
        l: a.l,
        r_min: a.r_min,
        r_max: a.r_max,
        e0,
        window,
        tol: a.tol,
        count: res.count,
        rows,
        oracle,
    };
    Ok(match a.out.format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut s = String::from("j,e,method,residual,fd_e,fd_diff\n");
            for r in &report.rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{}",
                    r.j,
                    r.e,
                    match r.method {
                        Method::Shooting => "shooting",
                        Method::FdOracle => "fd_oracle",
                    },
                    r.residual,
                    csv_opt(r.fd_e),
                    csv_opt(r.fd_diff)
                );
            }
            s
        }
    })
}
