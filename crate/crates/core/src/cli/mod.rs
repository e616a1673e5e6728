//! Command-line front end.
//!
//! Exit codes: 0 success, 1 selfcheck failure, 2 usage or output error,
//! 3 surface file error, 4 numerical failure.

mod format;
mod surface_file;
mod svg;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

pub use format::{analyze_record, num};
pub use surface_file::{parse_surface_file, parse_surface_text, SurfaceFileError};
pub use svg::render_plot;

use crate::classify::{classify_point, ToleranceSet};
use crate::conics::{indicatrix, wintgen_gap};
use crate::localgeom::{
    brioschi_from_jets, local_invariants, local_invariants_with, rel_diff, CheckOutcome, CheckPolicy, GeomError,
    SurfaceSpec,
};
use crate::locus::{find_inflections, trace_parabolic, LocusError, DEFAULT_RES, MAX_RES, MIN_RES};

/// Brioschi versus the extrinsic Gaussian curvature.
pub const BRIOSCHI_TOL: f64 = 1e-8;
/// Lower bound on the Wintgen gap, relative to `‖ℳ‖²`.
pub const WINTGEN_TOL: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(name = "monge4", version, about = "Local geometry of surfaces in R^4 in Monge form")]
struct Cli {
    /// Worker threads for grid sampling (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct SurfaceArg {
    /// Surface description file.
    #[arg(long)]
    surface: PathBuf,
    /// Relative classification tolerance.
    #[arg(long, default_value_t = 1e-8)]
    rel: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print every invariant at one point as key=value lines.
    Analyze {
        #[command(flatten)]
        s: SurfaceArg,
        /// Point as X,Y.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Classify every node of a grid; CSV output.
    Grid {
        #[command(flatten)]
        s: SurfaceArg,
        #[arg(long, default_value_t = DEFAULT_RES)]
        res: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Trace the parabolic curve; CSV output.
    Trace {
        #[command(flatten)]
        s: SurfaceArg,
        #[arg(long, default_value_t = DEFAULT_RES)]
        res: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Locate inflection points.
    Inflections {
        #[command(flatten)]
        s: SurfaceArg,
        #[arg(long, default_value_t = DEFAULT_RES)]
        res: usize,
    },
    /// Draw the normal plane at a point as SVG.
    Plot {
        #[command(flatten)]
        s: SurfaceArg,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the redundant-formula checks over a grid.
    Selfcheck {
        #[command(flatten)]
        s: SurfaceArg,
        #[arg(long, default_value_t = DEFAULT_RES)]
        res: usize,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Surface(SurfaceFileError),
    Numerical(String),
    Output(String),
    SelfcheckFailed,
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::SelfcheckFailed => 1,
            CliError::Usage(_) | CliError::Output(_) => 2,
            CliError::Surface(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }
}

impl From<GeomError> for CliError {
    fn from(e: GeomError) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl From<LocusError> for CliError {
    fn from(e: LocusError) -> Self {
        match e {
            LocusError::Resolution(_) => CliError::Usage(e.to_string()),
            LocusError::Geom(g) => g.into(),
        }
    }
}

/// Runs the tool with process arguments (including the program name) on
/// stdout/stderr and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// As [`run`], writing to the given streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(cli.command)),
            Err(e) => Err(CliError::Usage(e.to_string())),
        },
        None => dispatch(cli.command),
    };
    // stdout text is produced even when selfcheck fails
    let result = result.and_then(|(text, passed)| {
        out.write_all(text.as_bytes())
            .map_err(|e| CliError::Output(e.to_string()))?;
        if passed {
            Ok(())
        } else {
            Err(CliError::SelfcheckFailed)
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            match &e {
                CliError::Usage(m) => writeln!(err, "error: {m}"),
                CliError::Surface(s) => writeln!(err, "error: surface file: {s}"),
                CliError::Numerical(m) => writeln!(err, "error: numerical failure: {m}"),
                CliError::Output(m) => writeln!(err, "error: output: {m}"),
                CliError::SelfcheckFailed => writeln!(err, "selfcheck failed"),
            }
            .ok();
            e.code()
        }
    }
}

fn load(s: &SurfaceArg) -> Result<(SurfaceSpec, ToleranceSet), CliError> {
    if !(s.rel > 0.0 && s.rel.is_finite()) {
        return Err(CliError::Usage(format!("--rel must be positive, got {}", s.rel)));
    }
    let surface = parse_surface_file(&s.surface).map_err(CliError::Surface)?;
    Ok((surface, ToleranceSet::with_rel(s.rel)))
}

fn parse_point(text: &str, surface: &SurfaceSpec) -> Result<(f64, f64), CliError> {
    let bad = || CliError::Usage(format!("--at expects X,Y, got `{text}`"));
    let (x, y) = text.split_once(',').ok_or_else(bad)?;
    let x: f64 = x.trim().parse().map_err(|_| bad())?;
    let y: f64 = y.trim().parse().map_err(|_| bad())?;
    if !surface.domain.contains(x, y) {
        return Err(CliError::Usage(format!("point ({x}, {y}) is outside the domain")));
    }
    Ok((x, y))
}

fn check_res(res: usize) -> Result<(), CliError> {
    if (MIN_RES..=MAX_RES).contains(&res) {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--res must be in [{MIN_RES}, {MAX_RES}], got {res}")))
    }
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))
}

/// Executes a command; returns the text for stdout and whether it passed.
fn dispatch(cmd: Command) -> Result<(String, bool), CliError> {
    match cmd {
        Command::Analyze { s, at } => {
            let (surface, tol) = load(&s)?;
            let (x, y) = parse_point(&at, &surface)?;
            let inv = local_invariants(&surface, x, y)?;
            let brioschi = brioschi_from_jets(&inv.phi, &inv.psi, x, y)?;
            Ok((analyze_record(&inv, brioschi, &tol), true))
        }
        Command::Grid { s, res, out: path } => {
            let (surface, tol) = load(&s)?;
            check_res(res)?;
            write_file(&path, &grid_csv(&surface, res, &tol)?)?;
            Ok((String::new(), true))
        }
        Command::Trace { s, res, out: path } => {
            let (surface, _) = load(&s)?;
            check_res(res)?;
            write_file(&path, &trace_csv(&surface, res)?)?;
            Ok((String::new(), true))
        }
        Command::Inflections { s, res } => {
            let (surface, _) = load(&s)?;
            check_res(res)?;
            let mut text = String::new();
            for r in find_inflections(&surface, res)? {
                let _ = writeln!(
                    text,
                    "{} {} {} {} {} {}",
                    num(r.x),
                    num(r.y),
                    r.kind.as_str(),
                    num(r.k),
                    num(r.det_h_delta),
                    num(r.residual)
                );
            }
            Ok((text, true))
        }
        Command::Plot { s, at, out: path } => {
            let (surface, tol) = load(&s)?;
            let (x, y) = parse_point(&at, &surface)?;
            let inv = local_invariants(&surface, x, y)?;
            write_file(&path, &render_plot(&inv.sff, &tol))?;
            Ok((String::new(), true))
        }
        Command::Selfcheck { s, res } => {
            let (surface, _) = load(&s)?;
            check_res(res)?;
            let report = selfcheck(&surface, res)?;
            Ok((report.summary(), report.failures.is_empty()))
        }
    }
}

/// Grid classification as CSV, rows with `y` outer and `x` inner.
pub fn grid_csv(surface: &SurfaceSpec, res: usize, tol: &ToleranceSet) -> Result<String, GeomError> {
    let d = surface.domain;
    let rows: Vec<String> = (0..res * res)
        .into_par_iter()
        .map(|k| {
            let (x, y) = d.node(res, k % res, k / res);
            let inv = local_invariants(surface, x, y)?;
            let c = classify_point(&inv, tol);
            Ok(format!(
                "{},{},{},{},{},{}\n",
                num(x),
                num(y),
                num(inv.k),
                num(inv.kappa),
                num(inv.delta),
                c.label()
            ))
        })
        .collect::<Result<_, GeomError>>()?;
    let mut s = String::from("x,y,K,kappa,Delta,class\n");
    for r in rows {
        s.push_str(&r);
    }
    Ok(s)
}

/// Parabolic polylines as CSV; closed polylines repeat their first vertex.
pub fn trace_csv(surface: &SurfaceSpec, res: usize) -> Result<String, LocusError> {
    let set = trace_parabolic(surface, res)?;
    let mut s = String::from("polyline_id,vertex_id,x,y,delta_residual\n");
    for (id, p) in set.polylines.iter().enumerate() {
        let mut verts: Vec<((f64, f64), f64)> = p.points.iter().copied().zip(p.residuals.iter().copied()).collect();
        if p.closed {
            verts.push(verts[0]);
        }
        for (v, ((x, y), r)) in verts.into_iter().enumerate() {
            let _ = writeln!(s, "{id},{v},{},{},{}", num(x), num(y), num(r));
        }
    }
    Ok(s)
}

/// A failed check at a grid node.
#[derive(Debug, Clone, PartialEq)]
pub struct SelfcheckFailure {
    pub x: f64,
    pub y: f64,
    pub outcome: CheckOutcome,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SelfcheckReport {
    pub points: usize,
    pub checks: usize,
    pub failures: Vec<SelfcheckFailure>,
}

impl SelfcheckReport {
    pub fn summary(&self) -> String {
        let mut s = format!(
            "points={} checks={} failures={}\n",
            self.points,
            self.checks,
            self.failures.len()
        );
        for f in self.failures.iter().take(20) {
            let o = &f.outcome;
            let _ = writeln!(
                s,
                "FAIL {} at ({}, {}): {} vs {} (rel {} > {})",
                o.quantity,
                num(f.x),
                num(f.y),
                num(o.primary),
                num(o.alternate),
                num(o.rel),
                num(o.tol)
            );
        }
        s
    }
}

/// Redundant formulas (K three ways, κ, Δ, the normal Gram determinant),
/// the Wintgen inequality and `det 𝒜 = κ/2` at every grid node.
pub fn selfcheck(surface: &SurfaceSpec, res: usize) -> Result<SelfcheckReport, GeomError> {
    let d = surface.domain;
    let lenient = CheckPolicy {
        strict: false,
        ..Default::default()
    };
    let per_node: Vec<Vec<CheckOutcome>> = (0..res * res)
        .into_par_iter()
        .map(|k| {
            let (x, y) = d.node(res, k % res, k / res);
            let inv = local_invariants_with(surface, x, y, &lenient)?;
            let s2 = inv.sff.norm().powi(2);
            let brioschi = brioschi_from_jets(&inv.phi, &inv.psi, x, y)?;
            let mut v = inv.cross_checks().to_vec();
            v.push(CheckOutcome::new("Brioschi curvature", inv.k, brioschi, s2, BRIOSCHI_TOL));
            let gap = wintgen_gap(&inv.sff);
            v.push(CheckOutcome {
                quantity: "Wintgen gap",
                primary: gap,
                alternate: 0.0,
                rel: if s2 > 0.0 { (-gap / s2).max(0.0) } else { 0.0 },
                tol: WINTGEN_TOL,
            });
            let det = indicatrix(&inv.sff).map.determinant();
            v.push(CheckOutcome {
                quantity: "indicatrix area",
                primary: 2.0 * det,
                alternate: inv.kappa,
                rel: rel_diff(2.0 * det, inv.kappa, s2),
                tol: 1e-9,
            });
            Ok(v)
        })
        .collect::<Result<_, GeomError>>()?;
    let mut report = SelfcheckReport {
        points: res * res,
        ..Default::default()
    };
    for (k, outcomes) in per_node.into_iter().enumerate() {
        let (x, y) = d.node(res, k % res, k / res);
        report.checks += outcomes.len();
        for o in outcomes.into_iter().filter(|o| !o.passed()) {
            report.failures.push(SelfcheckFailure { x, y, outcome: o });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(
            std::iter::once("monge4").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_args(&[]).0, 2);
        assert_eq!(run_args(&["frobnicate"]).0, 2);
        assert_eq!(run_args(&["--help"]).0, 0);
    }

    #[test]
    fn missing_surface_file() {
        let (code, _, err) = run_args(&["analyze", "--surface", "/nonexistent/s.txt", "--at", "0,0"]);
        assert_eq!(code, 3);
        assert!(err.contains("cannot read"));
    }
}
