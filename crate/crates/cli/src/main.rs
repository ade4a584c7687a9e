//! `abspec`: magnetic spectra, reduced eigenproblems and bound checks for
//! surfaces of revolution.

mod output;

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use abspec_core::format::{sig12, LinePlot, Table};
use abspec_core::model_weights::{g_star, star, star_eps};
use abspec_core::profile::{parse_number, EndKind, Profile};
use abspec_core::sl::{solve, Bc, SlProblem};
use abspec_core::spectra::{cylinder_spectrum, hemisphere_spectrum, sphere_spectrum, HemisphereBc, Spectrum};
use abspec_core::surface::{analyze, annulus_modulus, green_weight, PoleSpec, SurfaceReport};
use abspec_core::verify::{
    flux_sweep, sweep_table, verify_annulus, verify_boundary_isoperimetric, verify_boundary_large_area,
    verify_closed_bound, verify_no_hersch, TheoremReport, VerifyConfig,
};
use abspec_core::weight::Weight;
use abspec_core::{Error, Flux};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use output::{emit, json_lines, render, write_file};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    NonConvergence(String),
    Io(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::NonConvergence(_) => 3,
            _ => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::NonConvergence(m) => write!(f, "solver did not converge: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NoBracket { .. } | Error::RootFinding(_) | Error::Integration(_) => CliError::NonConvergence(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// One JSON record per line.
    Json,
    Csv,
    Svg,
}

#[derive(Parser, Debug)]
#[command(name = "abspec", version, about = "Aharonov-Bohm magnetic eigenvalues on surfaces of revolution")]
struct Cli {
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Slack tolerance for inequality checks.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form spectrum of a sphere, hemisphere or flat cylinder.
    Spectrum(SpectrumArgs),
    /// k-th eigenvalue of the one-dimensional weighted problem.
    Solve(SolveArgs),
    /// Area, curvature and level-set weight of a surface of revolution.
    Surface(SurfaceArgs),
    /// Checks one eigenvalue bound on a surface.
    Verify(VerifyArgs),
    /// Runs a bound check over a grid of fluxes.
    Sweep(SweepArgs),
}

fn flux_arg(s: &str) -> Result<Flux, String> {
    Flux::parse(s).map_err(|e| e.to_string())
}

fn number_arg(s: &str) -> Result<f64, String> {
    parse_number(s).map_err(|e| e.to_string())
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GeometryKind {
    Sphere,
    Hemisphere,
    Cylinder,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum HemiBc {
    Dirichlet,
    Neumann,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    geometry: GeometryKind,
    #[arg(long, value_parser = flux_arg, allow_hyphen_values = true)]
    flux: Flux,
    #[arg(long, default_value_t = 10)]
    count: usize,
    /// Sphere curvature.
    #[arg(long, value_parser = number_arg, default_value = "1")]
    curvature: f64,
    /// Hemisphere boundary condition.
    #[arg(long)]
    bc: Option<HemiBc>,
    /// Cylinder modulus M (the cylinder is S^1 x [-M, M]).
    #[arg(long, value_parser = number_arg)]
    modulus: Option<f64>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// star:M | star-eps:M,eps[,closed|open] | surface:<model> | file:<weight table>
    #[arg(long)]
    weight: String,
    #[arg(long, value_parser = flux_arg, allow_hyphen_values = true)]
    flux: Flux,
    /// Zero-based eigenvalue index.
    #[arg(long, default_value_t = 0)]
    k: usize,
    /// neumann | dirichlet (default: natural condition of the end).
    #[arg(long)]
    left: Option<String>,
    #[arg(long)]
    right: Option<String>,
    /// Write the sampled eigenfunction as an `a,f` table.
    #[arg(long)]
    eigenfunction: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SurfaceArgs {
    #[arg(long, required_unless_present = "profile", conflicts_with = "profile")]
    model: Option<String>,
    /// Profile file: a model line, or `table` followed by `r,f` rows.
    #[arg(long)]
    profile: Option<PathBuf>,
    /// Also report the conformal modulus (two boundary circles).
    #[arg(long)]
    modulus: bool,
    /// Write the level-set weight as an `a,G` table.
    #[arg(long)]
    weight_out: Option<PathBuf>,
    /// Write an SVG of the weight against a(4 pi - a).
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Check {
    /// Surfaces with boundary of area at most 4 pi / K.
    #[value(name = "thm2.1")]
    Boundary,
    /// Closed surfaces.
    #[value(name = "thm2.3")]
    Closed,
    /// Surfaces with boundary of area beyond 4 pi / K.
    #[value(name = "thm2.4")]
    LargeArea,
    /// Annuli.
    #[value(name = "thm2.5")]
    Annulus,
    /// Normalized eigenvalue growth along cigars.
    #[value(name = "no-hersch")]
    NoHersch,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    theorem: Check,
    #[arg(long)]
    model: Option<String>,
    #[arg(long, conflicts_with = "model")]
    profile: Option<PathBuf>,
    #[arg(long, value_parser = flux_arg, allow_hyphen_values = true)]
    flux: Flux,
    /// Upper curvature bound K.
    #[arg(long, value_parser = number_arg, default_value = "1")]
    curvature: f64,
    /// Cigar lengths for no-hersch.
    #[arg(long = "L", value_delimiter = ',', default_value = "1,2,4,8")]
    lengths: Vec<f64>,
    /// Small-flux ladder for annuli.
    #[arg(long)]
    ladder: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    theorem: Check,
    #[arg(long)]
    model: Option<String>,
    #[arg(long, conflicts_with = "model")]
    profile: Option<PathBuf>,
    /// Comma-separated fluxes.
    #[arg(long, value_delimiter = ',', value_parser = flux_arg, allow_hyphen_values = true)]
    fluxes: Vec<Flux>,
    /// Evenly spaced fluxes `p/q` for p = 1..=q/2 when no list is given.
    #[arg(long, default_value_t = 20)]
    denominator: i64,
    #[arg(long, value_parser = number_arg, default_value = "1")]
    curvature: f64,
    #[arg(long = "L", value_delimiter = ',', default_value = "1,2,4,8")]
    lengths: Vec<f64>,
    #[arg(long)]
    ladder: bool,
}

/// Successful runs report whether every check held.
enum Status {
    Done,
    ChecksFailed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.as_deref();
    let result = match &cli.command {
        Command::Spectrum(a) => cmd_spectrum(a, cli.format, out),
        Command::Solve(a) => cmd_solve(a, cli.format, out),
        Command::Surface(a) => cmd_surface(a, cli.format, out),
        Command::Verify(a) => cmd_verify(a, cli.format, cli.tol, out),
        Command::Sweep(a) => cmd_sweep(a, cli.format, cli.tol, out),
    };
    match result {
        Ok(Status::Done) => ExitCode::SUCCESS,
        Ok(Status::ChecksFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn cmd_spectrum(a: &SpectrumArgs, format: Format, out: Option<&Path>) -> Result<Status, CliError> {
    let spec: Spectrum = match a.geometry {
        GeometryKind::Sphere => sphere_spectrum(a.flux, a.curvature, a.count)?,
        GeometryKind::Hemisphere => {
            let bc = match a.bc {
                Some(HemiBc::Dirichlet) => HemisphereBc::Dirichlet,
                Some(HemiBc::Neumann) => HemisphereBc::Neumann,
                None => return Err(CliError::Usage("hemisphere needs --bc dirichlet|neumann".into())),
            };
            hemisphere_spectrum(a.flux, bc, a.count)?
        }
        GeometryKind::Cylinder => {
            let m = a.modulus.ok_or_else(|| CliError::Usage("cylinder needs --modulus".into()))?;
            cylinder_spectrum(a.flux, m, a.count)?
        }
    };
    if spec.approximate {
        eprintln!("warning: irrational flux, lines merged with relative tolerance 1e-12");
    }
    let records = spec.records();
    let text = render(
        format,
        || json_lines(&records),
        || {
            let mut t = Table::new(["value", "multiplicity", "branch_n", "branch_k", "symbolic_alpha"]);
            for r in &records {
                t.push(vec![
                    sig12(r.value),
                    r.multiplicity.to_string(),
                    r.branch_n.to_string(),
                    r.branch_k.to_string(),
                    r.symbolic_alpha.clone(),
                ]);
            }
            t.to_csv()
        },
        || {
            let pts = spec.values().iter().enumerate().map(|(i, v)| ((i + 1) as f64, *v)).collect();
            LinePlot::new(&format!("spectrum, flux {}", a.flux), "index", "eigenvalue")
                .with_series("eigenvalue", pts, false)
                .to_svg()
        },
    )?;
    emit(out, &text)?;
    Ok(Status::Done)
}

fn load_weight(source: &str) -> Result<Weight, CliError> {
    let (kind, rest) = source
        .split_once(':')
        .ok_or_else(|| CliError::Usage(format!("weight source `{source}` needs a kind prefix")))?;
    match kind {
        "star" => Ok(star(parse_number(rest)?)?),
        "star-eps" => {
            let parts: Vec<&str> = rest.split(',').collect();
            if !(2..=3).contains(&parts.len()) {
                return Err(CliError::Usage("star-eps needs M,eps[,closed|open]".into()));
            }
            let closed = match parts.get(2).map(|s| s.trim()) {
                None | Some("closed") => true,
                Some("open") => false,
                Some(other) => return Err(CliError::Usage(format!("unknown plateau variant `{other}`"))),
            };
            Ok(star_eps(parse_number(parts[0])?, parse_number(parts[1])?, closed)?)
        }
        "surface" => {
            let p = Profile::from_spec(rest)?;
            surface_weight(&p)?.ok_or_else(|| CliError::Usage("an annulus has no pole for a level-set weight".into()))
        }
        "file" => {
            let text = std::fs::read_to_string(rest).map_err(|e| CliError::Io(format!("{rest}: {e}")))?;
            Ok(Weight::from_table(&text)?)
        }
        _ => Err(CliError::Usage(format!("unknown weight kind `{kind}`"))),
    }
}

fn surface_weight(p: &Profile) -> Result<Option<Weight>, CliError> {
    let poles = match p.ends() {
        [EndKind::Pole, EndKind::Pole] => PoleSpec::Two,
        [EndKind::Pole, EndKind::Boundary] => PoleSpec::One,
        _ => return Ok(None),
    };
    Ok(Some(green_weight(p, poles)?))
}

#[derive(Serialize)]
struct SolveRecord {
    weight: String,
    flux: String,
    nu: f64,
    left: String,
    right: String,
    k: usize,
    kappa: f64,
    residual: f64,
    zero_count: usize,
}

fn cmd_solve(a: &SolveArgs, format: Format, out: Option<&Path>) -> Result<Status, CliError> {
    let weight = load_weight(&a.weight)?;
    let left = match &a.left {
        Some(s) => Bc::parse(s)?,
        None => Bc::natural(weight.left()),
    };
    let right = match &a.right {
        Some(s) => Bc::parse(s)?,
        None => Bc::natural(weight.right()),
    };
    let label = weight.label().to_string();
    let problem = SlProblem::new(weight, a.flux, left, right)?;
    let sol = solve(&problem, a.k)?;
    if let Some(path) = &a.eigenfunction {
        write_file(path, &sol.to_table())?;
    }
    let record = SolveRecord {
        weight: label,
        flux: a.flux.to_string(),
        nu: a.flux.nu(),
        left: left.to_string(),
        right: right.to_string(),
        k: sol.k,
        kappa: sol.kappa,
        residual: sol.residual,
        zero_count: sol.zero_count,
    };
    let text = render(
        format,
        || json_lines(&[&record]),
        || {
            let mut t = Table::new(["weight", "flux", "nu", "left", "right", "k", "kappa", "residual", "zero_count"]);
            t.push(vec![
                record.weight.clone(),
                record.flux.clone(),
                sig12(record.nu),
                record.left.clone(),
                record.right.clone(),
                record.k.to_string(),
                sig12(record.kappa),
                sig12(record.residual),
                record.zero_count.to_string(),
            ]);
            t.to_csv()
        },
        || {
            LinePlot::new(&format!("eigenfunction k={}, kappa={}", sol.k, sig12(sol.kappa)), "a", "f")
                .with_series("f", sol.samples.clone(), false)
                .to_svg()
        },
    )?;
    emit(out, &text)?;
    Ok(Status::Done)
}

fn load_profile(model: Option<&str>, file: Option<&Path>) -> Result<Profile, CliError> {
    match (model, file) {
        (Some(m), None) => Ok(Profile::from_spec(m)?),
        (None, Some(p)) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            Ok(Profile::parse_file(&text)?)
        }
        _ => Err(CliError::Usage("give exactly one of --model or --profile".into())),
    }
}

fn weight_plot(w: &Weight) -> String {
    let pts = w.samples(400);
    let star_pts = pts.iter().filter(|(a, _)| *a <= 4.0 * PI).map(|(a, _)| (*a, g_star(*a))).collect();
    LinePlot::new(&format!("level-set weight, {}", w.label()), "a", "G(a)")
        .with_series("G", pts, false)
        .with_series("a(4 pi - a)", star_pts, true)
        .to_svg()
}

#[derive(Serialize)]
struct SurfaceRecord {
    #[serde(flatten)]
    report: SurfaceReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    modulus: Option<f64>,
}

fn cmd_surface(a: &SurfaceArgs, format: Format, out: Option<&Path>) -> Result<Status, CliError> {
    let profile = load_profile(a.model.as_deref(), a.profile.as_deref())?;
    let report = analyze(&profile)?;
    let modulus = if a.modulus { Some(annulus_modulus(&profile)?) } else { None };
    let weight = surface_weight(&profile)?;
    let need_weight = a.weight_out.is_some() || a.svg.is_some() || format == Format::Svg;
    if need_weight && weight.is_none() {
        return Err(CliError::Usage("an annulus has no pole for a level-set weight".into()));
    }
    if let (Some(path), Some(w)) = (&a.weight_out, &weight) {
        write_file(path, &w.to_table(2000))?;
    }
    if let (Some(path), Some(w)) = (&a.svg, &weight) {
        write_file(path, &weight_plot(w))?;
    }
    let record = SurfaceRecord { report, modulus };
    let text = render(
        format,
        || json_lines(&[&record]),
        || {
            let r = &record.report;
            let mut t = Table::new(["key", "value"]);
            let mut row = |k: &str, v: String| t.push(vec![k.to_string(), v]);
            row("model", r.model.clone());
            row("area", sig12(r.area));
            row("length", sig12(r.length));
            row("curvature_max", sig12(r.curvature_max));
            row("curvature_min", sig12(r.curvature_min));
            row("boundary_length", r.boundary_length.map(sig12).unwrap_or_default());
            row("left_end", r.left_end.to_string());
            row("right_end", r.right_end.to_string());
            if let Some(m) = record.modulus {
                row("modulus", sig12(m));
            }
            t.to_csv()
        },
        || weight.as_ref().map(weight_plot).unwrap_or_default(),
    )?;
    emit(out, &text)?;
    Ok(Status::Done)
}

fn config(tol: Option<f64>) -> Result<VerifyConfig, CliError> {
    let mut cfg = VerifyConfig::default();
    if let Some(t) = tol {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(CliError::Usage(format!("--tol must be a non-negative number, got {t}")));
        }
        cfg.slack_tolerance = t;
    }
    Ok(cfg)
}

/// Builds the check for one theorem id; the profile is loaded once.
fn checker<'a>(
    theorem: Check,
    profile: Option<&'a Profile>,
    curvature: f64,
    lengths: &'a [f64],
    ladder: bool,
    cfg: &'a VerifyConfig,
) -> Result<Box<dyn Fn(Flux) -> TheoremReport + Sync + 'a>, CliError> {
    if theorem == Check::NoHersch {
        return Ok(Box::new(move |f| verify_no_hersch(lengths, f, cfg)));
    }
    let p = profile.ok_or_else(|| CliError::Usage("this check needs --model or --profile".into()))?;
    Ok(match theorem {
        Check::Boundary => Box::new(move |f| verify_boundary_isoperimetric(p, f, curvature, cfg)),
        Check::Closed => Box::new(move |f| verify_closed_bound(p, f, curvature, cfg)),
        Check::LargeArea => Box::new(move |f| verify_boundary_large_area(p, f, curvature, cfg)),
        Check::Annulus => Box::new(move |f| verify_annulus(p, f, ladder, cfg)),
        Check::NoHersch => unreachable!(),
    })
}

fn optional_profile(theorem: Check, model: Option<&str>, file: Option<&Path>) -> Result<Option<Profile>, CliError> {
    if theorem == Check::NoHersch && model.is_none() && file.is_none() {
        return Ok(None);
    }
    load_profile(model, file).map(Some)
}

fn report_table(r: &TheoremReport) -> String {
    let mut t = Table::new(["kind", "name", "value", "holds"]);
    for q in &r.quantities {
        t.push(vec!["quantity".into(), q.name.clone(), sig12(q.value), String::new()]);
    }
    for i in &r.inequalities {
        t.push(vec!["slack".into(), i.name.clone(), sig12(i.slack), i.holds.to_string()]);
    }
    for p in &r.preconditions {
        t.push(vec!["precondition".into(), p.name.clone(), p.detail.clone(), p.holds.to_string()]);
    }
    t.push(vec!["result".into(), "pass".into(), r.flags.join(";"), r.pass.to_string()]);
    t.to_csv()
}

fn report_plot(r: &TheoremReport, profile: Option<&Profile>) -> Result<String, CliError> {
    let series = |prefix: &str| -> Vec<(f64, f64)> {
        r.quantities
            .iter()
            .filter_map(|q| {
                let inner = q.name.strip_prefix(prefix)?.strip_suffix(']')?;
                Some((parse_number(inner).ok()?, q.value))
            })
            .collect()
    };
    match r.theorem.as_str() {
        "no-hersch" => Ok(LinePlot::new("normalized first eigenvalue of cigars", "L", "area * mu1")
            .with_series("area * mu1", series("normalized[L="), false)
            .with_series("lower bound", series("lower_bound[L="), true)
            .to_svg()),
        "thm2.5" => {
            let ratios = series("ratio[nu=");
            if ratios.is_empty() {
                return Err(CliError::Usage("the annulus plot needs --ladder".into()));
            }
            let limit = r.value("ratio_limit").unwrap_or(f64::NAN);
            let flat = ratios.iter().map(|(x, _)| (*x, limit)).collect();
            Ok(LinePlot::new("area * mu1 / nu^2 along small fluxes", "nu", "ratio")
                .with_series("ratio", ratios, false)
                .with_series("4 pi M", flat, true)
                .to_svg())
        }
        _ => {
            let p = profile.ok_or_else(|| CliError::Usage("no surface to plot".into()))?;
            let w = surface_weight(p)?.ok_or_else(|| CliError::Usage("no level-set weight to plot".into()))?;
            Ok(weight_plot(&w))
        }
    }
}

fn cmd_verify(a: &VerifyArgs, format: Format, tol: Option<f64>, out: Option<&Path>) -> Result<Status, CliError> {
    let cfg = config(tol)?;
    let profile = optional_profile(a.theorem, a.model.as_deref(), a.profile.as_deref())?;
    let check = checker(a.theorem, profile.as_ref(), a.curvature, &a.lengths, a.ladder, &cfg)?;
    let report = check(a.flux);
    let text = match format {
        Format::Json => json_lines(&[&report])?,
        Format::Csv => report_table(&report),
        Format::Svg => report_plot(&report, profile.as_ref())?,
    };
    emit(out, &text)?;
    Ok(if report.pass { Status::Done } else { Status::ChecksFailed })
}

fn cmd_sweep(a: &SweepArgs, format: Format, tol: Option<f64>, out: Option<&Path>) -> Result<Status, CliError> {
    let cfg = config(tol)?;
    let profile = optional_profile(a.theorem, a.model.as_deref(), a.profile.as_deref())?;
    let check = checker(a.theorem, profile.as_ref(), a.curvature, &a.lengths, a.ladder, &cfg)?;
    let grid: Vec<Flux> = if a.fluxes.is_empty() {
        if a.denominator < 2 {
            return Err(CliError::Usage("--denominator must be at least 2".into()));
        }
        (1..=a.denominator / 2).map(|p| Flux::rational(p, a.denominator)).collect::<Result<_, _>>()?
    } else {
        a.fluxes.clone()
    };
    let rows = flux_sweep(&grid, check);
    let text = render(
        format,
        || json_lines(&rows),
        || sweep_table(&rows).to_csv(),
        || {
            let pick = |name: &str| -> Vec<(f64, f64)> {
                rows.iter().filter_map(|r| Some((r.nu, r.report.value(name)?))).collect()
            };
            LinePlot::new("first eigenvalue against flux", "nu", "value")
                .with_series("mu1", pick("mu1"), false)
                .with_series("bound", pick("bound"), true)
                .to_svg()
        },
    )?;
    emit(out, &text)?;
    Ok(if rows.iter().all(|r| r.report.pass) { Status::Done } else { Status::ChecksFailed })
}
