//! Command-line front end for `suprametric-core`.
//!
//! [`run`] takes the argument list and returns what would be printed and the
//! exit code, so the binary is a thin wrapper and tests need no subprocess.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use suprametric_core::axioms::{verify_on, Axiom};
use suprametric_core::classify::{classify, AxiomReport, ClassifyConfig};
use suprametric_core::comparison::{
    check_monotone, check_subdiagonal, check_theta1, check_theta2, default_grid, default_positive_grid,
    ComparisonFn, MonotoneWitness, SubdiagonalWitness, ThetaConfig, ThetaVerdict,
};
use suprametric_core::falsify::{falsify, Claim, FalsifyConfig};
use suprametric_core::fit::interpolative_to_b_index;
use suprametric_core::gallery::{export_finite, list_gallery, GalleryItem};
use suprametric_core::oracle::Carrier;
use suprametric_core::picard::{
    certificate_pairs, check_ciric_contraction, check_orbit_bounded, check_plain_contraction, run_orbit,
    solve_fixed_point_traced, ContractionCertificate, OrbitBound, SelfMap, SolveConfig,
    SolveResult,
};
use suprametric_core::point::Point;
use suprametric_core::sampling::{self, SampleConfig};
use suprametric_core::spacefile;
use suprametric_core::Error as CoreError;

pub mod machine;
pub mod refs;
mod render;

use refs::{parse_box, parse_point, resolve_space, Space};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_SEMIMETRIC: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_NOT_CONVERGED: i32 = 4;
pub const EXIT_NOT_FOUND: i32 = 5;

/// Orbit length used for certificate pairs and the bounded-orbit probe.
const PROBE_ORBIT: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Text,
    Machine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Plain,
    Ciric,
}

/// Settings shared by every command. Identical settings and inputs give
/// identical output.
#[derive(Debug, Clone, Args, Serialize)]
pub struct RunConfig {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Random triples (or pairs) to draw on top of the structured ones.
    #[arg(long, global = true, default_value_t = sampling::DEFAULT_SAMPLES, value_parser = at_least_one)]
    pub samples: usize,
    /// Step tolerance for the solver.
    #[arg(long, global = true, default_value_t = 1e-10, value_parser = positive)]
    pub tol: f64,
    /// Residual tolerance Δ(z, Tz) for the solver.
    #[arg(long, global = true, default_value_t = 1e-9, value_parser = positive)]
    pub residual_tol: f64,
    /// Iteration cap for the solver.
    #[arg(long, global = true, default_value_t = 10_000, value_parser = at_least_one)]
    pub max_iter: usize,
    /// Domain box `lo,hi` replacing the default box of an analytic space.
    #[arg(long = "box", global = true, value_parser = parse_box, allow_hyphen_values = true)]
    pub domain: Option<(f64, f64)>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Accept space files with asymmetric or otherwise invalid matrices.
    #[arg(long, global = true)]
    pub no_validate: bool,
}

fn at_least_one(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err(format!("`{s}` is not a positive integer")),
    }
}

fn positive(s: &str) -> std::result::Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("`{s}` is not a positive number")),
    }
}

#[derive(Debug, Parser)]
#[command(name = "suprametric", version, about = "Classify generalized metrics and solve fixed-point problems")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Command {
    /// Check every axiom class and fit its constants.
    Classify { space: String },
    /// Convert interpolative constants (alpha, c) into a b-metric index.
    Convert {
        alpha: f64,
        c: f64,
        /// Check on this space that the converted index holds wherever the
        /// interpolative axiom does.
        #[arg(long)]
        verify: Option<String>,
    },
    /// Iterate a self-map to its fixed point.
    Solve {
        space: String,
        /// Self-map (defaults to the gallery map).
        #[arg(long)]
        map: Option<String>,
        /// Starting point (defaults to the upper box corner, or point 0).
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<String>,
        /// Write the visited orbit as columns to this file.
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
    /// Sample the contraction inequality for a map and comparison function.
    Certify {
        space: String,
        #[arg(long)]
        map: Option<String>,
        /// Comparison function (defaults to the gallery one).
        #[arg(long)]
        theta: Option<String>,
        #[arg(long, value_enum, default_value_t = Kind::Ciric)]
        kind: Kind,
        /// Start of the probe orbit.
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<String>,
    },
    /// Search for a counterexample to a claimed class.
    Falsify {
        space: String,
        /// b_metric:s | strong_b:s | supra:s,c | strong_supra:s,c |
        /// interpolative:alpha,c | metric | symmetry
        claim: String,
    },
    /// Check a comparison function: monotone, subdiagonal, Θ₁ and Θ₂.
    Theta {
        theta: String,
        /// Iteration cap per probe.
        #[arg(long)]
        cap: Option<usize>,
        /// Threshold below which iterates count as zero.
        #[arg(long)]
        eps: Option<f64>,
    },
    /// List the gallery, or show one item.
    Gallery { name: Option<String> },
    /// Write a space in the finite-space file format.
    Export {
        space: String,
        /// Grid points for analytic spaces.
        #[arg(long, default_value_t = 16)]
        points: usize,
    },
}

/// What a run printed and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Runs one command. `args` includes the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code: EXIT_INVALID,
                }
            } else {
                Outcome {
                    stdout: text,
                    stderr: String::new(),
                    code: EXIT_OK,
                }
            };
        }
    };
    match execute(&cli.config, &cli.command) {
        Ok((body, code)) => Outcome {
            stdout: body,
            stderr: String::new(),
            code,
        },
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {e:#}\n"),
            code: EXIT_INVALID,
        },
    }
}

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    config: &'a RunConfig,
    #[serde(flatten)]
    command: &'a Command,
    result: T,
}

fn emit<T: Serialize>(cfg: &RunConfig, cmd: &Command, result: &T, text: impl FnOnce() -> String) -> Result<String> {
    Ok(match cfg.format {
        Format::Machine => {
            let mut s = machine::to_string(&Document {
                config: cfg,
                command: cmd,
                result,
            })?;
            s.push('\n');
            s
        }
        Format::Text => text(),
    })
}

fn sample_config(cfg: &RunConfig) -> SampleConfig {
    SampleConfig::with_seed(cfg.seed).samples(cfg.samples)
}

fn execute(cfg: &RunConfig, cmd: &Command) -> Result<(String, i32)> {
    match cmd {
        Command::Classify { space } => cmd_classify(cfg, cmd, space),
        Command::Convert { alpha, c, verify } => cmd_convert(cfg, cmd, *alpha, *c, verify.as_deref()),
        Command::Solve {
            space,
            map,
            x0,
            trace_out,
        } => cmd_solve(cfg, cmd, space, map.as_deref(), x0.as_deref(), trace_out.as_deref()),
        Command::Certify {
            space,
            map,
            theta,
            kind,
            x0,
        } => cmd_certify(cfg, cmd, space, map.as_deref(), theta.as_deref(), *kind, x0.as_deref()),
        Command::Falsify { space, claim } => cmd_falsify(cfg, cmd, space, claim),
        Command::Theta { theta, cap, eps } => cmd_theta(cfg, cmd, theta, *cap, *eps),
        Command::Gallery { name } => cmd_gallery(cfg, cmd, name.as_deref()),
        Command::Export { space, points } => cmd_export(cfg, space, *points),
    }
}

#[derive(Serialize)]
pub struct ClassifyResult {
    pub report: AxiomReport,
    /// Differences from the gallery's expected class, when there is one.
    pub expected_mismatches: Option<Vec<String>>,
}

fn cmd_classify(cfg: &RunConfig, cmd: &Command, space: &str) -> Result<(String, i32)> {
    // The semimetric check is the validation here, so a bad matrix is
    // reported with witnesses rather than rejected at load time.
    let space = resolve_space(space, cfg.domain, false)?;
    let ccfg = ClassifyConfig {
        sample: sample_config(cfg),
        ..Default::default()
    };
    let report = classify(&space.oracle, &ccfg)?;
    let code = if report.semimetric.ok { EXIT_OK } else { EXIT_SEMIMETRIC };
    let result = ClassifyResult {
        expected_mismatches: space.item.as_ref().map(|i| i.expected.mismatches(&report)),
        report,
    };
    let out = emit(cfg, cmd, &result, || render::classify(&result, space.item.as_ref()))?;
    Ok((out, code))
}

#[derive(Serialize)]
pub struct ConvertResult {
    pub alpha: f64,
    pub c: f64,
    pub s: f64,
    pub verify: Option<LemmaCheck>,
}

/// Wherever the interpolative axiom holds, the converted b-index must hold.
#[derive(Serialize)]
pub struct LemmaCheck {
    pub space: String,
    pub triples: usize,
    pub interpolative_ok: bool,
    pub b_metric_ok: bool,
    pub b_worst_slack: Option<f64>,
    pub implication_holds: bool,
}

fn cmd_convert(cfg: &RunConfig, cmd: &Command, alpha: f64, c: f64, verify: Option<&str>) -> Result<(String, i32)> {
    let s = interpolative_to_b_index(alpha, c)?;
    let verify = match verify {
        Some(name) => {
            let space = resolve_space(name, cfg.domain, !cfg.no_validate)?;
            let t = sampling::triples(&space.oracle, &sample_config(cfg))?;
            let interp = verify_on(&t, Axiom::Interpolative { alpha, c })?;
            let b = verify_on(&t, Axiom::BMetric { s })?;
            Some(LemmaCheck {
                space: name.to_string(),
                triples: t.len(),
                interpolative_ok: interp.ok,
                b_metric_ok: b.ok,
                b_worst_slack: b.worst.map(|w| w.slack),
                implication_holds: !interp.ok || b.ok,
            })
        }
        None => None,
    };
    let code = match &verify {
        Some(v) if !v.implication_holds => EXIT_VIOLATED,
        _ => EXIT_OK,
    };
    let result = ConvertResult { alpha, c, s, verify };
    Ok((emit(cfg, cmd, &result, || render::convert(&result))?, code))
}

fn pick_map(space: &Space, spec: Option<&str>) -> Result<SelfMap> {
    match spec {
        Some(m) => Ok(SelfMap::parse(m)?),
        None => space
            .item
            .as_ref()
            .and_then(|i| i.map.clone())
            .ok_or_else(|| anyhow!("this space has no default map; pass --map")),
    }
}

fn pick_theta(space: &Space, spec: Option<&str>) -> Result<ComparisonFn> {
    match spec {
        Some(t) => Ok(ComparisonFn::parse(t)?),
        None => space
            .item
            .as_ref()
            .and_then(|i| i.theta.clone())
            .ok_or_else(|| anyhow!("this space has no default comparison function; pass --theta")),
    }
}

fn default_start(space: &Space) -> Point {
    match space.oracle.carrier() {
        Carrier::Finite(_) => Point::Index(0),
        Carrier::Analytic { domain, .. } => Point::Coords(vec![domain.hi; domain.dim]),
    }
}

fn start_point(space: &Space, x0: Option<&str>) -> Result<Point> {
    match x0 {
        Some(t) => parse_point(t, &space.oracle),
        None => Ok(default_start(space)),
    }
}

#[derive(Serialize)]
pub struct SolveOutput {
    pub map: String,
    pub result: SolveResult,
    pub trace_written: Option<PathBuf>,
}

fn cmd_solve(
    cfg: &RunConfig,
    cmd: &Command,
    space: &str,
    map: Option<&str>,
    x0: Option<&str>,
    trace_out: Option<&std::path::Path>,
) -> Result<(String, i32)> {
    let space = resolve_space(space, cfg.domain, !cfg.no_validate)?;
    let map = pick_map(&space, map)?;
    let x0 = start_point(&space, x0)?;
    let scfg = SolveConfig {
        tol: cfg.tol,
        residual_tol: cfg.residual_tol,
        max_iter: cfg.max_iter,
        ..Default::default()
    };
    let (result, trace) = solve_fixed_point_traced(&map, &x0, &space.oracle, &scfg)?;
    if let Some(path) = trace_out {
        std::fs::write(path, trace.to_columns()).with_context(|| format!("cannot write {}", path.display()))?;
    }
    let code = if result.converged() { EXIT_OK } else { EXIT_NOT_CONVERGED };
    let out = SolveOutput {
        map: map.name(),
        result,
        trace_written: trace_out.map(|p| p.to_path_buf()),
    };
    Ok((emit(cfg, cmd, &out, || render::solve(&out))?, code))
}

#[derive(Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum OrbitProbe {
    Bounded { start: Point, bound: OrbitBound },
    Escaped { start: Point, iteration: usize, point: Point },
}

#[derive(Serialize)]
pub struct ThetaChecks {
    pub monotone: Option<MonotoneWitness>,
    pub subdiagonal: Option<SubdiagonalWitness>,
    pub theta1: ThetaVerdict,
}

#[derive(Serialize)]
pub struct CertifyOutput {
    pub map: String,
    pub certificate: ContractionCertificate,
    pub orbit: OrbitProbe,
    pub theta: ThetaChecks,
}

fn cmd_certify(
    cfg: &RunConfig,
    cmd: &Command,
    space: &str,
    map: Option<&str>,
    theta: Option<&str>,
    kind: Kind,
    x0: Option<&str>,
) -> Result<(String, i32)> {
    let space = resolve_space(space, cfg.domain, !cfg.no_validate)?;
    let map = pick_map(&space, map)?;
    let theta = pick_theta(&space, theta)?;
    let x0 = start_point(&space, x0)?;
    let pairs = certificate_pairs(&map, &space.oracle, &sample_config(cfg), Some(&x0), PROBE_ORBIT)?;
    let certificate = match kind {
        Kind::Ciric => check_ciric_contraction(&map, &space.oracle, &theta, &pairs)?,
        Kind::Plain => check_plain_contraction(&map, &space.oracle, &theta, &pairs)?,
    };
    let orbit = match run_orbit(&map, &x0, &space.oracle, PROBE_ORBIT) {
        Ok(trace) => OrbitProbe::Bounded {
            bound: check_orbit_bounded(&trace, &space.oracle, PROBE_ORBIT + 1)?,
            start: x0.clone(),
        },
        Err(CoreError::DomainEscape { iteration, point }) => OrbitProbe::Escaped {
            start: x0.clone(),
            iteration,
            point,
        },
        Err(e) => return Err(e.into()),
    };
    let theta_checks = ThetaChecks {
        monotone: check_monotone(&theta, &default_grid())?,
        subdiagonal: check_subdiagonal(&theta, &default_positive_grid())?,
        theta1: check_theta1(&theta, &ThetaConfig::default())?,
    };
    let code = if certificate.ok() { EXIT_OK } else { EXIT_VIOLATED };
    let out = CertifyOutput {
        map: map.name(),
        certificate,
        orbit,
        theta: theta_checks,
    };
    Ok((emit(cfg, cmd, &out, || render::certify(&out))?, code))
}

fn cmd_falsify(cfg: &RunConfig, cmd: &Command, space: &str, claim: &str) -> Result<(String, i32)> {
    // Symmetry claims are about the raw distance, so skip load-time checks.
    let claim = Claim::parse(claim)?;
    let validate = !cfg.no_validate && claim != Claim::Symmetry;
    let space = resolve_space(space, cfg.domain, validate)?;
    let fcfg = FalsifyConfig {
        sample: sample_config(cfg),
        ..Default::default()
    };
    let report = falsify(&space.oracle, &claim, &fcfg)?;
    let code = if report.found() { EXIT_OK } else { EXIT_NOT_FOUND };
    Ok((emit(cfg, cmd, &report, || render::falsify(&report))?, code))
}

#[derive(Serialize)]
pub struct ThetaOutput {
    pub theta: String,
    pub monotone: Option<MonotoneWitness>,
    pub subdiagonal: Option<SubdiagonalWitness>,
    pub theta1: ThetaVerdict,
    pub theta2: ThetaVerdict,
}

fn cmd_theta(cfg: &RunConfig, cmd: &Command, spec: &str, cap: Option<usize>, eps: Option<f64>) -> Result<(String, i32)> {
    let theta = ComparisonFn::parse(spec)?;
    let mut tcfg = ThetaConfig::default();
    if let Some(cap) = cap {
        tcfg.cap = cap;
    }
    if let Some(eps) = eps {
        tcfg.eps = eps;
    }
    let out = ThetaOutput {
        theta: theta.name(),
        monotone: check_monotone(&theta, &default_grid())?,
        subdiagonal: check_subdiagonal(&theta, &default_positive_grid())?,
        theta1: check_theta1(&theta, &tcfg)?,
        theta2: check_theta2(&theta, &tcfg)?,
    };
    Ok((emit(cfg, cmd, &out, || render::theta(&out))?, EXIT_OK))
}

fn cmd_gallery(cfg: &RunConfig, cmd: &Command, name: Option<&str>) -> Result<(String, i32)> {
    let items: Vec<GalleryItem> = match name {
        Some(n) => vec![suprametric_core::gallery::load_gallery(n)?],
        None => list_gallery(),
    };
    Ok((emit(cfg, cmd, &items, || render::gallery(&items))?, EXIT_OK))
}

fn cmd_export(cfg: &RunConfig, space: &str, points: usize) -> Result<(String, i32)> {
    let space = resolve_space(space, cfg.domain, !cfg.no_validate)?;
    if points < 2 {
        bail!("--points must be at least 2");
    }
    let finite = export_finite(&space.oracle, points)?;
    let mut out = spacefile::to_json(&finite)?;
    out.push('\n');
    Ok((out, EXIT_OK))
}
