//! Command-line front end for `hvl-core`: spec files, presets, reports, and the
//! falsification sweep.
//!
//! Exit codes: 0 success, 1 input/parse/domain error, 2 hypothesis or valence claim not
//! confirmed, 3 computation failure, 4 counterexample candidates found.

pub mod spec_file;
pub mod sweep;

use clap::{Args, Parser, Subcommand};
use hvl_core::geometry::{trace_circle, CurveTrace};
use hvl_core::render::render_scene;
use hvl_core::valence::{cross_check, newton_preimages, valence_scan, NewtonConfig, PreimageSet};
use hvl_core::{check_theorem, Complex64, CriterionConfig, Error, QuadratureConfig, RenderOptions};
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;
use std::path::PathBuf;

pub use spec_file::{PresetName, SpecFile};
pub use sweep::{run_sweep, SweepConfig, SweepReport, SweepSample};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_COMPUTATION: i32 = 3;
pub const EXIT_CANDIDATES: i32 = 4;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Domain { .. } | Error::InvalidSpec(_) | Error::InvalidParameter(_) => EXIT_INPUT,
            _ => EXIT_COMPUTATION,
        };
        CliError::new(code, e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "hvl", version, about = "Verify, trace and render multivalent harmonic mappings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count the roots of F(t) = 2k pi and check the hypotheses.
    Verify(VerifyArgs),
    /// Write f on a circle as CSV.
    Trace(TraceArgs),
    /// Write an SVG of the image domain.
    Render(RenderArgs),
    /// Scan winding numbers over a probe grid.
    Valence(ValenceArgs),
    /// Compare the winding number about a point with Newton preimages.
    Oracle(OracleArgs),
    /// Random search for counterexamples to p-valence.
    Conjecture(ConjectureArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Spec file path or `preset:<name>`.
    #[arg(short = 'i', long)]
    pub input: String,
    /// Quadrature tolerance (absolute and relative).
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output path; stdout when omitted.
    #[arg(short = 'o', long = "report", visible_alias = "out")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Phase grid size (power of two, >= 1024).
    #[arg(long, default_value_t = 8192)]
    pub samples: usize,
    #[arg(long, default_value_t = 1e-12)]
    pub bisect_tol: f64,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long, visible_alias = "points", default_value_t = 4096)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Samples per curve.
    #[arg(long, default_value_t = 2048)]
    pub samples: usize,
    /// Radius of the outline curve.
    #[arg(long, default_value_t = 1.0 - 1e-6)]
    pub radius: f64,
    #[arg(long, default_value_t = 24)]
    pub rays: usize,
    #[arg(long, default_value_t = 800)]
    pub width: u32,
    #[arg(long, default_value_t = 800)]
    pub height: u32,
    #[arg(long)]
    pub no_cusps: bool,
}

#[derive(Debug, Args)]
pub struct ValenceArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long, default_value_t = 0.999)]
    pub radius: f64,
    /// Probe grid as WxH.
    #[arg(long, default_value = "64x64", value_parser = parse_grid)]
    pub grid: (usize, usize),
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Target value as `re,im`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_point)]
    pub point: Complex64,
    #[arg(long, default_value_t = 0.999)]
    pub radius: f64,
    /// Newton starting points.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct ConjectureArgs {
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    #[arg(long, default_value_t = 1)]
    pub p: u32,
    #[arg(long, default_value_t = 2)]
    pub m: u32,
    #[arg(long, default_value_t = 4)]
    pub max_degree: u32,
    #[arg(long, default_value_t = 0.2)]
    pub scale: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.0)]
    pub margin: f64,
    #[arg(long, default_value = "64x64", value_parser = parse_grid)]
    pub grid: (usize, usize),
    /// Stop after this many samples pass the margin filter.
    #[arg(long)]
    pub kept: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
}

pub fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected WxH, got `{s}`"))?;
    let w: usize = w.trim().parse().map_err(|e| format!("bad width: {e}"))?;
    let h: usize = h.trim().parse().map_err(|e| format!("bad height: {e}"))?;
    if w == 0 || h == 0 {
        return Err("grid dimensions must be positive".into());
    }
    Ok((w, h))
}

pub fn parse_point(s: &str) -> Result<Complex64, String> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| format!("expected re,im, got `{s}`"))?;
    let re: f64 = re.trim().parse().map_err(|e| format!("bad real part: {e}"))?;
    let im: f64 = im.trim().parse().map_err(|e| format!("bad imaginary part: {e}"))?;
    Ok(Complex64::new(re, im))
}

/// Sizes the global rayon pool from `HVL_THREADS` (unset or 0: one thread per core).
pub fn configure_threads() -> Result<(), CliError> {
    let threads = match std::env::var("HVL_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::new(EXIT_INPUT, format!("HVL_THREADS must be an integer, got `{v}`")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::new(EXIT_COMPUTATION, e.to_string()))
}

fn quadrature(tol: Option<f64>) -> Result<QuadratureConfig, CliError> {
    let mut cfg = QuadratureConfig::default();
    if let Some(t) = tol {
        cfg.abs_tol = t;
        cfg.rel_tol = t;
    }
    cfg.validate()?;
    Ok(cfg)
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: &'static str,
    command: &'static str,
    input: &'a str,
    #[serde(flatten)]
    body: T,
}

fn to_json<T: Serialize>(command: &'static str, input: &str, body: T) -> Result<String, CliError> {
    let env = Envelope {
        schema_version: SCHEMA_VERSION,
        command,
        input,
        body,
    };
    let mut text = serde_json::to_string_pretty(&env)
        .map_err(|e| CliError::new(EXIT_COMPUTATION, format!("serialization failed: {e}")))?;
    text.push('\n');
    Ok(text)
}

fn emit(dest: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    let written = match dest {
        Some(path) => std::fs::write(path, text),
        None => stdout.write_all(text.as_bytes()),
    };
    written.map_err(|e| CliError::new(EXIT_INPUT, format!("write failed: {e}")))
}

/// Runs one command; returns the process exit code. Diagnostics go to `stderr`.
pub fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match dispatch(cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Verify(a) => verify(a, stdout, stderr),
        Command::Trace(a) => trace(a, stdout, stderr),
        Command::Render(a) => render(a, stdout),
        Command::Valence(a) => valence(a, stdout, stderr),
        Command::Oracle(a) => oracle(a, stdout, stderr),
        Command::Conjecture(a) => conjecture(a, stdout, stderr),
    }
}

fn verify(a: &VerifyArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    let map = SpecFile::load(&a.input.input)?.build()?;
    let qcfg = quadrature(a.input.tol)?;
    let cfg = CriterionConfig {
        grid_size: a.samples,
        bisect_tol: a.bisect_tol,
        ..Default::default()
    };
    cfg.validate()?;
    let report = check_theorem(&map, &cfg, &qcfg);
    emit(&a.output.output, &to_json("verify", &a.input.input, &report)?, stdout)?;
    if report.theorem_applies {
        Ok(EXIT_OK)
    } else {
        for note in &report.notes {
            let _ = writeln!(stderr, "note: {note}");
        }
        let _ = writeln!(stderr, "theorem does not apply");
        Ok(EXIT_HYPOTHESIS)
    }
}

fn trace(a: &TraceArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    let map = SpecFile::load(&a.input.input)?.build()?;
    let qcfg = quadrature(a.input.tol)?;
    let trace: CurveTrace = match trace_circle(&map, a.radius, a.samples, &qcfg) {
        Ok(t) => t,
        Err(e @ (Error::Domain { .. } | Error::InvalidParameter(_))) => return Err(e.into()),
        Err(e) => {
            let failing: Vec<f64> = hvl_core::function::uniform_angles(a.samples)
                .collect::<Vec<_>>()
                .into_par_iter()
                .filter(|&t| map.eval_f_polar(a.radius, t, &qcfg).is_err())
                .collect();
            for t in failing {
                let _ = writeln!(stderr, "evaluation failed at t = {t:.16e}");
            }
            return Err(e.into());
        }
    };
    emit(&a.output.output, &trace.to_csv(), stdout)?;
    Ok(EXIT_OK)
}

fn render(a: &RenderArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let map = SpecFile::load(&a.input.input)?.build()?;
    let qcfg = quadrature(a.input.tol)?;
    let opts = RenderOptions {
        samples_per_curve: a.samples,
        max_radius: a.radius,
        ray_count: a.rays,
        width_px: a.width,
        height_px: a.height,
        show_cusps: !a.no_cusps,
        ..Default::default()
    };
    opts.validate()?;
    let report = (!a.no_cusps).then(|| check_theorem(&map, &CriterionConfig::default(), &qcfg));
    let svg = render_scene(&map, report.as_ref(), &opts, &qcfg)
        .map_err(|e| CliError::new(EXIT_COMPUTATION, e.to_string()))?;
    emit(&a.output.output, &svg, stdout)?;
    Ok(EXIT_OK)
}

fn valence(a: &ValenceArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    let map = SpecFile::load(&a.input.input)?.build()?;
    let qcfg = quadrature(a.input.tol)?;
    let report = valence_scan(&map, a.radius, a.grid, &qcfg).map_err(|e| match e {
        Error::InvalidParameter(_) => CliError::from(e),
        other => CliError::new(EXIT_COMPUTATION, other.to_string()),
    })?;
    emit(&a.output.output, &to_json("valence", &a.input.input, &report)?, stdout)?;
    if report.consistent_with_p {
        Ok(EXIT_OK)
    } else {
        let _ = writeln!(
            stderr,
            "maximum winding {} differs from p = {}",
            report.max_valence, report.p
        );
        Ok(EXIT_HYPOTHESIS)
    }
}

#[derive(Serialize)]
struct OracleBody {
    cross_check: hvl_core::valence::CrossCheck,
    newton: PreimageSet,
}

fn oracle(a: &OracleArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    let map = SpecFile::load(&a.input.input)?.build()?;
    let qcfg = quadrature(a.input.tol)?;
    let check = cross_check(&map, a.point, a.radius, a.samples, None, &qcfg)?;
    let newton = newton_preimages(&map, a.point, a.samples, &NewtonConfig::default(), &qcfg)?;
    let agrees = check.agrees();
    emit(
        &a.output.output,
        &to_json("oracle", &a.input.input, OracleBody { cross_check: check, newton })?,
        stdout,
    )?;
    match agrees {
        Some(false) => {
            let _ = writeln!(stderr, "winding number and Newton preimage count disagree");
            Ok(EXIT_COMPUTATION)
        }
        _ => Ok(EXIT_OK),
    }
}

fn conjecture(a: &ConjectureArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = SweepConfig {
        trials: a.trials,
        p: a.p,
        m: a.m,
        max_degree: a.max_degree,
        coefficient_scale: a.scale,
        seed: a.seed,
        margin_requirement: a.margin,
        grid: a.grid,
        target_kept: a.kept,
    };
    let qcfg = quadrature(a.tol)?;
    let report = run_sweep(&cfg, &qcfg)?;
    emit(&a.output.output, &to_json("conjecture", "sweep", &report)?, stdout)?;
    let code = sweep_exit_code(&report)?;
    if code == EXIT_CANDIDATES {
        let _ = writeln!(
            stderr,
            "{} COUNTEREXAMPLE CANDIDATE(S): review at higher precision before drawing conclusions",
            report.candidates
        );
    } else if report.scan_failures > 0 {
        let _ = writeln!(stderr, "{} kept sample(s) could not be scanned", report.scan_failures);
    }
    Ok(code)
}

/// Exit status of a finished sweep: 3 when nothing passed the margin filter, 4 when any
/// kept sample covers some value more than `p` times, 0 otherwise.
pub fn sweep_exit_code(report: &SweepReport) -> Result<i32, CliError> {
    if report.kept == 0 {
        return Err(CliError::new(
            EXIT_COMPUTATION,
            "acceptance region empty; lower coefficient_scale",
        ));
    }
    Ok(if report.candidates > 0 { EXIT_CANDIDATES } else { EXIT_OK })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_and_point_parsing() {
        assert_eq!(parse_grid("64x32"), Ok((64, 32)));
        assert!(parse_grid("64").is_err());
        assert!(parse_grid("0x4").is_err());
        assert_eq!(parse_point("-0.5, 1e-3"), Ok(Complex64::new(-0.5, 1e-3)));
        assert!(parse_point("1").is_err());
    }

    #[test]
    fn error_codes_follow_kind() {
        assert_eq!(CliError::from(Error::Domain { z: Complex64::new(2.0, 0.0) }).code, EXIT_INPUT);
        assert_eq!(
            CliError::from(Error::ScanQuality { indeterminate: 9, total: 10 }).code,
            EXIT_COMPUTATION
        );
    }
}
