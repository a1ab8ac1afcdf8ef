//! Command-line front end: argument parsing, dispatch and report emission.
//!
//! Exit codes: 0 success, 1 parse or I/O error, 2 the scenario fails
//! validation, 3 a numeric check breaches its tolerance.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::achronal::{normalized_affine, SpecKind};
use crate::analysis::{
    coincidence_probe, horizon_locate, lift_to_domain, random_cyl, sample_ads_points,
    sample_domain, visibility_slack, AnalysisError, LabeledPoint, LabeledPointCloud, Scenario,
};
use crate::boundary::achronality_check;
use crate::causal::BallTester;
use crate::csv::{to_csv_string, CsvError};
use crate::geometry::ads_matrix;
use crate::group::{limit_set, DEDUP_EPS};
use crate::isometry::classify_pair;
use crate::kerr::{
    holonomy_translation_check, kerr_metric, metric_max_abs_diff, pullback_check, BTZParams,
    KerrPoint, FD_STEP_1,
};
use crate::scenario::{load_scenario, LoadedScenario, ScenarioError};

#[derive(Debug, Parser)]
#[command(
    name = "btz",
    version,
    about = "Causal geometry of AdS3 quotients and BTZ black holes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the generators of a scenario.
    Classify(ScenarioArgs),
    /// Sample AdS and test membership in D(Γ) and C_∞(Γ).
    Domain(DomainArgs),
    /// Approximate the limit set of the scenario group.
    LimitSet(LimitSetArgs),
    /// Check the Kerr-like chart against the AdS metric.
    KerrVerify(KerrArgs),
    /// Locate the future horizon along vertical rays.
    Horizon(HorizonArgs),
    /// Labelled samples of the invisible domain.
    Sample(SampleArgs),
    /// Compare D(Γ) with C_∞(Γ) on random points.
    ProbeEgal(ProbeArgs),
    /// Check that the group acts as the elementary theory requires.
    Validate(ScenarioArgs),
}

#[derive(Debug, Args)]
pub struct ScenarioArgs {
    /// Scenario file (TOML).
    #[arg(long)]
    pub scenario: PathBuf,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DomainArgs {
    #[command(flatten)]
    pub io: ScenarioArgs,
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 4)]
    pub word_len: usize,
    #[arg(long, default_value_t = 4)]
    pub n_max: u32,
    /// Killing norm margin.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct LimitSetArgs {
    #[command(flatten)]
    pub io: ScenarioArgs,
    #[arg(long, default_value_t = 8)]
    pub word_len: usize,
}

#[derive(Debug, Args)]
pub struct KerrArgs {
    #[arg(long, default_value_t = 2.0)]
    pub r_plus: f64,
    #[arg(long, default_value_t = 1.0)]
    pub r_minus: f64,
    /// Number of random outer points.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest accepted residual.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HorizonArgs {
    #[command(flatten)]
    pub io: ScenarioArgs,
    /// Number of rays.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Bisection tolerance on the ray parameter.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub io: ScenarioArgs,
    /// Number of points; the scenario's sampling.n when absent.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Seed; the scenario's sampling.seed when absent.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    #[command(flatten)]
    pub io: ScenarioArgs,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 6)]
    pub word_len: usize,
    #[arg(long, default_value_t = 4)]
    pub n_max: u32,
    /// Killing norm margin for D membership.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Csv(#[from] CsvError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Scenario(_) | CliError::Csv(_) | CliError::Io { .. } => 1,
            CliError::Validation(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Validation { .. } => CliError::Validation(e.to_string()),
            e => CliError::Numeric(e.to_string()),
        }
    }
}

fn numeric(e: impl std::fmt::Display) -> CliError {
    CliError::Numeric(e.to_string())
}

/// Writes `body` to `out`, or to `stdout` when no path is given.
fn emit(out: &Option<PathBuf>, body: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    let io_err = |path: &Path| {
        let path = path.display().to_string();
        move |source| CliError::Io { path, source }
    };
    match out {
        Some(p) => std::fs::write(p, body).map_err(io_err(p)),
        None => stdout
            .write_all(body.as_bytes())
            .map_err(io_err(Path::new("<stdout>"))),
    }
}

fn say(stdout: &mut dyn Write, line: &str) -> Result<(), CliError> {
    writeln!(stdout, "{line}").map_err(|source| CliError::Io {
        path: "<stdout>".into(),
        source,
    })
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable report");
    s.push('\n');
    s
}

fn load(path: &Path) -> Result<LoadedScenario, CliError> {
    Ok(load_scenario(path)?)
}

fn load_validated(path: &Path) -> Result<Scenario, CliError> {
    Ok(load(path)?.into_scenario()?)
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match dispatch(cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

/// Parses `args` and runs; clap usage errors exit with 1, help and version with 0.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, stdout, stderr),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                1
            } else {
                let _ = write!(stdout, "{text}");
                0
            }
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Classify(a) => classify(a, stdout),
        Command::Validate(a) => validate(a, stdout),
        Command::Domain(a) => domain(a, stdout),
        Command::LimitSet(a) => limit_set_cmd(a, stdout),
        Command::KerrVerify(a) => kerr_verify(a, stdout),
        Command::Horizon(a) => horizon(a, stdout),
        Command::Sample(a) => sample(a, stdout),
        Command::ProbeEgal(a) => probe_egal(a, stdout),
    }
}

fn classify(a: ScenarioArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let s = load(&a.scenario)?;
    let gens: Vec<Value> = s
        .group
        .generators()
        .iter()
        .zip(s.group.labels())
        .map(|(g, label)| {
            let c = classify_pair(g);
            json!({
                "label": label,
                "tag": format!("{:?}", c.tag),
                "left": c.left.name(),
                "right": c.right.name(),
                "lambda": c.lambda,
                "mu": c.mu,
                "eta": c.eta,
                "same_sense": c.same_sense,
            })
        })
        .collect();
    let report = json!({
        "command": "classify",
        "scenario": s.id,
        "kind": s.kind.name(),
        "generators": gens,
    });
    emit(&a.out, &json_text(&report), stdout)
}

fn validate(a: ScenarioArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let s = load(&a.scenario)?;
    let r = s.validate();
    let summary = format!("{}, {}", s.group_summary(), r.message);
    let report = json!({
        "command": "validate",
        "scenario": s.id,
        "kind": s.kind.name(),
        "passed": r.passed,
        "clause": r.clause,
        "summary": summary,
    });
    match &a.out {
        Some(_) => {
            emit(&a.out, &json_text(&report), stdout)?;
            say(stdout, &summary)?;
        }
        None => emit(&None, &json_text(&report), stdout)?,
    }
    if r.passed {
        Ok(())
    } else {
        Err(CliError::Validation(format!(
            "{} ({})",
            summary,
            r.clause.unwrap_or_default()
        )))
    }
}

fn domain(a: DomainArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let s = load_validated(&a.io.scenario)?;
    let tester = BallTester::new(&s.group, a.word_len).map_err(numeric)?;
    let mut rows = Vec::with_capacity(a.samples);
    let mut counts = std::collections::BTreeMap::<&str, usize>::new();
    for c in sample_ads_points(a.samples, a.seed) {
        let v = c.to_vec22();
        let g = ads_matrix(v).map_err(numeric)?;
        let in_d = tester.in_d(g, a.tol);
        let in_c = tester.in_c_inf(v, a.n_max, 0.0).map_err(numeric)?;
        let label = match (in_d, in_c) {
            (true, true) => "d_and_c_inf",
            (true, false) => "d_only",
            (false, true) => "c_inf_only",
            (false, false) => "neither",
        };
        *counts.entry(label).or_default() += 1;
        let lifted = lift_to_domain(&s.spec, v);
        let visible = lifted.is_some_and(|l| visibility_slack(&s, l) > 0.0);
        rows.push(LabeledPoint {
            v,
            cyl: lifted.unwrap_or(c),
            label: label.into(),
            visible,
            scenario_id: s.id.clone(),
        });
    }
    emit(
        &a.io.out,
        &to_csv_string(&LabeledPointCloud { rows })?,
        stdout,
    )?;
    if a.io.out.is_some() {
        let report = json!({
            "command": "domain", "scenario": s.id, "samples": a.samples, "seed": a.seed,
            "word_len": a.word_len, "n_max": a.n_max, "tol": a.tol, "counts": counts,
        });
        say(stdout, &serde_json::to_string(&report).unwrap())?;
    }
    Ok(())
}

fn limit_set_cmd(a: LimitSetArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let s = load(&a.io.scenario)?;
    let ls = limit_set(&s.group, a.word_len, DEDUP_EPS).map_err(numeric)?;
    let pts = ls.ein_points();
    let weak = achronality_check(&pts, false);
    let strict = achronality_check(&pts, true);
    let points: Vec<Value> = ls
        .points
        .iter()
        .map(|p| {
            json!({
                "phi": p.point.phi,
                "theta": p.point.theta,
                "word": p.word,
                "vector": [p.vector.x1, p.vector.x2, p.vector.y1, p.vector.y2],
            })
        })
        .collect();
    let report = json!({
        "command": "limit-set",
        "scenario": s.id,
        "word_len": a.word_len,
        "dedup": DEDUP_EPS,
        "n_points": pts.len(),
        "skipped": ls.skipped.len(),
        "achronal": weak.achronal,
        "strictly_achronal": strict.achronal,
        "points": points,
    });
    emit(&a.io.out, &json_text(&report), stdout)?;
    if a.io.out.is_some() {
        say(
            stdout,
            &format!("{} points, achronal = {}", pts.len(), weak.achronal),
        )?;
    }
    if weak.achronal {
        Ok(())
    } else {
        Err(CliError::Numeric(format!(
            "limit set is not achronal: {:?}",
            weak.offending
        )))
    }
}

fn kerr_verify(a: KerrArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let params = BTZParams::new(a.r_plus, a.r_minus).map_err(|e| {
        CliError::Scenario(ScenarioError::Invalid {
            line: 0,
            col: 0,
            message: e.to_string(),
        })
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let (mut metric, mut holonomy) = (0.0f64, 0.0f64);
    for _ in 0..a.samples {
        let p = KerrPoint::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
            rng.gen_range(a.r_plus + 0.1..10.0),
        );
        let fd = pullback_check(&params, p, FD_STEP_1).map_err(numeric)?;
        let exact = kerr_metric(&params, p.r).map_err(numeric)?;
        metric = metric.max(metric_max_abs_diff(&fd, &exact));
        holonomy = holonomy.max(
            holonomy_translation_check(&params, p)
                .map_err(numeric)?
                .residual,
        );
    }
    let report = json!({
        "command": "kerr-verify",
        "r_plus": a.r_plus, "r_minus": a.r_minus, "samples": a.samples, "seed": a.seed,
        "tol": a.tol, "fd_step": FD_STEP_1,
        "max_metric_residual": metric,
        "max_holonomy_residual": holonomy,
        "passed": metric < a.tol && holonomy < a.tol,
    });
    emit(&a.out, &json_text(&report), stdout)?;
    if a.out.is_some() {
        say(
            stdout,
            &format!("max metric residual {metric:e}, max holonomy residual {holonomy:e}"),
        )?;
    }
    if metric < a.tol && holonomy < a.tol {
        Ok(())
    } else {
        Err(CliError::Numeric(format!(
            "residuals {metric:e} / {holonomy:e} exceed tolerance {:e}",
            a.tol
        )))
    }
}

/// Largest accepted distance of a located point from the horizon plane.
const HORIZON_PLANE_TOL: f64 = 1e-5;

fn horizon(a: HorizonArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let s = load_validated(&a.io.scenario)?;
    let splitting = matches!(s.spec.kind, SpecKind::Splitting { .. });
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut rows = Vec::with_capacity(a.samples);
    let (mut rays, mut no_straddle, mut worst) = (0usize, 0usize, 0.0f64);
    let mut tries = 0usize;
    while rays < a.samples {
        tries += 1;
        if tries > 1000 * a.samples.max(1) {
            break;
        }
        let c = random_cyl(&mut rng);
        let v = c.to_vec22();
        let Some(l) = lift_to_domain(&s.spec, v) else {
            continue;
        };
        if visibility_slack(&s, l) <= 1e-3 {
            continue;
        }
        rays += 1;
        match horizon_locate(&s, v, [std::f64::consts::PI, 0.0, 0.0], a.tol) {
            Ok(h) => {
                if splitting {
                    if let Some([_, y, z]) = normalized_affine(&s.spec, h.point) {
                        worst = worst.max((z - y.abs()).abs());
                    }
                }
                rows.push(LabeledPoint {
                    v: h.point,
                    cyl: h.cyl,
                    label: "horizon".into(),
                    visible: false,
                    scenario_id: s.id.clone(),
                });
            }
            Err(AnalysisError::NoStraddle { .. }) => no_straddle += 1,
            Err(e) => return Err(e.into()),
        }
    }
    emit(
        &a.io.out,
        &to_csv_string(&LabeledPointCloud { rows })?,
        stdout,
    )?;
    let report = json!({
        "command": "horizon", "scenario": s.id, "rays": rays, "seed": a.seed, "tol": a.tol,
        "no_straddle": no_straddle, "max_plane_residual": if splitting { Some(worst) } else { None },
    });
    if a.io.out.is_some() {
        say(stdout, &serde_json::to_string(&report).unwrap())?;
    }
    if worst > HORIZON_PLANE_TOL {
        return Err(CliError::Numeric(format!(
            "horizon plane residual {worst:e}"
        )));
    }
    Ok(())
}

fn sample(a: SampleArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let s = load_validated(&a.io.scenario)?;
    let n = a.samples.unwrap_or(s.sampling.n);
    let seed = a.seed.unwrap_or(s.sampling.seed);
    let cloud = sample_domain(&s, n, seed)?;
    emit(&a.io.out, &to_csv_string(&cloud)?, stdout)?;
    if a.io.out.is_some() {
        let report = json!({
            "command": "sample", "scenario": s.id, "samples": n, "seed": seed,
            "margin": s.tolerances.margin, "labels": cloud.label_counts(),
        });
        say(stdout, &serde_json::to_string(&report).unwrap())?;
    }
    Ok(())
}

fn probe_egal(a: ProbeArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let s = load_validated(&a.io.scenario)?;
    let r = coincidence_probe(&s.group, a.samples, a.word_len, a.n_max, a.tol, a.seed)?;
    let red_flag = s.group.rank() >= 2 && r.d_only > 0;
    let mut report = serde_json::to_value(&r).expect("serializable report");
    report["command"] = json!("probe-egal");
    report["scenario"] = json!(s.id);
    report["seed"] = json!(a.seed);
    report["red_flag"] = json!(red_flag);
    emit(&a.io.out, &json_text(&report), stdout)?;
    if a.io.out.is_some() {
        say(
            stdout,
            &format!(
                "D-only fraction {} ({} of {})",
                r.d_only_fraction, r.d_only, r.d_members
            ),
        )?;
    }
    if red_flag {
        Err(CliError::Numeric(format!(
            "{} D-members fail C_inf on a non-cyclic scenario",
            r.d_only
        )))
    } else {
        Ok(())
    }
}
