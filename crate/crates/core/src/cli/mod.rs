//! The `friedmann-lab` command line.
//!
//! ```text
//! friedmann-lab <classify|markers|evolve|invert|sweep> [--config FILE]
//!     [--alpha A --beta B --gamma C | --G G --c C --lambda L --mass M]
//!     [--epsilon E] [--radiation --delta X] [--format csv|json]
//!     [--out PATH] [--precision N]
//! ```
//!
//! Exit codes: 0 success, 2 invalid parameters, 3 degenerate discriminant,
//! 4 wrong regime, 5 forbidden start, 6 integration failure.

mod report;
mod scenario;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::cubic::{self, RegimeTag, RootStructure};
use crate::dynamics::{self, Trajectory};
use crate::markers;
use crate::params::{Curvature, PhysicalParams, ReducedParams};
use crate::{Error, Result};

pub use report::{format_num, Report, Value};
pub use scenario::{parse_number, Format, OutputSettings, ParamSource, ScenarioConfig, Settings};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;
pub const EXIT_WRONG_REGIME: i32 = 4;
pub const EXIT_FORBIDDEN_START: i32 = 5;
pub const EXIT_INTEGRATION: i32 = 6;

/// Log verbosity variable, read by the binary.
pub const LOG_ENV: &str = "FRIEDMANN_LAB_LOG";

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidParameter(_) | Error::RadiationNotSupported { .. } => EXIT_INVALID,
        Error::DegenerateDiscriminant { .. } => EXIT_DEGENERATE,
        Error::WrongRegime { .. } | Error::NoExtremumInSpan => EXIT_WRONG_REGIME,
        Error::ForbiddenStart { .. } => EXIT_FORBIDDEN_START,
        Error::StepFailure { .. } | Error::SingularityFloor { .. } => EXIT_INTEGRATION,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "friedmann-lab",
    version,
    about = "Friedmann equation regimes, markers and trajectories"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub scenario: ScenarioArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Regime, discriminant and root structure.
    Classify,
    /// Closed-form markers of the D > 0, epsilon = +1 regime.
    Markers,
    /// Integrate R(t); samples as CSV, events as a report.
    Evolve,
    /// Cosmological constant from the minimal Hubble value.
    Invert {
        #[arg(long = "h-min", allow_hyphen_values = true)]
        h_min: Option<String>,
    },
    /// Regime tag and D over a two-parameter grid.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long = "x-param")]
    pub x_param: Option<String>,
    #[arg(long = "x-min", allow_hyphen_values = true)]
    pub x_min: Option<String>,
    #[arg(long = "x-max", allow_hyphen_values = true)]
    pub x_max: Option<String>,
    #[arg(long = "x-steps")]
    pub x_steps: Option<String>,
    #[arg(long = "y-param")]
    pub y_param: Option<String>,
    #[arg(long = "y-min", allow_hyphen_values = true)]
    pub y_min: Option<String>,
    #[arg(long = "y-max", allow_hyphen_values = true)]
    pub y_max: Option<String>,
    #[arg(long = "y-steps")]
    pub y_steps: Option<String>,
}

/// Flags shared by every subcommand; each mirrors a scenario-file key.
#[derive(Debug, Args, Default)]
pub struct ScenarioArgs {
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub alpha: Option<String>,
    #[arg(long, global = true)]
    pub beta: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub epsilon: Option<String>,
    #[arg(long, global = true)]
    pub delta: Option<String>,
    #[arg(long, global = true)]
    pub radiation: bool,
    #[arg(long = "G", global = true)]
    pub g: Option<String>,
    #[arg(long = "c", global = true)]
    pub c: Option<String>,
    #[arg(long, global = true)]
    pub lambda: Option<String>,
    #[arg(long, global = true)]
    pub mass: Option<String>,
    #[arg(long = "r-start", global = true)]
    pub r_start: Option<String>,
    #[arg(long = "t-span", global = true)]
    pub t_span: Option<String>,
    #[arg(long, global = true)]
    pub direction: Option<String>,
    #[arg(long = "rel-tol", global = true)]
    pub rel_tol: Option<String>,
    #[arg(long = "abs-tol", global = true)]
    pub abs_tol: Option<String>,
    #[arg(long = "max-step", global = true)]
    pub max_step: Option<String>,
    #[arg(long = "r-max", global = true)]
    pub r_max: Option<String>,
    #[arg(long = "r-floor", global = true)]
    pub r_floor: Option<String>,
    #[arg(long, global = true)]
    pub format: Option<String>,
    #[arg(long, global = true)]
    pub out: Option<String>,
    #[arg(long, global = true)]
    pub precision: Option<String>,
}

impl ScenarioArgs {
    fn settings(&self) -> Result<Settings> {
        let mut s = Settings::default();
        let pairs = [
            ("alpha", &self.alpha),
            ("beta", &self.beta),
            ("gamma", &self.gamma),
            ("epsilon", &self.epsilon),
            ("delta", &self.delta),
            ("G", &self.g),
            ("c", &self.c),
            ("lambda", &self.lambda),
            ("mass", &self.mass),
            ("r_start", &self.r_start),
            ("t_span", &self.t_span),
            ("direction", &self.direction),
            ("rel_tol", &self.rel_tol),
            ("abs_tol", &self.abs_tol),
            ("max_step", &self.max_step),
            ("r_max", &self.r_max),
            ("r_floor", &self.r_floor),
            ("format", &self.format),
            ("out", &self.out),
            ("precision", &self.precision),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                s.set(key, v.clone())?;
            }
        }
        if self.radiation {
            s.set("radiation", "true")?;
        }
        Ok(s)
    }
}

/// Result of one invocation: what goes to stdout/stderr and the exit code.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn failure(err: &Error) -> Self {
        Outcome {
            code: exit_code(err),
            stdout: String::new(),
            stderr: format!("error: {err}\n"),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code: EXIT_INVALID,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match execute(&cli) {
        Ok(outcome) => outcome,
        Err(e) => Outcome::failure(&e),
    }
}

fn load_settings(cli: &Cli) -> Result<Settings> {
    let file = match &cli.scenario.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| {
                Error::invalid(format!("cannot read config {}: {e}", path.display()))
            })?;
            Settings::parse(&text)?
        }
        None => Settings::default(),
    };
    let mut flags = cli.scenario.settings()?;
    match &cli.command {
        Command::Invert { h_min: Some(h) } => flags.set("h_min", h.clone())?,
        Command::Sweep(a) => {
            for (k, v) in [
                ("x_param", &a.x_param),
                ("x_min", &a.x_min),
                ("x_max", &a.x_max),
                ("x_steps", &a.x_steps),
                ("y_param", &a.y_param),
                ("y_min", &a.y_min),
                ("y_max", &a.y_max),
                ("y_steps", &a.y_steps),
            ] {
                if let Some(v) = v {
                    flags.set(k, v.clone())?;
                }
            }
        }
        _ => {}
    }
    Ok(file.overlay(flags))
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    let settings = load_settings(cli)?;
    match cli.command {
        Command::Classify => {
            let scenario = ScenarioConfig::from_settings(settings, Format::Json)?;
            cmd_classify(&scenario)
        }
        Command::Markers => {
            let scenario = ScenarioConfig::from_settings(settings, Format::Json)?;
            cmd_markers(&scenario)
        }
        Command::Evolve => {
            let scenario = ScenarioConfig::from_settings(settings, Format::Json)?;
            cmd_evolve(&scenario)
        }
        Command::Invert { .. } => cmd_invert(&settings),
        Command::Sweep(_) => cmd_sweep(&settings),
    }
}

fn render(report: &Report, output: &OutputSettings) -> String {
    match output.format {
        Format::Json => report.to_json(output.precision),
        Format::Csv => report.to_csv(output.precision),
    }
}

/// Writes `text` to `--out` when given, otherwise returns it for stdout.
fn emit(text: String, out: Option<&Path>) -> Result<String> {
    match out {
        Some(path) => {
            write_file(path, &text)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text)
        .map_err(|e| Error::invalid(format!("cannot write {}: {e}", path.display())))
}

fn roots_value(roots: &RootStructure) -> Value {
    let map = |kind: &str, fields: &[(&str, f64)]| {
        let mut entries = vec![("kind".to_string(), Value::from(kind))];
        entries.extend(fields.iter().map(|(k, v)| (k.to_string(), Value::Num(*v))));
        Value::Map(entries)
    };
    match *roots {
        RootStructure::OneRealPlusPair { r0, x0, y0 } => {
            map("one-real-plus-pair", &[("r0", r0), ("x0", x0), ("y0", y0)])
        }
        RootStructure::ThreeReal { r0neg, r1, r2, phi } => map(
            "three-real",
            &[("r0neg", r0neg), ("r1", r1), ("r2", r2), ("phi", phi)],
        ),
        RootStructure::Degenerate => map("degenerate", &[]),
    }
}

fn interval_value(i: &cubic::Interval) -> Value {
    Value::Map(vec![
        ("lower".into(), Value::Num(i.lower)),
        (
            "upper".into(),
            if i.upper.is_finite() {
                Value::Num(i.upper)
            } else {
                Value::Null
            },
        ),
        ("lower_closed".into(), Value::Bool(i.lower_closed)),
        ("upper_closed".into(), Value::Bool(i.upper_closed)),
    ])
}

fn params_value(p: &ReducedParams) -> Value {
    Value::Map(vec![
        ("alpha".into(), Value::Num(p.alpha())),
        ("beta".into(), Value::Num(p.beta())),
        ("gamma".into(), Value::Num(p.gamma())),
        ("epsilon".into(), Value::Int(p.epsilon().sign().into())),
        ("delta".into(), Value::Num(p.delta())),
    ])
}

pub fn classify_report(params: &ReducedParams) -> Result<Report> {
    let regime = cubic::classify(params)?;
    let disc = cubic::discriminant(params);
    let mut r = Report::new();
    r.push("command", "classify")
        .push("params", params_value(params))
        .push("regime", regime.tag.as_str())
        .push("p", regime.p)
        .push("q", regime.q)
        .push("D", regime.d)
        .push("degeneracy_tolerance", disc.tolerance)
        .push("roots", roots_value(&regime.roots))
        .push(
            "admissible_regions",
            Value::List(
                regime
                    .admissible_regions
                    .iter()
                    .map(interval_value)
                    .collect(),
            ),
        )
        .push(
            "forbidden_interval",
            match regime.forbidden_interval {
                Some((a, b)) => Value::List(vec![Value::Num(a), Value::Num(b)]),
                None => Value::Null,
            },
        );
    Ok(r)
}

/// Regime report; exits 3 (with the report still printed) when D is
/// degenerate.
pub fn cmd_classify(scenario: &ScenarioConfig) -> Result<Outcome> {
    let params = scenario.reduced()?;
    let report = classify_report(&params)?;
    let degenerate = report.get("regime") == Some(&Value::from(RegimeTag::Degenerate.as_str()));
    let stdout = emit(
        render(&report, &scenario.output),
        scenario.output.out.as_deref(),
    )?;
    Ok(Outcome {
        code: if degenerate { EXIT_DEGENERATE } else { EXIT_OK },
        stderr: if degenerate {
            "warning: degenerate discriminant (branching case)\n".into()
        } else {
            String::new()
        },
        stdout,
    })
}

pub fn markers_report(params: &ReducedParams, phys: Option<&PhysicalParams>) -> Result<Report> {
    let matter = params.matter_only();
    let m = markers::marker_set(&matter)?;
    let mut r = Report::new();
    r.push("command", "markers")
        .push("params", params_value(params))
        .push("regime", RegimeTag::CaseIIii.as_str())
        .push("r_w", m.r_w)
        .push("r_min", m.r_min)
        .push("r_wh", m.r_wh)
        .push("h_min_sq", m.h_min_sq)
        .push("h_min", m.h_min_sq.sqrt())
        .push("h_w_sq", m.h_w_sq)
        .push("h_inf", m.h_inf)
        .push("speed_bound", m.speed_bound)
        .push(
            "h_w_vs_asymptote",
            markers::h_at_r_turning_vs_asymptote(&matter)?.to_string(),
        );
    if let Some(phys) = phys {
        r.push(
            "physical",
            Value::Map(vec![
                ("lambda".into(), Value::Num(phys.lambda)),
                (
                    "lambda_min".into(),
                    Value::Num(markers::lambda_lower_bound(phys)?),
                ),
                ("r_min".into(), Value::Num(markers::r_min_physical(phys)?)),
                ("h_min".into(), Value::Num(markers::h_min_physical(phys)?)),
            ]),
        );
    }
    if params.delta() > 0.0 {
        r.push(
            "radiation",
            Value::Map(vec![
                ("delta".into(), Value::Num(params.delta())),
                (
                    "r_min".into(),
                    Value::Num(markers::radiation_corrected_rmin(params)?),
                ),
            ]),
        );
    }
    Ok(r)
}

pub fn cmd_markers(scenario: &ScenarioConfig) -> Result<Outcome> {
    let params = scenario.reduced()?;
    let report = markers_report(&params, scenario.physical().as_ref())?;
    Ok(Outcome {
        code: EXIT_OK,
        stdout: emit(
            render(&report, &scenario.output),
            scenario.output.out.as_deref(),
        )?,
        stderr: String::new(),
    })
}

/// Header and rows `t,R,Rdot,H`.
pub fn trajectory_csv(traj: &Trajectory, precision: usize) -> String {
    let mut out = String::from("t,R,Rdot,H\n");
    for s in &traj.samples {
        let row = [s.t, s.r, s.rdot, s.h].map(|x| format_num(x, precision));
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn evolve_report(traj: &Trajectory, status: &str) -> Report {
    let last = traj.samples.last().copied();
    let events = traj
        .events
        .iter()
        .map(|e| {
            Value::Map(vec![
                ("kind".into(), Value::from(e.kind.as_str())),
                ("t".into(), Value::Num(e.t)),
                ("R".into(), Value::Num(e.r)),
                ("Rdot".into(), Value::Num(e.rdot)),
                ("H".into(), Value::Num(e.h)),
            ])
        })
        .collect();
    let mut r = Report::new();
    r.push("command", "evolve")
        .push("params", params_value(traj.params()))
        .push("status", status)
        .push("samples", traj.samples.len())
        .push("t_end", last.map_or(f64::NAN, |s| s.t))
        .push("r_end", last.map_or(f64::NAN, |s| s.r))
        .push("max_energy_residual", traj.max_energy_residual())
        .push("events", Value::List(events));
    r
}

/// Sibling report path: `<out>.events.json` or `<out>.events.csv`.
pub fn events_path(out: &Path, format: Format) -> PathBuf {
    let ext = match format {
        Format::Json => "events.json",
        Format::Csv => "events.csv",
    };
    let mut name = out.as_os_str().to_owned();
    name.push(".");
    name.push(ext);
    PathBuf::from(name)
}

pub fn cmd_evolve(scenario: &ScenarioConfig) -> Result<Outcome> {
    let params = scenario.reduced()?;
    let config = scenario.integration()?;
    let (traj, status, failure) = match dynamics::integrate(&params, &config) {
        Ok(t) => (t, "ok", None),
        Err(Error::SingularityFloor {
            t,
            floor,
            trajectory,
        }) => {
            let err = Error::SingularityFloor {
                t,
                floor,
                trajectory: trajectory.clone(),
            };
            (*trajectory, "singularity-floor", Some(err))
        }
        Err(e) => return Err(e),
    };
    let out = &scenario.output;
    let csv = trajectory_csv(&traj, out.precision);
    let report = render(&evolve_report(&traj, status), out);
    let mut outcome = Outcome::default();
    match &out.out {
        Some(path) => {
            write_file(path, &csv)?;
            write_file(&events_path(path, out.format), &report)?;
            outcome.stdout = report;
        }
        None => {
            outcome.stdout = csv;
            outcome.stderr = report;
        }
    }
    if let Some(err) = failure {
        outcome.code = exit_code(&err);
        outcome.stderr.push_str(&format!("error: {err}\n"));
    }
    Ok(outcome)
}

pub fn invert_report(h_min: f64, g: f64, c: f64, mass: f64) -> Result<Report> {
    let lambda = markers::lambda_from_hmin(h_min, g, c, mass)?;
    let lambda_min = markers::lambda_from_hmin(0.0, g, c, mass)?;
    let mut r = Report::new();
    r.push("command", "invert")
        .push("h_min", h_min)
        .push("G", g)
        .push("c", c)
        .push("mass", mass)
        .push("lambda", lambda)
        .push("lambda_min", lambda_min);
    Ok(r)
}

pub fn cmd_invert(settings: &Settings) -> Result<Outcome> {
    let output = scenario::output_settings(settings, Format::Json)?;
    let report = invert_report(
        settings.require("h_min")?,
        settings.require("G")?,
        settings.require("c")?,
        settings.require("mass")?,
    )?;
    Ok(Outcome {
        code: EXIT_OK,
        stdout: emit(render(&report, &output), output.out.as_deref())?,
        stderr: String::new(),
    })
}

const SWEEPABLE: &[&str] = &["alpha", "beta", "gamma", "G", "c", "lambda", "mass"];

/// Grid axis: `steps` evenly spaced points from `min` to `max` inclusive.
#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub param: String,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    fn from_settings(settings: &Settings, prefix: &str) -> Result<Self> {
        let key = |k: &str| format!("{prefix}_{k}");
        let raw = settings.raw(&key("param")).ok_or_else(|| {
            Error::invalid(format!("missing required setting `{}`", key("param")))
        })?;
        let param = SWEEPABLE
            .iter()
            .find(|p| p.eq_ignore_ascii_case(raw) && (raw != "g" || **p == "G"))
            .ok_or_else(|| {
                Error::invalid(format!("cannot sweep `{raw}`; choose one of {SWEEPABLE:?}"))
            })?
            .to_string();
        let min = settings.require(&key("min"))?;
        let max = settings.require(&key("max"))?;
        let steps_raw = settings.raw(&key("steps")).ok_or_else(|| {
            Error::invalid(format!("missing required setting `{}`", key("steps")))
        })?;
        let steps = steps_raw
            .parse::<usize>()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| Error::invalid(format!("{}: expected an integer >= 1", key("steps"))))?;
        if !(min.is_finite() && max.is_finite() && min <= max) || (steps == 1 && min != max) {
            return Err(Error::invalid(format!(
                "{prefix} axis needs finite min <= max (and min = max for a single step)"
            )));
        }
        Ok(Axis {
            param,
            min,
            max,
            steps,
        })
    }

    pub fn point(&self, i: usize) -> f64 {
        if self.steps == 1 {
            self.min
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.steps - 1) as f64
        }
    }
}

/// One grid point of a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    pub ix: usize,
    pub iy: usize,
    pub x: f64,
    pub y: f64,
    pub regime: RegimeTag,
    pub d: f64,
}

fn format_setting(x: f64) -> String {
    format!("{x:e}")
}

/// Classifies every grid point; output ordered by (iy, ix).
pub fn sweep(settings: &Settings, x: &Axis, y: &Axis) -> Result<Vec<SweepRecord>> {
    if x.param == y.param {
        return Err(Error::invalid("x_param and y_param must differ"));
    }
    let points: Vec<(usize, usize)> = (0..y.steps)
        .flat_map(|iy| (0..x.steps).map(move |ix| (ix, iy)))
        .collect();
    points
        .par_iter()
        .map(|&(ix, iy)| {
            let (xv, yv) = (x.point(ix), y.point(iy));
            let mut s = settings.clone();
            s.set(&x.param, format_setting(xv))?;
            s.set(&y.param, format_setting(yv))?;
            if [&x.param, &y.param].iter().any(|p| p.as_str() == "gamma") {
                // ε follows the sign of a swept γ.
                let g = s.require("gamma")?;
                let eps = if g > 0.0 {
                    1
                } else if g < 0.0 {
                    -1
                } else {
                    0
                };
                s.set("epsilon", eps.to_string())?;
            }
            let params = match scenario::param_source(&s)? {
                ParamSource::Reduced(p) => p,
                ParamSource::Physical(p) => crate::params::reduce(&p)?,
            };
            let regime = cubic::classify(&params)?;
            Ok(SweepRecord {
                ix,
                iy,
                x: xv,
                y: yv,
                regime: regime.tag,
                d: regime.d,
            })
        })
        .collect()
}

pub fn cmd_sweep(settings: &Settings) -> Result<Outcome> {
    let output = scenario::output_settings(settings, Format::Csv)?;
    let x = Axis::from_settings(settings, "x")?;
    let y = Axis::from_settings(settings, "y")?;
    let records = sweep(settings, &x, &y)?;
    let p = output.precision;
    let text = match output.format {
        Format::Csv => {
            let mut out = format!("ix,iy,{},{},regime,D\n", x.param, y.param);
            for r in &records {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.ix,
                    r.iy,
                    format_num(r.x, p),
                    format_num(r.y, p),
                    r.regime,
                    format_num(r.d, p)
                ));
            }
            out
        }
        Format::Json => {
            let mut report = Report::new();
            report
                .push("command", "sweep")
                .push("x_param", x.param.as_str())
                .push("y_param", y.param.as_str())
                .push(
                    "points",
                    Value::List(
                        records
                            .iter()
                            .map(|r| {
                                Value::Map(vec![
                                    ("ix".into(), Value::from(r.ix)),
                                    ("iy".into(), Value::from(r.iy)),
                                    ("x".into(), Value::Num(r.x)),
                                    ("y".into(), Value::Num(r.y)),
                                    ("regime".into(), Value::from(r.regime.as_str())),
                                    ("D".into(), Value::Num(r.d)),
                                ])
                            })
                            .collect(),
                    ),
                );
            report.to_json(p)
        }
    };
    Ok(Outcome {
        code: EXIT_OK,
        stdout: emit(text, output.out.as_deref())?,
        stderr: String::new(),
    })
}

/// Curvature of a sweep's base scenario, for callers building grids.
pub fn base_curvature(settings: &Settings) -> Result<Curvature> {
    Ok(match scenario::param_source(settings)? {
        ParamSource::Reduced(p) => p.epsilon(),
        ParamSource::Physical(p) => p.epsilon,
    })
}
