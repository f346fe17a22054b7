//! Scenario files and their merge with command-line flags.
//!
//! A scenario file is flat `key = value` text, one pair per line, with `#`
//! starting a comment. Every key is also a flag (`r_start` ↔ `--r-start`)
//! and flags override the file. Numeric values accept plain decimals and
//! simple products/quotients with `pi`, e.g. `pi/2`, `2*pi*pi`, `2/3`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::PathBuf;

use crate::dynamics::{Direction, IntegrationConfig};
use crate::params::{Curvature, PhysicalParams, ReducedParams};
use crate::{Error, Result};

const KEYS: &[&str] = &[
    "alpha",
    "beta",
    "gamma",
    "epsilon",
    "delta",
    "radiation",
    "G",
    "c",
    "lambda",
    "mass",
    "r_start",
    "t_span",
    "direction",
    "rel_tol",
    "abs_tol",
    "max_step",
    "r_max",
    "r_floor",
    "format",
    "precision",
    "out",
    "h_min",
    "x_param",
    "x_min",
    "x_max",
    "x_steps",
    "y_param",
    "y_min",
    "y_max",
    "y_steps",
];

/// Raw `key → value` settings, after aliasing.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Settings(BTreeMap<String, String>);

fn canonical_key(key: &str) -> Option<&'static str> {
    let key = key.trim().replace('-', "_");
    let key = match key.as_str() {
        "g" => "G",
        "Lambda" | "LAMBDA" => "lambda",
        "M" => "mass",
        "eps" => "epsilon",
        other => other,
    }
    .to_string();
    KEYS.iter().copied().find(|k| *k == key)
}

impl Settings {
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::invalid(format!(
                    "line {}: expected `key = value`, got `{line}`",
                    lineno + 1
                ))
            })?;
            let key = canonical_key(k).ok_or_else(|| {
                Error::invalid(format!("line {}: unknown key `{}`", lineno + 1, k.trim()))
            })?;
            map.insert(key.to_string(), v.trim().to_string());
        }
        Ok(Settings(map))
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<()> {
        let k = canonical_key(key).ok_or_else(|| Error::invalid(format!("unknown key `{key}`")))?;
        self.0.insert(k.to_string(), value.into());
        Ok(())
    }

    /// `other` wins on conflicts.
    pub fn overlay(mut self, other: Settings) -> Self {
        self.0.extend(other.0);
        self
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    pub fn has(&self, key: &str) -> bool {
        self.0.contains_key(key)
    }

    pub fn number(&self, key: &str) -> Result<Option<f64>> {
        self.raw(key)
            .map(|v| parse_number(v).map_err(|e| Error::invalid(format!("{key}: {e}"))))
            .transpose()
    }

    pub fn require(&self, key: &str) -> Result<f64> {
        self.number(key)?
            .ok_or_else(|| Error::invalid(format!("missing required setting `{key}`")))
    }

    pub fn flag(&self, key: &str) -> Result<bool> {
        match self.raw(key) {
            None => Ok(false),
            Some("true" | "yes" | "1" | "") => Ok(true),
            Some("false" | "no" | "0") => Ok(false),
            Some(other) => Err(Error::invalid(format!(
                "{key}: expected a boolean, got `{other}`"
            ))),
        }
    }
}

/// Parses `factor ((*|/) factor)*` where a factor is a decimal number or
/// `pi`.
pub fn parse_number(text: &str) -> std::result::Result<f64, String> {
    let text = text.trim();
    if let Ok(v) = text.parse::<f64>() {
        return Ok(v);
    }
    let mut value = 1.0;
    let mut op = '*';
    let mut rest = text;
    loop {
        let end = rest.find(['*', '/']).unwrap_or(rest.len());
        let token = rest[..end].trim();
        let factor = match token {
            "pi" | "π" => PI,
            t => t
                .parse::<f64>()
                .map_err(|_| format!("cannot parse `{text}` as a number"))?,
        };
        value = if op == '*' {
            value * factor
        } else {
            value / factor
        };
        if end == rest.len() {
            return Ok(value);
        }
        op = rest[end..].chars().next().unwrap_or('*');
        rest = &rest[end + 1..];
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutputSettings {
    pub format: Format,
    pub precision: usize,
    pub out: Option<PathBuf>,
}

/// Which parameter group the scenario was given in.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ParamSource {
    Reduced(ReducedParams),
    Physical(PhysicalParams),
}

const REDUCED_KEYS: &[&str] = &["alpha", "beta", "gamma"];
const PHYSICAL_KEYS: &[&str] = &["G", "c", "lambda", "mass"];

/// A fully resolved scenario: parameters, radiation, integration and output
/// settings.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub source: ParamSource,
    pub delta: f64,
    pub radiation: bool,
    pub settings: Settings,
    pub output: OutputSettings,
}

impl ScenarioConfig {
    pub fn from_settings(settings: Settings, default_format: Format) -> Result<Self> {
        let output = output_settings(&settings, default_format)?;
        let source = param_source(&settings)?;
        let radiation = settings.flag("radiation")?;
        let delta = settings.number("delta")?.unwrap_or(0.0);
        if delta != 0.0 && !radiation {
            return Err(Error::invalid("delta requires --radiation"));
        }
        Ok(ScenarioConfig {
            source,
            delta,
            radiation,
            settings,
            output,
        })
    }

    /// Reduced coefficients including δ when radiation is enabled.
    pub fn reduced(&self) -> Result<ReducedParams> {
        let base = match self.source {
            ParamSource::Reduced(p) => p,
            ParamSource::Physical(phys) => crate::params::reduce(&phys)?,
        };
        base.with_radiation(self.delta)
    }

    pub fn physical(&self) -> Option<PhysicalParams> {
        match self.source {
            ParamSource::Physical(p) => Some(p),
            ParamSource::Reduced(_) => None,
        }
    }

    pub fn integration(&self) -> Result<IntegrationConfig> {
        integration_config(&self.settings)
    }
}

pub fn output_settings(settings: &Settings, default_format: Format) -> Result<OutputSettings> {
    let format = match settings.raw("format") {
        None => default_format,
        Some("json") => Format::Json,
        Some("csv") => Format::Csv,
        Some(other) => {
            return Err(Error::invalid(format!(
                "format must be csv or json, got `{other}`"
            )))
        }
    };
    let precision = match settings.raw("precision") {
        None => 17,
        Some(p) => p
            .parse::<usize>()
            .ok()
            .filter(|p| (1..=17).contains(p))
            .ok_or_else(|| Error::invalid(format!("precision must be in 1..=17, got `{p}`")))?,
    };
    Ok(OutputSettings {
        format,
        precision,
        out: settings.raw("out").map(PathBuf::from),
    })
}

fn curvature(settings: &Settings, default: Option<Curvature>) -> Result<Curvature> {
    match settings.number("epsilon")? {
        Some(e) if e.fract() == 0.0 => Curvature::from_sign(e as i64),
        Some(e) => Err(Error::invalid(format!(
            "epsilon must be -1, 0 or +1, got {e}"
        ))),
        None => default.ok_or_else(|| Error::invalid("missing required setting `epsilon`")),
    }
}

pub fn param_source(settings: &Settings) -> Result<ParamSource> {
    let reduced = REDUCED_KEYS.iter().any(|k| settings.has(k));
    let physical = PHYSICAL_KEYS.iter().any(|k| settings.has(k));
    match (reduced, physical) {
        (true, true) => Err(Error::invalid(
            "give either reduced (alpha, beta, gamma) or physical (G, c, lambda, mass) parameters, not both",
        )),
        (false, false) => Err(Error::invalid(
            "no parameters: give alpha, beta, gamma or G, c, lambda, mass",
        )),
        (true, false) => {
            let gamma = settings.require("gamma")?;
            let inferred = if gamma > 0.0 {
                Curvature::Closed
            } else if gamma < 0.0 {
                Curvature::Open
            } else {
                Curvature::Flat
            };
            let eps = curvature(settings, Some(inferred))?;
            Ok(ParamSource::Reduced(ReducedParams::new(
                settings.require("alpha")?,
                settings.require("beta")?,
                gamma,
                eps,
            )?))
        }
        (false, true) => Ok(ParamSource::Physical(PhysicalParams::new(
            settings.require("G")?,
            settings.require("c")?,
            settings.require("lambda")?,
            settings.require("mass")?,
            curvature(settings, Some(Curvature::Closed))?,
        )?)),
    }
}

pub fn integration_config(settings: &Settings) -> Result<IntegrationConfig> {
    let mut cfg = IntegrationConfig::new(settings.require("r_start")?, settings.require("t_span")?);
    cfg.direction = match settings.raw("direction") {
        None | Some("expanding") => Direction::Expanding,
        Some("contracting") => Direction::Contracting,
        Some(other) => {
            return Err(Error::invalid(format!(
                "direction must be expanding or contracting, got `{other}`"
            )))
        }
    };
    if let Some(v) = settings.number("rel_tol")? {
        cfg.rel_tol = v;
    }
    if let Some(v) = settings.number("abs_tol")? {
        cfg.abs_tol = v;
    }
    cfg.max_step = settings.number("max_step")?;
    cfg.r_max = settings.number("r_max")?;
    cfg.r_floor = settings.number("r_floor")?;
    Ok(cfg)
}
