//! Flat `key = value` scenario files.

use std::fmt::{self, Write as _};
use std::path::PathBuf;
use std::str::FromStr;

use magnus_core::model::{DriveParams, Frame};
use magnus_core::propagation::DEFAULT_STEPS_PER_PERIOD;
use magnus_core::shifts::DEFAULT_KAPPA;
use serde::Serialize;

use crate::error::CliError;

/// Comparison models. `Exact` is the reference every other model is scored
/// against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Exact,
    Magnus2,
    Rwa,
    RwaBs,
    ResonantMagnus,
}

impl Model {
    pub const ALL: [Model; 5] = [
        Model::Exact,
        Model::Magnus2,
        Model::Rwa,
        Model::RwaBs,
        Model::ResonantMagnus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Model::Exact => "exact",
            Model::Magnus2 => "magnus2",
            Model::Rwa => "rwa",
            Model::RwaBs => "rwa_bs",
            Model::ResonantMagnus => "resonant_magnus",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Model::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| {
            format!("unknown model `{s}` (expected one of exact, magnus2, rwa, rwa_bs, resonant_magnus)")
        })
    }
}

/// Run parameters. Frequencies other than `omega` are ratios to ω, `tau` is
/// in units of 1/ω and `t_max` counts drive periods, so a scenario is
/// independent of the overall frequency scale.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    /// ε/ω
    pub epsilon: f64,
    /// ω, the overall frequency scale
    pub omega: f64,
    /// 𝒲/ω
    pub amplitude: f64,
    /// τω; when absent the regime check picks τ itself
    pub tau: Option<f64>,
    /// run length in drive periods
    pub t_max: f64,
    pub samples: usize,
    pub models: Vec<Model>,
    pub steps_per_period: usize,
    pub kappa: f64,
    /// frame the propagators are compared in
    pub frame: Frame,
    pub out: Option<PathBuf>,
}

impl Default for ScenarioConfig {
    /// The off-resonant scenario ε = 4ω, 𝒲 = 0.5ω over 50 periods.
    fn default() -> Self {
        ScenarioConfig {
            epsilon: 4.0,
            omega: 1.0,
            amplitude: 0.5,
            tau: None,
            t_max: 50.0,
            samples: 500,
            models: vec![Model::Magnus2, Model::Rwa],
            steps_per_period: DEFAULT_STEPS_PER_PERIOD,
            kappa: DEFAULT_KAPPA,
            frame: Frame::Interaction,
            out: None,
        }
    }
}

fn parse_num<T: FromStr>(field: &'static str, raw: &str) -> Result<T, CliError>
where
    T::Err: fmt::Display,
{
    raw.parse()
        .map_err(|e: T::Err| CliError::config(field, format!("cannot parse `{raw}`: {e}")))
}

impl ScenarioConfig {
    /// Parse a config file body on top of the defaults. Blank lines and lines
    /// starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = ScenarioConfig::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::config("config", format!("line {}: expected `key = value`", lineno + 1)))?;
            cfg.set(key.trim(), value.trim())?;
        }
        Ok(cfg)
    }

    /// Set one field from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "epsilon" => self.epsilon = parse_num("epsilon", value)?,
            "omega" => self.omega = parse_num("omega", value)?,
            "amplitude" => self.amplitude = parse_num("amplitude", value)?,
            "tau" => {
                self.tau = match value {
                    "" | "auto" => None,
                    v => Some(parse_num("tau", v)?),
                }
            }
            "t_max" => self.t_max = parse_num("t_max", value)?,
            "samples" => self.samples = parse_num("samples", value)?,
            "steps_per_period" => self.steps_per_period = parse_num("steps_per_period", value)?,
            "kappa" => self.kappa = parse_num("kappa", value)?,
            "models" => {
                self.models = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse().map_err(|e| CliError::config("models", e)))
                    .collect::<Result<_, _>>()?
            }
            "frame" => self.frame = value.parse().map_err(|e: String| CliError::config("frame", e))?,
            "out" => self.out = (!value.is_empty()).then(|| PathBuf::from(value)),
            other => return Err(CliError::config("config", format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Drive parameters in absolute units.
    pub fn drive(&self) -> Result<DriveParams, CliError> {
        DriveParams::from_ratios(self.omega, self.epsilon, self.amplitude).map_err(|e| match e {
            magnus_core::Error::InvalidParameter { name, reason } => CliError::config(name, reason),
            other => CliError::config("drive", other.to_string()),
        })
    }

    /// Check every invariant; errors name the offending field.
    pub fn validate(&self) -> Result<DriveParams, CliError> {
        let p = self.drive()?;
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return Err(CliError::config(
                "t_max",
                format!("must be finite and > 0, got {}", self.t_max),
            ));
        }
        if self.samples < 2 {
            return Err(CliError::config(
                "samples",
                format!("must be at least 2, got {}", self.samples),
            ));
        }
        if self.steps_per_period == 0 {
            return Err(CliError::config("steps_per_period", "must be at least 1"));
        }
        if !(self.kappa.is_finite() && self.kappa > 0.0) {
            return Err(CliError::config(
                "kappa",
                format!("must be finite and > 0, got {}", self.kappa),
            ));
        }
        if let Some(tau) = self.tau {
            if !(tau.is_finite() && tau > 0.0) {
                return Err(CliError::config("tau", format!("must be finite and > 0, got {tau}")));
            }
        }
        if !self.models.iter().any(|&m| m != Model::Exact) {
            return Err(CliError::config("models", "need at least one model besides exact"));
        }
        for (i, m) in self.models.iter().enumerate() {
            if self.models[..i].contains(m) {
                return Err(CliError::config("models", format!("`{m}` listed twice")));
            }
        }
        if self.models.contains(&Model::ResonantMagnus) {
            if !p.is_resonant() {
                return Err(CliError::config(
                    "models",
                    format!(
                        "resonant_magnus requires epsilon = 1 (zero detuning), got epsilon = {}",
                        self.epsilon
                    ),
                ));
            }
            if self.amplitude >= 2.0 {
                return Err(CliError::config(
                    "amplitude",
                    "resonant_magnus requires amplitude < 2 (off-diagonal Bloch-Siegert pole)",
                ));
            }
        }
        if self.models.contains(&Model::Magnus2) && p.is_resonant() {
            return Err(CliError::config(
                "models",
                "magnus2 is the dispersive form and needs nonzero detuning; use resonant_magnus",
            ));
        }
        Ok(p)
    }

    /// Models scored against the exact propagator, in config order.
    pub fn compared_models(&self) -> Vec<Model> {
        self.models.iter().copied().filter(|&m| m != Model::Exact).collect()
    }

    /// The effective config in the same `key = value` form [`parse`] reads.
    /// Floats use the shortest representation that parses back exactly.
    ///
    /// [`parse`]: ScenarioConfig::parse
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        let models: Vec<&str> = self.models.iter().map(|m| m.name()).collect();
        let _ = writeln!(s, "epsilon = {:?}", self.epsilon);
        let _ = writeln!(s, "omega = {:?}", self.omega);
        let _ = writeln!(s, "amplitude = {:?}", self.amplitude);
        match self.tau {
            Some(t) => {
                let _ = writeln!(s, "tau = {t:?}");
            }
            None => {
                let _ = writeln!(s, "tau = auto");
            }
        }
        let _ = writeln!(s, "t_max = {:?}", self.t_max);
        let _ = writeln!(s, "samples = {}", self.samples);
        let _ = writeln!(s, "models = {}", models.join(","));
        let _ = writeln!(s, "steps_per_period = {}", self.steps_per_period);
        let _ = writeln!(s, "kappa = {:?}", self.kappa);
        let _ = writeln!(s, "frame = {}", self.frame);
        if let Some(out) = &self.out {
            let _ = writeln!(s, "out = {}", out.display());
        }
        s
    }
}
