//! Scenario configuration: flat key-value files, flag overrides, validation.
//!
//! Files are plain text, one `key = value` per line, `#` starts a comment.
//! Recognized keys: `preset`, `omega`, `lambda`, `g`, `gamma`, `alpha`,
//! `t_max`, `steps`, `engines`, `dims`, `tol`, `budget`, `step`, `out`.
//! Resolution order: preset (if named) < file values < command-line flags.

use num_complex::Complex64;
use std::path::{Path, PathBuf};
use thiserror::Error;
use triosc::evolve::DEFAULT_SERIES_TOL;
use triosc::fock::DEFAULT_LEAKAGE_BUDGET;
use triosc::{Engine, FockDims, SystemParams};

/// Default maximum RK4 step for the Lindblad engine.
pub const DEFAULT_LINDBLAD_STEP: f64 = 0.005;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: usize, message: String },
    #[error("unknown preset `{0}` (see `triosc presets`)")]
    UnknownPreset(String),
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("cannot read config {path}: {message}")]
    Io { path: String, message: String },
}

/// A fully resolved, validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub params: SystemParams,
    pub t_max: f64,
    pub steps: usize,
    pub engines: Vec<Engine>,
    pub dims: Option<FockDims>,
    /// Poisson-series tail tolerance.
    pub tol: f64,
    /// Coherent-state truncation leakage budget.
    pub leakage_budget: f64,
    /// Maximum RK4 step for the Lindblad engine.
    pub lindblad_step: f64,
    pub out: Option<PathBuf>,
}

impl ScenarioConfig {
    pub fn time_grid(&self) -> Vec<f64> {
        crate::time_grid(self.t_max, self.steps)
    }
}

/// Partial configuration collected from a file or from flags.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScenarioOverrides {
    pub preset: Option<String>,
    pub omega: Option<f64>,
    pub lambda: Option<f64>,
    pub g: Option<f64>,
    pub gamma: Option<f64>,
    pub alpha: Option<Complex64>,
    pub t_max: Option<f64>,
    pub steps: Option<usize>,
    pub engines: Option<Vec<Engine>>,
    pub dims: Option<FockDims>,
    pub tol: Option<f64>,
    pub budget: Option<f64>,
    pub step: Option<f64>,
    pub out: Option<PathBuf>,
}

impl ScenarioOverrides {
    fn apply_to(&self, base: &mut ScenarioConfig) {
        if let Some(v) = self.omega {
            base.params.omega = v;
        }
        if let Some(v) = self.lambda {
            base.params.lambda = v;
        }
        if let Some(v) = self.g {
            base.params.g = v;
        }
        if let Some(v) = self.gamma {
            base.params.gamma = v;
        }
        if let Some(v) = self.alpha {
            base.params.alpha = v;
        }
        if let Some(v) = self.t_max {
            base.t_max = v;
        }
        if let Some(v) = self.steps {
            base.steps = v;
        }
        if let Some(ref v) = self.engines {
            base.engines = v.clone();
        }
        if let Some(v) = self.dims {
            base.dims = Some(v);
        }
        if let Some(v) = self.tol {
            base.tol = v;
        }
        if let Some(v) = self.budget {
            base.leakage_budget = v;
        }
        if let Some(v) = self.step {
            base.lindblad_step = v;
        }
        if let Some(ref v) = self.out {
            base.out = Some(v.clone());
        }
    }
}

/// Parses a complex amplitude: `4`, `-1.5`, `1+2i`, `1-2i`, `2i`, `-i`,
/// `1.5e-2+3e-1i`.
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let s = text.trim();
    if s.is_empty() {
        return Err("empty complex number".into());
    }
    if let Some(body) = s.strip_suffix(['i', 'I']) {
        // find the split between real and imaginary parts: the last +/-
        // that is neither leading nor part of an exponent
        let bytes = body.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            let c = bytes[i] as char;
            if (c == '+' || c == '-')
                && !matches!(bytes[i - 1] as char, 'e' | 'E')
            {
                split = Some(i);
                break;
            }
        }
        let (re_part, im_part) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("0", body),
        };
        let im = match im_part {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => other
                .parse::<f64>()
                .map_err(|_| format!("bad imaginary part in `{s}`"))?,
        };
        let re = re_part
            .trim()
            .parse::<f64>()
            .map_err(|_| format!("bad real part in `{s}`"))?;
        Ok(Complex64::new(re, im))
    } else {
        s.parse::<f64>()
            .map(|re| Complex64::new(re, 0.0))
            .map_err(|_| format!("bad number `{s}`"))
    }
}

/// Parses `n1,n2,n3` or a single `n` (cubic truncation).
pub fn parse_dims(text: &str) -> Result<FockDims, String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let nums: Result<Vec<usize>, _> = parts.iter().map(|p| p.parse::<usize>()).collect();
    let nums = nums.map_err(|_| format!("bad dims `{text}`"))?;
    let dims = match nums.as_slice() {
        [n] => FockDims::new(*n, *n, *n),
        [a, b, c] => FockDims::new(*a, *b, *c),
        _ => return Err(format!("dims `{text}` must be `n` or `n1,n2,n3`")),
    };
    dims.map_err(|e| e.to_string())
}

/// Parses a comma-separated engine list.
pub fn parse_engines(text: &str) -> Result<Vec<Engine>, String> {
    let mut engines = Vec::new();
    for part in text.split(',') {
        let name = part.trim();
        if name.is_empty() {
            continue;
        }
        let engine = Engine::from_label(name).ok_or_else(|| {
            format!("unknown engine `{name}` (expected analytic, coherent, fock, lindblad)")
        })?;
        if !engines.contains(&engine) {
            engines.push(engine);
        }
    }
    if engines.is_empty() {
        return Err("engine list is empty".into());
    }
    Ok(engines)
}

/// Reads a flat key-value config file; errors carry the offending line.
pub fn parse_config_file(path: &Path) -> Result<ScenarioOverrides, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_config_text(&text, &path.display().to_string())
}

pub fn parse_config_text(
    text: &str,
    path: &str,
) -> Result<ScenarioOverrides, ConfigError> {
    let mut out = ScenarioOverrides::default();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let fail = |message: String| ConfigError::Parse {
            path: path.to_string(),
            line,
            message,
        };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| fail(format!("expected `key = value`, got `{content}`")))?;
        let key = key.trim();
        let value = value.trim();
        if value.is_empty() {
            return Err(fail(format!("key `{key}` has no value")));
        }
        let float = |v: &str| v.parse::<f64>().map_err(|_| fail(format!("bad number `{v}`")));
        match key {
            "preset" => out.preset = Some(value.to_string()),
            "omega" => out.omega = Some(float(value)?),
            "lambda" => out.lambda = Some(float(value)?),
            "g" => out.g = Some(float(value)?),
            "gamma" => out.gamma = Some(float(value)?),
            "alpha" => out.alpha = Some(parse_complex(value).map_err(&fail)?),
            "t_max" => out.t_max = Some(float(value)?),
            "steps" => {
                out.steps =
                    Some(value.parse().map_err(|_| fail(format!("bad steps `{value}`")))?)
            }
            "engines" => out.engines = Some(parse_engines(value).map_err(&fail)?),
            "dims" => out.dims = Some(parse_dims(value).map_err(&fail)?),
            "tol" => out.tol = Some(float(value)?),
            "budget" => out.budget = Some(float(value)?),
            "step" => out.step = Some(float(value)?),
            "out" => out.out = Some(PathBuf::from(value)),
            other => return Err(fail(format!("unknown key `{other}`"))),
        }
    }
    Ok(out)
}

/// Baseline scenario when no preset is named: the middle figure case.
fn default_config() -> ScenarioConfig {
    crate::presets::preset("fig1b").expect("builtin preset")
}

/// Merges preset, file and flag layers into a validated scenario.
pub fn resolve(
    file: Option<&ScenarioOverrides>,
    flags: &ScenarioOverrides,
) -> Result<ScenarioConfig, ConfigError> {
    let preset_name = flags
        .preset
        .as_deref()
        .or(file.and_then(|f| f.preset.as_deref()));
    let mut config = match preset_name {
        Some(name) => crate::presets::preset(name)
            .ok_or_else(|| ConfigError::UnknownPreset(name.to_string()))?,
        None => default_config(),
    };
    if let Some(file) = file {
        file.apply_to(&mut config);
    }
    flags.apply_to(&mut config);
    validate_config(&config)?;
    Ok(config)
}

fn validate_config(config: &ScenarioConfig) -> Result<(), ConfigError> {
    let p = &config.params;
    SystemParams::new(p.omega, p.lambda, p.g, p.gamma, p.alpha)
        .map_err(|e| ConfigError::Invalid(e.to_string()))?;
    if !(config.t_max > 0.0 && config.t_max.is_finite()) {
        return Err(ConfigError::Invalid(format!("t_max must be > 0, got {}", config.t_max)));
    }
    if config.steps < 2 {
        return Err(ConfigError::Invalid(format!("steps must be >= 2, got {}", config.steps)));
    }
    if config.engines.is_empty() {
        return Err(ConfigError::Invalid("engine set is empty".into()));
    }
    if !(config.tol > 0.0 && config.tol < 1.0) {
        return Err(ConfigError::Invalid(format!("tol must be in (0, 1), got {}", config.tol)));
    }
    if !(config.leakage_budget > 0.0 && config.leakage_budget < 1.0) {
        return Err(ConfigError::Invalid(format!(
            "budget must be in (0, 1), got {}",
            config.leakage_budget
        )));
    }
    if !(config.lindblad_step > 0.0 && config.lindblad_step.is_finite()) {
        return Err(ConfigError::Invalid(format!(
            "step must be > 0, got {}",
            config.lindblad_step
        )));
    }
    let needs_dims = config
        .engines
        .iter()
        .any(|e| matches!(e, Engine::FockSeries | Engine::LindbladRk4));
    if needs_dims && config.dims.is_none() {
        return Err(ConfigError::Invalid(
            "engines `fock` and `lindblad` require `dims` (e.g. --dims 12,12,12)".into(),
        ));
    }
    Ok(())
}

/// Convenience constructor used by presets.
pub(crate) fn scenario(
    omega: f64,
    lambda: f64,
    g: f64,
    gamma: f64,
    alpha: f64,
) -> ScenarioConfig {
    ScenarioConfig {
        params: SystemParams::new(omega, lambda, g, gamma, Complex64::new(alpha, 0.0))
            .expect("preset parameters are valid"),
        t_max: 30.0,
        steps: 1500,
        engines: vec![Engine::Analytic, Engine::CoherentOracle],
        dims: None,
        tol: DEFAULT_SERIES_TOL,
        leakage_budget: DEFAULT_LEAKAGE_BUDGET,
        lindblad_step: DEFAULT_LINDBLAD_STEP,
        out: None,
    }
}
