//! Run configuration: flat `key = value` files, command-line overrides and
//! validation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};

use rough_kernel::orlicz::{schedule_n, ScheduleParams, YoungFunction};
use serde::Serialize;

/// Every key a config file (or flag) may set.
pub const KNOWN_KEYS: [&str; 11] =
    ["phi", "mode", "N", "n", "grid", "oversample", "tol", "p", "out", "emit", "jobs"];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("configuration error in `{key}`: {message}")]
pub struct ConfigError {
    pub key: String,
    pub message: String,
}

impl ConfigError {
    fn new(key: &str, message: impl Into<String>) -> Self {
        Self { key: key.to_string(), message: message.into() }
    }
}

/// Raw, unvalidated `key → value` pairs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings(BTreeMap<String, String>);

impl Settings {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn from_text(text: &str) -> Result<Self, ConfigError> {
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::new(line, format!("line {}: expected `key = value`", lineno + 1)));
            };
            let (key, value) = (key.trim(), value.trim());
            if !KNOWN_KEYS.contains(&key) {
                return Err(ConfigError::new(key, "unknown key"));
            }
            map.insert(key.to_string(), value.to_string());
        }
        Ok(Self(map))
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new("config", format!("{}: {e}", path.display())))?;
        Self::from_text(&text)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<(), ConfigError> {
        if !KNOWN_KEYS.contains(&key) {
            return Err(ConfigError::new(key, "unknown key"));
        }
        self.0.insert(key.to_string(), value.into());
        Ok(())
    }

    /// `self` with every entry of `overrides` taking precedence.
    pub fn merged(mut self, overrides: &Settings) -> Self {
        for (k, v) in &overrides.0 {
            self.0.insert(k.clone(), v.clone());
        }
        self
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }
}

/// Young function as written in a config: `power_log:0.5`, `log_quotient`,
/// `custom_table:PATH`.
#[derive(Debug, Clone, PartialEq)]
pub enum PhiSpec {
    PowerLog(f64),
    LogQuotient,
    CustomTable(PathBuf),
}

impl PhiSpec {
    pub fn parse(s: &str) -> Result<Self, ConfigError> {
        let (family, param) = match s.split_once(':') {
            Some((f, p)) => (f.trim(), Some(p.trim())),
            None => (s.trim(), None),
        };
        match (family, param) {
            ("power_log", Some(p)) => {
                let beta: f64 = p.parse().map_err(|_| ConfigError::new("phi", format!("β must be a number, got `{p}`")))?;
                Ok(Self::PowerLog(beta))
            }
            ("power_log", None) => Err(ConfigError::new("phi", "power_log needs a parameter, e.g. power_log:0.5")),
            ("log_quotient", None) => Ok(Self::LogQuotient),
            ("custom_table", Some(path)) => Ok(Self::CustomTable(PathBuf::from(path))),
            _ => Err(ConfigError::new("phi", format!("unknown Young function `{s}`"))),
        }
    }

    pub fn build(&self) -> Result<YoungFunction, ConfigError> {
        let yf = match self {
            Self::PowerLog(beta) => YoungFunction::power_log(*beta),
            Self::LogQuotient => Ok(YoungFunction::LogQuotient),
            Self::CustomTable(path) => {
                let points = read_table(path)?;
                YoungFunction::custom_table(&points)
            }
        }
        .map_err(|e| ConfigError::new("phi", e.to_string()))?;
        yf.check_invariants().map_err(|e| ConfigError::new("phi", e.to_string()))?;
        Ok(yf)
    }
}

impl fmt::Display for PhiSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::PowerLog(beta) => write!(f, "power_log:{beta}"),
            Self::LogQuotient => write!(f, "log_quotient"),
            Self::CustomTable(path) => write!(f, "custom_table:{}", path.display()),
        }
    }
}

/// Two columns `t, Φ(t)` separated by commas or whitespace.
fn read_table(path: &Path) -> Result<Vec<(f64, f64)>, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::new("phi", format!("{}: {e}", path.display())))?;
    let mut points = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(|c: char| c == ',' || c.is_whitespace()).filter(|f| !f.is_empty()).collect();
        let parsed: Vec<f64> = fields.iter().filter_map(|f| f.parse().ok()).collect();
        if fields.len() != 2 || parsed.len() != 2 {
            return Err(ConfigError::new("phi", format!("{} line {}: expected `t, Φ(t)`", path.display(), i + 1)));
        }
        points.push((parsed[0], parsed[1]));
    }
    Ok(points)
}

/// How `(n, N)` is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    /// `n = ⌊Ψ(N / log N)⌋`.
    Schedule { big_n: f64 },
    /// `n` and `N` set independently, `N ≥ 64n²`.
    Decoupled { n: usize, big_n: f64 },
}

impl Mode {
    pub fn big_n(&self) -> f64 {
        match *self {
            Self::Schedule { big_n } | Self::Decoupled { big_n, .. } => big_n,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Schedule { .. } => "schedule",
            Self::Decoupled { .. } => "decoupled",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

/// A validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub phi: PhiSpec,
    pub young: YoungFunction,
    pub mode: Mode,
    pub grid_size: usize,
    pub oversample: usize,
    pub tol: f64,
    pub p_list: Vec<f64>,
    pub out_dir: PathBuf,
    pub emit: BTreeSet<Format>,
    pub jobs: Option<usize>,
}

/// Parses `1e6`, `1048576` or `2^40`.
pub fn parse_big_n(s: &str) -> Option<f64> {
    let v = match s.split_once('^') {
        Some((base, exp)) => base.trim().parse::<f64>().ok()?.powf(exp.trim().parse::<f64>().ok()?),
        None => s.trim().parse::<f64>().ok()?,
    };
    (v.is_finite() && v > 0.0).then_some(v)
}

fn parse_usize(key: &str, v: &str) -> Result<usize, ConfigError> {
    v.parse().map_err(|_| ConfigError::new(key, format!("expected a positive integer, got `{v}`")))
}

impl Default for RunConfig {
    fn default() -> Self {
        Self::from_settings(&Settings::default()).expect("defaults are valid")
    }
}

impl RunConfig {
    /// Applies defaults to missing keys and validates everything.
    pub fn from_settings(s: &Settings) -> Result<Self, ConfigError> {
        let phi = PhiSpec::parse(s.get("phi").unwrap_or("power_log:0.5"))?;
        let young = phi.build()?;

        let big_n = match s.get("N") {
            Some(v) => parse_big_n(v).ok_or_else(|| ConfigError::new("N", format!("expected a positive number, got `{v}`")))?,
            None => 2f64.powi(40),
        };
        let mode = match s.get("mode").unwrap_or("decoupled") {
            "schedule" => {
                if !(big_n >= 100.0) {
                    return Err(ConfigError::new("N", format!("schedule mode needs N ≥ 100, got {big_n}")));
                }
                Mode::Schedule { big_n }
            }
            "decoupled" => {
                let n = match s.get("n") {
                    Some(v) => parse_usize("n", v)?,
                    None => 16,
                };
                if n == 0 {
                    return Err(ConfigError::new("n", "n must be at least 1"));
                }
                let floor = 64.0 * (n as f64).powi(2);
                if big_n < floor {
                    return Err(ConfigError::new("N", format!("decoupled mode needs N ≥ 64·n² = {floor}, got {big_n}")));
                }
                Mode::Decoupled { n, big_n }
            }
            other => return Err(ConfigError::new("mode", format!("expected schedule or decoupled, got `{other}`"))),
        };

        let grid_size = match s.get("grid") {
            Some(v) => parse_usize("grid", v)?,
            None => 8192,
        };
        if grid_size < 64 {
            return Err(ConfigError::new("grid", format!("grid must be at least 64, got {grid_size}")));
        }
        let oversample = match s.get("oversample") {
            Some(v) => parse_usize("oversample", v)?,
            None => 8,
        };
        if oversample < 4 {
            return Err(ConfigError::new("oversample", format!("oversample must be at least 4, got {oversample}")));
        }
        let tol = match s.get("tol") {
            Some(v) => v.parse::<f64>().map_err(|_| ConfigError::new("tol", format!("expected a number, got `{v}`")))?,
            None => 1e-6,
        };
        if !(tol > 0.0 && tol <= 1e-3) {
            return Err(ConfigError::new("tol", format!("tol must lie in (0, 1e-3], got {tol}")));
        }
        let p_list = match s.get("p") {
            Some(v) => v
                .split(',')
                .map(|p| p.trim().parse::<f64>().map_err(|_| ConfigError::new("p", format!("expected numbers, got `{p}`"))))
                .collect::<Result<Vec<_>, _>>()?,
            None => vec![4.0, 8.0],
        };
        if p_list.is_empty() || p_list.iter().any(|&p| !(p > 2.0 && p.is_finite())) {
            return Err(ConfigError::new("p", "every exponent must be finite and > 2"));
        }
        let out_dir = PathBuf::from(s.get("out").unwrap_or("out"));
        let emit = match s.get("emit") {
            Some(v) => v
                .split(',')
                .map(str::trim)
                .filter(|f| !f.is_empty())
                .map(|f| match f {
                    "csv" => Ok(Format::Csv),
                    "json" => Ok(Format::Json),
                    "svg" => Ok(Format::Svg),
                    other => Err(ConfigError::new("emit", format!("unknown format `{other}`"))),
                })
                .collect::<Result<BTreeSet<_>, _>>()?,
            None => BTreeSet::from([Format::Json]),
        };
        let jobs = match s.get("jobs") {
            Some(v) => {
                let j = parse_usize("jobs", v)?;
                if j == 0 {
                    return Err(ConfigError::new("jobs", "jobs must be at least 1"));
                }
                Some(j)
            }
            None => None,
        };
        Ok(Self { phi, young, mode, grid_size, oversample, tol, p_list, out_dir, emit, jobs })
    }

    /// `(N, n)` of the construction; schedule mode evaluates `Ψ`.
    pub fn params(&self) -> rough_kernel::Result<ScheduleParams> {
        match self.mode {
            Mode::Schedule { big_n } => schedule_n(&self.young, big_n),
            Mode::Decoupled { n, big_n } => Ok(ScheduleParams { big_n, n }),
        }
    }

    /// Copy with another mode, re-validated.
    pub fn with_mode(&self, mode: Mode) -> Result<Self, ConfigError> {
        if let Mode::Decoupled { n, big_n } = mode {
            if n == 0 {
                return Err(ConfigError::new("n", "n must be at least 1"));
            }
            let floor = 64.0 * (n as f64).powi(2);
            if big_n < floor {
                return Err(ConfigError::new("N", format!("decoupled mode needs N ≥ 64·n² = {floor}, got {big_n}")));
            }
        }
        if let Mode::Schedule { big_n } = mode {
            if !(big_n >= 100.0) {
                return Err(ConfigError::new("N", format!("schedule mode needs N ≥ 100, got {big_n}")));
            }
        }
        Ok(Self { mode, ..self.clone() })
    }
}
