//! Flat `key = value` run configuration.
//!
//! One key per line; `#` starts a comment; blank lines are ignored. Every
//! malformed entry is reported as a single line naming the key.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use qchan::{ChannelParams, Criterion};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    /// 1-based line, or 0 for whole-file problems such as a missing key.
    pub line: usize,
    pub key: String,
    pub reason: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "config: {}: {}", self.key, self.reason)
        } else {
            write!(f, "config line {}: {}: {}", self.line, self.key, self.reason)
        }
    }
}

impl std::error::Error for ConfigError {}

const KEYS: &[&str] = &[
    "p0",
    "p1",
    "pr",
    "mu0",
    "mu1",
    "sigma_ratio",
    "sigma0",
    "sigma1",
    "sigma_ratio_grid",
    "criteria",
    "criterion",
    "blocklength",
    "rate",
    "levels",
    "thresholds",
    "seed",
    "samples",
    "output",
    "derivative_lo",
    "derivative_hi",
    "derivative_points",
    "lloyd_bac_weights",
    "include_resistance",
    "z_limit",
    "significance",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub p0: f64,
    pub p1: f64,
    pub pr: f64,
    pub mu0: f64,
    pub mu1: f64,
    /// `σ_c / μ_c` for single-point commands.
    pub sigma_ratio: f64,
    /// Explicit standard deviations; override `sigma_ratio` when both set.
    pub sigmas: Option<(f64, f64)>,
    pub sigma_ratio_grid: Vec<f64>,
    /// Designers swept by `bounds` and reported by `design`.
    pub criteria: Vec<Criterion>,
    /// Designer used by `validate` and `export-samples`.
    pub criterion: Criterion,
    pub blocklength: u64,
    pub rate: f64,
    pub levels: usize,
    /// Fixed quantizer boundaries; bypasses the designers.
    pub thresholds: Option<Vec<f64>>,
    pub seed: u64,
    pub samples: u64,
    pub output: Option<PathBuf>,
    pub derivative_range: Option<(f64, f64)>,
    pub derivative_points: usize,
    pub lloyd_bac_weights: bool,
    pub include_resistance: bool,
    pub z_limit: f64,
    pub significance: f64,
}

struct Entry {
    line: usize,
    value: String,
}

struct Raw(BTreeMap<String, Entry>);

impl Raw {
    fn err(&self, key: &str, reason: impl Into<String>) -> ConfigError {
        let line = self.0.get(key).map_or(0, |e| e.line);
        ConfigError { line, key: key.to_string(), reason: reason.into() }
    }

    fn get<T>(&self, key: &str, parse: impl Fn(&str) -> Result<T, String>) -> Result<Option<T>, ConfigError> {
        match self.0.get(key) {
            None => Ok(None),
            Some(e) => parse(&e.value).map(Some).map_err(|reason| self.err(key, reason)),
        }
    }

    fn or<T>(&self, key: &str, default: T, parse: impl Fn(&str) -> Result<T, String>) -> Result<T, ConfigError> {
        Ok(self.get(key, parse)?.unwrap_or(default))
    }

    fn required<T>(&self, key: &str, parse: impl Fn(&str) -> Result<T, String>) -> Result<T, ConfigError> {
        self.get(key, parse)?.ok_or_else(|| self.err(key, "required key is missing"))
    }
}

fn real(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

fn probability(s: &str) -> Result<f64, String> {
    let v = real(s)?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is not in [0, 1]"))
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let v = real(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("{v} must be positive"))
    }
}

/// A number or a ratio `a/b`.
fn ratio(s: &str) -> Result<f64, String> {
    match s.split_once('/') {
        Some((a, b)) => {
            let (a, b) = (real(a.trim())?, real(b.trim())?);
            if b == 0.0 {
                return Err("division by zero".to_string());
            }
            Ok(a / b)
        }
        None => real(s),
    }
}

fn count(s: &str) -> Result<u64, String> {
    s.parse().map_err(|_| format!("'{s}' is not a non-negative integer"))
}

fn boolean(s: &str) -> Result<bool, String> {
    match s {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(format!("'{s}' is not true or false")),
    }
}

fn list<T>(s: &str, item: impl Fn(&str) -> Result<T, String>) -> Result<Vec<T>, String> {
    if s.trim().is_empty() {
        return Err("empty list".to_string());
    }
    s.split(',').map(|x| item(x.trim())).collect()
}

fn criterion(s: &str) -> Result<Criterion, String> {
    s.parse::<Criterion>().map_err(|_| {
        let names: Vec<_> = Criterion::ALL.iter().map(|c| c.as_str()).collect();
        format!("unknown criterion '{s}' (expected one of {})", names.join(", "))
    })
}

fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

pub fn check_levels(levels: usize) -> Result<usize, String> {
    if levels >= 2 && levels.is_power_of_two() && levels <= 256 {
        Ok(levels)
    } else {
        Err(format!("{levels} is not a power of two in [2, 256]"))
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Config, ConfigError> {
        let mut raw = BTreeMap::new();
        for (index, line) in text.lines().enumerate() {
            let line_no = index + 1;
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                let key = content.split_whitespace().next().unwrap_or(content).to_string();
                return Err(ConfigError { line: line_no, key, reason: "expected 'key = value'".to_string() });
            };
            let key = key.trim().to_string();
            if !KEYS.contains(&key.as_str()) {
                return Err(ConfigError { line: line_no, key, reason: "unknown key".to_string() });
            }
            if let Some(prev) = raw.get(&key).map(|e: &Entry| e.line) {
                return Err(ConfigError {
                    line: line_no,
                    key,
                    reason: format!("duplicate key (first set on line {prev})"),
                });
            }
            raw.insert(key, Entry { line: line_no, value: value.trim().to_string() });
        }
        let raw = Raw(raw);

        let mu0 = raw.or("mu0", 1.0, positive)?;
        let mu1 = raw.or("mu1", 2.0, positive)?;
        if mu1 <= mu0 {
            return Err(raw.err("mu1", format!("{mu1} must exceed mu0 = {mu0}")));
        }
        let sigma_ratio = raw.or("sigma_ratio", 0.12, |s| {
            let v = positive(s)?;
            if v < 0.5 {
                Ok(v)
            } else {
                Err(format!("{v} is not in (0, 0.5)"))
            }
        })?;
        let sigma0 = raw.get("sigma0", positive)?;
        let sigma1 = raw.get("sigma1", positive)?;
        let sigmas = match (sigma0, sigma1) {
            (Some(a), Some(b)) => Some((a, b)),
            (None, None) => None,
            (Some(_), None) => return Err(raw.err("sigma1", "must be given together with sigma0")),
            (None, Some(_)) => return Err(raw.err("sigma0", "must be given together with sigma1")),
        };

        let default_grid: Vec<f64> = (8..=14).map(|k| k as f64 / 100.0).collect();
        let sigma_ratio_grid = raw.or("sigma_ratio_grid", default_grid, |s| {
            let v = list(s, real)?;
            if !v.iter().all(|x| *x > 0.0 && *x < 0.5) {
                return Err("values must lie in (0, 0.5)".to_string());
            }
            if !strictly_increasing(&v) {
                return Err("values must be strictly increasing".to_string());
            }
            Ok(v)
        })?;

        let criteria = raw.or("criteria", Criterion::ALL.to_vec(), |s| {
            let v = list(s, criterion)?;
            for (i, c) in v.iter().enumerate() {
                if v[..i].contains(c) {
                    return Err(format!("criterion '{c}' listed twice"));
                }
            }
            Ok(v)
        })?;

        let thresholds = raw.get("thresholds", |s| {
            let v = list(s, real)?;
            if !strictly_increasing(&v) {
                return Err("values must be strictly increasing".to_string());
            }
            check_levels(v.len() + 1)
                .map_err(|_| format!("{} boundaries do not form a power-of-two level count", v.len()))?;
            Ok(v)
        })?;
        let levels = raw.get("levels", |s| check_levels(count(s)? as usize))?;
        let levels = match (&thresholds, levels) {
            (Some(t), Some(l)) if t.len() + 1 != l => {
                return Err(raw.err("levels", format!("{l} conflicts with {} thresholds", t.len())))
            }
            (Some(t), _) => t.len() + 1,
            (None, l) => l.unwrap_or(2),
        };

        let derivative_lo = raw.get("derivative_lo", real)?;
        let derivative_hi = raw.get("derivative_hi", real)?;
        let derivative_range = match (derivative_lo, derivative_hi) {
            (Some(lo), Some(hi)) if hi > lo => Some((lo, hi)),
            (Some(_), Some(_)) => return Err(raw.err("derivative_hi", "must exceed derivative_lo")),
            (None, None) => None,
            (Some(_), None) => return Err(raw.err("derivative_hi", "must be given together with derivative_lo")),
            (None, Some(_)) => return Err(raw.err("derivative_lo", "must be given together with derivative_hi")),
        };

        let config = Config {
            p0: raw.required("p0", probability)?,
            p1: raw.or("p1", 2e-4, probability)?,
            pr: raw.required("pr", probability)?,
            mu0,
            mu1,
            sigma_ratio,
            sigmas,
            sigma_ratio_grid,
            criteria,
            criterion: raw.or("criterion", Criterion::Capacity, criterion)?,
            blocklength: raw.or("blocklength", 128, |s| {
                let n = count(s)?;
                if n >= 1 {
                    Ok(n)
                } else {
                    Err("must be at least 1".to_string())
                }
            })?,
            rate: raw.or("rate", 110.0 / 128.0, |s| {
                let r = ratio(s)?;
                if r > 0.0 && r < 1.0 {
                    Ok(r)
                } else {
                    Err(format!("{r} is not in (0, 1)"))
                }
            })?,
            levels,
            thresholds,
            seed: raw.or("seed", 1, count)?,
            samples: raw.or("samples", 2_000_000, |s| {
                let n = count(s)?;
                if n >= 1 {
                    Ok(n)
                } else {
                    Err("must be at least 1".to_string())
                }
            })?,
            output: raw.get("output", |s| {
                if s.is_empty() {
                    Err("empty path".to_string())
                } else {
                    Ok(PathBuf::from(s))
                }
            })?,
            derivative_range,
            derivative_points: raw.or("derivative_points", 201, |s| {
                let n = count(s)? as usize;
                if n >= 2 {
                    Ok(n)
                } else {
                    Err("must be at least 2".to_string())
                }
            })?,
            lloyd_bac_weights: raw.or("lloyd_bac_weights", true, boolean)?,
            include_resistance: raw.or("include_resistance", true, boolean)?,
            z_limit: raw.or("z_limit", 4.0, positive)?,
            significance: raw.or("significance", 1e-3, |s| {
                let v = probability(s)?;
                if v > 0.0 && v < 1.0 {
                    Ok(v)
                } else {
                    Err(format!("{v} is not in (0, 1)"))
                }
            })?,
        };
        Ok(config)
    }

    /// Channel parameters at noise ratio `sigma_ratio`.
    pub fn params_at(&self, sigma_ratio: f64) -> Result<ChannelParams<f64>, qchan::Error> {
        ChannelParams::new(
            self.p0,
            self.p1,
            self.pr,
            self.mu0,
            self.mu1,
            sigma_ratio * self.mu0,
            sigma_ratio * self.mu1,
        )
    }

    /// Channel parameters for single-point commands.
    pub fn params(&self) -> Result<ChannelParams<f64>, qchan::Error> {
        match self.sigmas {
            Some((s0, s1)) => ChannelParams::new(self.p0, self.p1, self.pr, self.mu0, self.mu1, s0, s1),
            None => self.params_at(self.sigma_ratio),
        }
    }
}
