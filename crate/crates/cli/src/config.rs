//! Run configuration: a flat `key = value` file.
//!
//! Keys may be written dotted (`points.type = gauss`) or grouped under a
//! `[points]` header. `#` starts a comment. Values may be quoted. Relative
//! paths resolve against the directory holding the config file.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use hyperac_core::solver::{steps_for, ProbeGrid};
use hyperac_core::{equal_area_rule, gauss_product_rule, load_rule, random_rule, QuadratureRule};
use serde::Serialize;
use thiserror::Error;

const TOP_LEVEL: &[&str] = &[
    "nu",
    "tau",
    "degree",
    "steps",
    "t_final",
    "energy.exactness",
    "grid.nlat",
    "grid.nlon",
    "alpha0",
    "snapshot_every",
    "output.dir",
];
const POINT_FIELDS: &[&str] = &["type", "m", "seed", "path", "exactness"];
const POINT_SECTIONS: &[&str] = &["points", "init_points"];

#[derive(Debug, Error)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub key: Option<String>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        if let Some(key) = &self.key {
            write!(f, "key `{key}`: ")?;
        }
        f.write_str(&self.message)
    }
}

#[derive(Debug, Clone)]
struct Entry {
    value: String,
    line: usize,
}

/// Parsed but not yet validated key/value pairs.
#[derive(Debug, Default)]
pub struct RawConfig {
    entries: BTreeMap<String, Entry>,
}

fn is_known(key: &str) -> bool {
    if TOP_LEVEL.contains(&key) {
        return true;
    }
    match key.split_once('.') {
        Some((section, field)) => {
            POINT_SECTIONS.contains(&section) && POINT_FIELDS.contains(&field)
        }
        None => false,
    }
}

fn unquote(v: &str) -> &str {
    let v = v.trim();
    for q in ['"', '\''] {
        if v.len() >= 2 && v.starts_with(q) && v.ends_with(q) {
            return &v[1..v.len() - 1];
        }
    }
    v
}

/// Drops a trailing `#` comment that is not inside a quoted value.
fn strip_comment(line: &str) -> &str {
    let mut open: Option<char> = None;
    for (i, c) in line.char_indices() {
        match (open, c) {
            (None, '#') => return &line[..i],
            (None, '"' | '\'') => open = Some(c),
            (Some(q), c) if c == q => open = None,
            _ => {}
        }
    }
    line
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut raw = Self::default();
        let mut section: Option<String> = None;
        for (i, line) in text.lines().enumerate() {
            let lineno = i + 1;
            let content = strip_comment(line).trim();
            if content.is_empty() {
                continue;
            }
            if let Some(name) = content.strip_prefix('[') {
                let name = name.strip_suffix(']').ok_or_else(|| ConfigError {
                    line: Some(lineno),
                    key: None,
                    message: format!("malformed section header `{content}`"),
                })?;
                let name = name.trim();
                if !["points", "init_points", "energy", "grid", "output"].contains(&name) {
                    return Err(ConfigError {
                        line: Some(lineno),
                        key: Some(name.to_string()),
                        message: "unknown section".into(),
                    });
                }
                section = Some(name.to_string());
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| ConfigError {
                line: Some(lineno),
                key: None,
                message: format!("expected `key = value`, found `{content}`"),
            })?;
            let key = key.trim();
            let full = match &section {
                Some(s) if !key.contains('.') => format!("{s}.{key}"),
                _ => key.to_string(),
            };
            if !is_known(&full) {
                return Err(ConfigError {
                    line: Some(lineno),
                    key: Some(full),
                    message: "unknown key".into(),
                });
            }
            let entry = Entry {
                value: unquote(value).to_string(),
                line: lineno,
            };
            if let Some(prev) = raw.entries.insert(full.clone(), entry) {
                return Err(ConfigError {
                    line: Some(lineno),
                    key: Some(full),
                    message: format!("duplicate key (first set on line {})", prev.line),
                });
            }
        }
        Ok(raw)
    }

    fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.get(key)
    }

    fn invalid(&self, key: &str, message: impl Into<String>) -> ConfigError {
        ConfigError {
            line: self.get(key).map(|e| e.line),
            key: Some(key.to_string()),
            message: message.into(),
        }
    }

    fn parse_value<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some(e) => e
                .value
                .parse::<T>()
                .map(Some)
                .map_err(|_| self.invalid(key, format!("cannot parse `{}`", e.value))),
        }
    }

    fn required<T: std::str::FromStr>(&self, key: &str) -> Result<T, ConfigError> {
        self.parse_value(key)?
            .ok_or_else(|| self.invalid(key, "missing required key"))
    }

    fn positive(&self, key: &str) -> Result<f64, ConfigError> {
        let v: f64 = self.required(key)?;
        if !(v.is_finite() && v > 0.0) {
            return Err(self.invalid(key, format!("must be a positive number, got {v}")));
        }
        Ok(v)
    }
}

/// Where a point set comes from.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum PointSpec {
    Gauss { exactness: usize },
    Random { m: usize, seed: u64 },
    EqualArea { m: usize },
    File { path: PathBuf },
}

impl PointSpec {
    fn from_section(
        raw: &RawConfig,
        section: &str,
        default_exactness: usize,
        base: &Path,
    ) -> Result<Self, ConfigError> {
        let key = |f: &str| format!("{section}.{f}");
        let kind: String = raw.required(&key("type"))?;
        let allowed: &[&str] = match kind.as_str() {
            "gauss" => &["type", "exactness"],
            "random" => &["type", "m", "seed"],
            "equal-area" => &["type", "m"],
            "file" => &["type", "path"],
            other => {
                return Err(raw.invalid(
                    &key("type"),
                    format!(
                        "unknown point type `{other}` (expected gauss, random, equal-area or file)"
                    ),
                ))
            }
        };
        for field in POINT_FIELDS {
            if !allowed.contains(field) && raw.get(&key(field)).is_some() {
                return Err(raw.invalid(&key(field), format!("not used by point type `{kind}`")));
            }
        }
        let count = |raw: &RawConfig| -> Result<usize, ConfigError> {
            let m: usize = raw.required(&key("m"))?;
            if m == 0 {
                return Err(raw.invalid(&key("m"), "must be at least 1"));
            }
            Ok(m)
        };
        Ok(match kind.as_str() {
            "gauss" => Self::Gauss {
                exactness: raw
                    .parse_value(&key("exactness"))?
                    .unwrap_or(default_exactness),
            },
            "random" => Self::Random {
                m: count(raw)?,
                seed: raw.required(&key("seed"))?,
            },
            "equal-area" => Self::EqualArea { m: count(raw)? },
            _ => {
                let p: String = raw.required(&key("path"))?;
                Self::File { path: base.join(p) }
            }
        })
    }

    pub fn build(&self) -> hyperac_core::Result<QuadratureRule> {
        Ok(match self {
            Self::Gauss { exactness } => gauss_product_rule(*exactness),
            Self::Random { m, seed } => random_rule(*m, *seed),
            Self::EqualArea { m } => equal_area_rule(*m),
            Self::File { path } => load_rule(path)?,
        })
    }
}

/// A validated run configuration with every default resolved.
#[derive(Debug, Clone, Serialize)]
pub struct RunSpec {
    pub nu: f64,
    pub tau: f64,
    pub degree: usize,
    pub steps: usize,
    pub t_final: Option<f64>,
    pub points: PointSpec,
    pub init_points: Option<PointSpec>,
    pub energy_exactness: usize,
    pub grid_nlat: usize,
    pub grid_nlon: usize,
    pub alpha0: Option<f64>,
    pub snapshot_every: usize,
    pub output_dir: PathBuf,
}

impl RunSpec {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            line: None,
            key: None,
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_raw(&RawConfig::parse(&text)?, base)
    }

    pub fn from_raw(raw: &RawConfig, base: &Path) -> Result<Self, ConfigError> {
        let nu = raw.positive("nu")?;
        let tau = raw.positive("tau")?;
        let degree: usize = raw.required("degree")?;
        if degree == 0 {
            return Err(raw.invalid("degree", "must be at least 1"));
        }

        let (steps, t_final) = match (raw.get("steps"), raw.get("t_final")) {
            (Some(_), Some(_)) => {
                return Err(raw.invalid("t_final", "give either `steps` or `t_final`, not both"))
            }
            (None, None) => {
                return Err(raw.invalid("steps", "one of `steps` or `t_final` is required"))
            }
            (Some(_), None) => (raw.required::<usize>("steps")?, None),
            (None, Some(_)) => {
                let t: f64 = raw.required("t_final")?;
                if !(t.is_finite() && t >= 0.0) {
                    return Err(
                        raw.invalid("t_final", format!("must be a finite time >= 0, got {t}"))
                    );
                }
                (steps_for(t, tau), Some(t))
            }
        };

        let points = PointSpec::from_section(raw, "points", 2 * degree, base)?;
        let init_points = if raw.entries.keys().any(|k| k.starts_with("init_points.")) {
            Some(PointSpec::from_section(
                raw,
                "init_points",
                2 * degree,
                base,
            )?)
        } else {
            None
        };

        let energy_exactness = raw.parse_value("energy.exactness")?.unwrap_or(4 * degree);
        let default_grid = ProbeGrid::default_for(degree);
        let grid_nlat = raw.parse_value("grid.nlat")?.unwrap_or(default_grid.nlat);
        let grid_nlon = raw.parse_value("grid.nlon")?.unwrap_or(default_grid.nlon);
        let min = ProbeGrid::minimum_for(degree);
        if grid_nlat < min.nlat {
            return Err(raw.invalid(
                "grid.nlat",
                format!("must be at least {} for degree {degree}", min.nlat),
            ));
        }
        if grid_nlon < min.nlon {
            return Err(raw.invalid(
                "grid.nlon",
                format!("must be at least {} for degree {degree}", min.nlon),
            ));
        }

        let alpha0: Option<f64> = raw.parse_value("alpha0")?;
        if let Some(a) = alpha0 {
            if !(a.is_finite() && a >= 0.0) {
                return Err(raw.invalid("alpha0", format!("must be finite and >= 0, got {a}")));
            }
        }
        let snapshot_every = raw.parse_value("snapshot_every")?.unwrap_or(0);
        let output_dir = base.join(
            raw.parse_value::<String>("output.dir")?
                .unwrap_or_else(|| "output".to_string()),
        );

        Ok(Self {
            nu,
            tau,
            degree,
            steps,
            t_final,
            points,
            init_points,
            energy_exactness,
            grid_nlat,
            grid_nlon,
            alpha0,
            snapshot_every,
            output_dir,
        })
    }

    /// Non-fatal concerns about the configuration.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.tau >= 2.0 {
            out.push(format!(
                "tau = {} is outside the stable range 0 < tau < 2; the run may blow up",
                self.tau
            ));
        }
        if self.energy_exactness < 4 * self.degree {
            out.push(format!(
                "energy.exactness = {} is below 4N = {}; the continuous energy is only approximate",
                self.energy_exactness,
                4 * self.degree
            ));
        }
        out
    }
}
