//! Job configuration: a small JSON document naming a rule set, an
//! alteration, the extent to compute, similarity radii, and an output path.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{Alteration, Position, Rule, RuleSet};

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum ConfigError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Semantic(String),
}

/// How much of the quarter-plane to compute: a column count or a w×h box.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Extent {
    Columns(i64),
    Box(i64, i64),
}

/// One parsed job. Unknown keys are rejected; missing keys take defaults
/// (Wythoff rules, empty alteration, the standard radius sweep).
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct JobConfig {
    pub rules: Vec<(i64, i64)>,
    pub p: Vec<(i64, i64)>,
    pub n: Vec<(i64, i64)>,
    pub extent: Option<Extent>,
    pub radii: Vec<i64>,
    pub out: Option<PathBuf>,
}

impl Default for JobConfig {
    fn default() -> Self {
        JobConfig {
            rules: vec![(1, 0), (0, 1), (1, 1)],
            p: Vec::new(),
            n: Vec::new(),
            extent: None,
            radii: vec![250, 500, 1000, 2000],
            out: None,
        }
    }
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<JobConfig, ConfigError> {
    let config: JobConfig = serde_json::from_str(text).map_err(|e| ConfigError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    config.validate()?;
    Ok(config)
}

impl JobConfig {
    pub fn serialize(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if self.rules.is_empty() {
            return Err(ConfigError::Semantic("rules must not be empty".into()));
        }
        for (i, &(a, b)) in self.rules.iter().enumerate() {
            if a < 0 || b < 0 || (a, b) == (0, 0) {
                return Err(ConfigError::Semantic(format!(
                    "rule ({a}, {b}) is invalid: components must be non-negative and not both zero"
                )));
            }
            if self.rules[..i].contains(&(a, b)) {
                return Err(ConfigError::Semantic(format!("duplicate rule ({a}, {b})")));
            }
        }
        for &(x, y) in self.p.iter().chain(&self.n) {
            if x < 0 || y < 0 {
                return Err(ConfigError::Semantic(format!(
                    "altered position ({x}, {y}) has a negative coordinate"
                )));
            }
        }
        for &(x, y) in &self.p {
            if self.n.contains(&(x, y)) {
                return Err(ConfigError::Semantic(format!(
                    "position ({x}, {y}) appears in both p and n"
                )));
            }
        }
        match self.extent {
            Some(Extent::Columns(t)) if t < 0 => {
                return Err(ConfigError::Semantic(format!("extent {t} is negative")));
            }
            Some(Extent::Box(w, h)) if w < 1 || h < 1 => {
                return Err(ConfigError::Semantic(format!(
                    "extent box {w}x{h} must be at least 1x1"
                )));
            }
            _ => {}
        }
        for &r in &self.radii {
            if r < 1 {
                return Err(ConfigError::Semantic(format!(
                    "radius {r} must be positive"
                )));
            }
        }
        Ok(())
    }

    pub fn ruleset(&self) -> RuleSet {
        RuleSet::new(self.rules.iter().map(|&(a, b)| Rule::new(a, b)).collect())
    }

    pub fn alteration(&self) -> Alteration {
        Alteration::new(
            self.p.iter().map(|&(x, y)| Position::new(x, y)),
            self.n.iter().map(|&(x, y)| Position::new(x, y)),
        )
        .expect("validated config cannot overlap")
    }
}
