use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::rewiring::RewireConfig;
use crate::spectral::LaplacianVariant;

pub const WORKERS_ENV: &str = "GRASP_WORKERS";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetSpec {
    pub name: String,
    pub directory: PathBuf,
}

/// A rewiring method as listed in the config: the method object plus an
/// optional `"label"` naming it in outputs (defaults to the method name).
///
/// ```json
/// {"method": "laser", "label": "laser_full", "fraction": 1.0, "snapshots": 64}
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct MethodSpec {
    pub label: Option<String>,
    pub config: RewireConfig,
}

impl MethodSpec {
    pub fn new(config: RewireConfig) -> Self {
        Self { label: None, config }
    }

    pub fn labeled(label: impl Into<String>, config: RewireConfig) -> Self {
        Self {
            label: Some(label.into()),
            config,
        }
    }

    pub fn name(&self) -> String {
        self.label
            .clone()
            .unwrap_or_else(|| self.config.method().name().to_string())
    }
}

impl<'de> Deserialize<'de> for MethodSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let mut map = Map::deserialize(d)?;
        let label = match map.remove("label") {
            None => None,
            Some(Value::String(s)) => Some(s),
            Some(other) => return Err(D::Error::custom(format!("label must be a string, got {other}"))),
        };
        let config = RewireConfig::deserialize(Value::Object(map)).map_err(D::Error::custom)?;
        Ok(Self { label, config })
    }
}

impl Serialize for MethodSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut value = serde_json::to_value(&self.config).map_err(serde::ser::Error::custom)?;
        if let (Some(label), Value::Object(map)) = (&self.label, &mut value) {
            map.insert("label".into(), Value::String(label.clone()));
        }
        value.serialize(s)
    }
}

/// Names end up in output file names.
fn plain_name(s: &str) -> bool {
    !s.is_empty()
        && s
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

fn yes() -> bool {
    true
}

fn two() -> f64 {
    2.0
}

/// One run: every listed method applied to every listed dataset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub datasets: Vec<DatasetSpec>,
    pub methods: Vec<MethodSpec>,
    /// Compute the five similarity measures for each method.
    #[serde(default = "yes")]
    pub similarity: bool,
    /// Laplacian used by the spectrum distance.
    #[serde(default)]
    pub laplacian_variant: LaplacianVariant,
    /// Exponent of the spectrum distance.
    #[serde(default = "two")]
    pub p: f64,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
    /// Worker threads; `None` uses all cores. `GRASP_WORKERS` overrides.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

impl PipelineConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.datasets.is_empty() {
            return Err(Error::Config("no datasets configured".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::Config("no methods configured".into()));
        }
        let mut names = BTreeSet::new();
        for d in &self.datasets {
            if !plain_name(&d.name) || !names.insert(&d.name) {
                return Err(Error::Config(format!(
                    "dataset name {:?} is repeated or not made of letters, digits, '_', '-', '.'",
                    d.name
                )));
            }
        }
        let mut labels = BTreeSet::new();
        for m in &self.methods {
            m.config.validate()?;
            let name = m.name();
            if !plain_name(&name) || name == "original" || !labels.insert(name.clone()) {
                return Err(Error::Config(format!(
                    "method label {name:?} is reserved, repeated or not made of letters, digits, '_', '-', '.'"
                )));
            }
        }
        if !(self.p >= 1.0 && self.p.is_finite()) {
            return Err(Error::Config(format!("p must be at least 1, got {}", self.p)));
        }
        if self.workers == Some(0) {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        Ok(())
    }

    /// Worker count after applying the environment override.
    pub fn effective_workers(&self) -> Result<Option<usize>> {
        match std::env::var(WORKERS_ENV) {
            Ok(v) => match v.trim().parse::<usize>() {
                Ok(n) if n > 0 => Ok(Some(n)),
                _ => Err(Error::Config(format!("{WORKERS_ENV} must be a positive integer, got {v:?}"))),
            },
            Err(_) => Ok(self.workers),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"{
        "datasets": [{"name": "MUTAG", "directory": "data/MUTAG"}],
        "methods": [{"method": "gtr", "budget": 5}, {"method": "laser", "label": "laser_full", "fraction": 1.0}],
        "output_dir": "out"
    }"#;

    #[test]
    fn parses_with_defaults() {
        let c = PipelineConfig::from_json(BASE).unwrap();
        assert!(c.similarity);
        assert_eq!(c.p, 2.0);
        assert_eq!(c.seed, 0);
        assert_eq!(c.methods[0].name(), "gtr");
        assert_eq!(c.methods[1].name(), "laser_full");
    }

    #[test]
    fn round_trips() {
        let c = PipelineConfig::from_json(BASE).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(PipelineConfig::from_json(&text).unwrap(), c);
    }

    #[test]
    fn rejects_bad_configs() {
        let bad = [
            BASE.replace(r#""output_dir""#, r#""outptu_dir""#),
            BASE.replace(r#""budget": 5"#, r#""budgte": 5"#),
            BASE.replace(r#"{"method": "gtr", "budget": 5}, "#, r#"{"method": "laser", "label": "laser_full"}, "#),
            r#"{"datasets": [{"name": "A", "directory": "."}], "methods": [], "output_dir": "o"}"#.to_string(),
            r#"{"datasets": [], "methods": [{"method": "gtr"}], "output_dir": "o"}"#.to_string(),
            BASE.replace(r#""output_dir": "out""#, r#""output_dir": "out", "p": 0.5"#),
            BASE.replace(r#""fraction": 1.0"#, r#""fraction": 2.0"#),
        ];
        for text in bad {
            assert!(matches!(PipelineConfig::from_json(&text), Err(Error::Config(_))), "{text}");
        }
    }
}
