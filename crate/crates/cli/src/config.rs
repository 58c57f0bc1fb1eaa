//! TOML configs for each subcommand. Command-line flags override file values.

use std::fs;
use std::path::Path;

use graphot::attributes::DtwCost;
use graphot::ot::CgOptions;
use graphot::synth::Shape;
use serde::de::{DeserializeOwned, IntoDeserializer};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(CliError::io(path))?;
    toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {}", path.display(), e.message())))
}

/// Parses a kebab-case enum label such as `chain` or `squared`.
pub fn parse_label<T: DeserializeOwned>(what: &str, s: &str) -> Result<T> {
    T::deserialize(s.into_deserializer())
        .map_err(|e: serde::de::value::Error| CliError::Config(format!("invalid {what} {s:?}: {e}")))
}

fn default_b() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerateConfig {
    pub sizes: Vec<usize>,
    pub shape: Shape,
    pub t: f64,
    #[serde(default = "default_b")]
    pub b: f64,
    /// Attribute perturbation level in 1..=5; omitted for plain graphs.
    #[serde(default)]
    pub level: Option<u8>,
    #[serde(default)]
    pub seed: Option<u64>,
}

fn default_alpha() -> f64 {
    0.5
}
fn default_max_outer() -> usize {
    50
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClusterConfig {
    #[serde(default)]
    pub method: Option<String>,
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_alpha")]
    pub beta: f64,
    #[serde(default)]
    pub dtw_cost: DtwCost,
    #[serde(default = "default_max_outer")]
    pub max_outer: usize,
    #[serde(default)]
    pub cg: CgOptions,
    #[serde(default)]
    pub seed: Option<u64>,
}

impl Default for ClusterConfig {
    fn default() -> Self {
        Self {
            method: None,
            k: None,
            alpha: default_alpha(),
            beta: default_alpha(),
            dtw_cost: DtwCost::default(),
            max_outer: default_max_outer(),
            cg: CgOptions::default(),
            seed: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_parse() {
        assert_eq!(parse_label::<Shape>("shape", "donut").unwrap(), Shape::Donut);
        assert_eq!(parse_label::<DtwCost>("cost", "squared").unwrap(), DtwCost::Squared);
        assert!(matches!(parse_label::<Shape>("shape", "ring"), Err(CliError::Config(_))));
    }

    #[test]
    fn generate_config_from_toml() {
        let cfg: GenerateConfig = toml::from_str("sizes = [3, 2]\nshape = \"chain\"\nt = 1.5\nlevel = 2\n").unwrap();
        assert_eq!(cfg.b, 1.0);
        assert_eq!(cfg.level, Some(2));
        assert!(toml::from_str::<GenerateConfig>("sizes = [3]\nshape = \"ring\"\nt = 1.0\n").is_err());
    }

    #[test]
    fn cluster_config_nested_cg() {
        let cfg: ClusterConfig = toml::from_str("method = \"srgw-mean\"\nk = 3\n[cg]\nmax_iter = 20\ntol = 1e-6\n").unwrap();
        assert_eq!(cfg.cg.max_iter, 20);
        assert_eq!(cfg.alpha, 0.5);
    }
}
