//! Repeated runs over a grid of synthetic settings.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ari;
use crate::attributes::DtwCost;
use crate::error::{Error, Result};
use crate::ot::CgOptions;
use crate::pipeline::{run_method, Method, RunParams};
use crate::synth::{Shape, Structure, SyntheticSpec};

fn default_sizes() -> Vec<usize> {
    vec![40; 5]
}
fn default_alpha() -> Vec<f64> {
    vec![0.5]
}
fn default_half() -> f64 {
    0.5
}
fn default_b() -> f64 {
    1.0
}
fn default_max_outer() -> usize {
    50
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub name: String,
    pub reps: usize,
    #[serde(default = "default_sizes")]
    pub sizes: Vec<usize>,
    pub shapes: Vec<Shape>,
    pub t: Vec<f64>,
    /// Attribute perturbation levels; empty means plain graphs.
    #[serde(default)]
    pub levels: Vec<u8>,
    #[serde(default = "default_alpha")]
    pub alpha: Vec<f64>,
    #[serde(default = "default_half")]
    pub beta: f64,
    #[serde(default = "default_b")]
    pub b: f64,
    #[serde(default)]
    pub structure: Structure,
    #[serde(default)]
    pub noise_sigma: Option<f64>,
    #[serde(default)]
    pub dtw_cost: DtwCost,
    /// Method labels such as `srgw-mean` or `embedded-frechet-kmeans@on-d1`.
    pub methods: Vec<String>,
    #[serde(default)]
    pub cg: CgOptions,
    #[serde(default = "default_max_outer")]
    pub max_outer: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Setting {
    pub shape: Shape,
    pub t: f64,
    pub level: Option<u8>,
    pub alpha: f64,
}

impl Setting {
    /// Identifies the generated instance; `alpha` only affects the methods.
    pub fn instance_key(&self, sizes: &[usize]) -> String {
        format!(
            "{}|{}|{}|{:?}",
            self.shape.label(),
            self.t,
            self.level.map_or(0, u32::from),
            sizes
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SettingResult {
    pub setting: Setting,
    pub method: String,
    pub aris: Vec<f64>,
    pub seconds: Vec<f64>,
}

fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        f64::NAN
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}

impl SettingResult {
    pub fn mean_ari(&self) -> f64 {
        mean(&self.aris)
    }

    /// Sample standard deviation; zero for a single repetition.
    pub fn std_ari(&self) -> f64 {
        let n = self.aris.len();
        if n < 2 {
            return 0.0;
        }
        let m = self.mean_ari();
        (self.aris.iter().map(|a| (a - m) * (a - m)).sum::<f64>() / (n - 1) as f64).sqrt()
    }

    pub fn mean_seconds(&self) -> f64 {
        mean(&self.seconds)
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn fnv1a(text: &str) -> u64 {
    text.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

/// Seed of repetition `rep` of the instance identified by `key`.
pub fn rep_seed(master: u64, key: &str, rep: usize) -> u64 {
    splitmix64(splitmix64(master ^ fnv1a(key)).wrapping_add(rep as u64))
}

impl ExperimentConfig {
    pub fn parsed_methods(&self) -> Result<Vec<Method>> {
        self.methods.iter().map(|m| m.parse()).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::InvalidParameter("reps must be positive".into()));
        }
        if self.shapes.is_empty() || self.t.is_empty() || self.alpha.is_empty() || self.methods.is_empty() {
            return Err(Error::InvalidParameter("shapes, t, alpha and methods must be nonempty".into()));
        }
        self.parsed_methods()?;
        Ok(())
    }

    /// Settings in grid order: shape, t, level, alpha.
    pub fn settings(&self) -> Vec<Setting> {
        let levels: Vec<Option<u8>> = if self.levels.is_empty() {
            vec![None]
        } else {
            self.levels.iter().copied().map(Some).collect()
        };
        let mut out = Vec::new();
        for &shape in &self.shapes {
            for &t in &self.t {
                for &level in &levels {
                    for &alpha in &self.alpha {
                        out.push(Setting { shape, t, level, alpha });
                    }
                }
            }
        }
        out
    }

    pub fn spec(&self, setting: &Setting) -> SyntheticSpec {
        SyntheticSpec {
            sizes: self.sizes.clone(),
            shape: setting.shape,
            b: self.b,
            t: setting.t,
            level: setting.level,
            structure: self.structure,
            noise_sigma: self.noise_sigma,
        }
    }

    pub fn run_params(&self, alpha: f64) -> RunParams {
        RunParams {
            alpha,
            cg: self.cg,
            max_outer: self.max_outer,
            ..RunParams::default()
        }
    }
}

/// ARI and runtime of every method on one repetition.
pub fn run_rep(cfg: &ExperimentConfig, setting: &Setting, methods: &[Method], seed: u64) -> Result<Vec<(f64, f64)>> {
    let synthetic = cfg.spec(setting).generate(seed)?;
    let instance = synthetic.instance(cfg.beta, cfg.dtw_cost)?;
    let params = cfg.run_params(setting.alpha);
    methods
        .iter()
        .map(|&m| {
            let out = run_method(&instance, m, &params, seed)?;
            Ok((ari(&out.partition, &synthetic.truth)?, out.seconds))
        })
        .collect()
}

/// All repetitions of one setting, run in parallel on the current rayon pool.
pub fn run_setting(cfg: &ExperimentConfig, setting: &Setting, master_seed: u64) -> Result<Vec<SettingResult>> {
    let methods = cfg.parsed_methods()?;
    let key = setting.instance_key(&cfg.sizes);
    let reps: Vec<Vec<(f64, f64)>> = (0..cfg.reps)
        .into_par_iter()
        .map(|rep| run_rep(cfg, setting, &methods, rep_seed(master_seed, &key, rep)))
        .collect::<Result<_>>()?;
    Ok(methods
        .iter()
        .enumerate()
        .map(|(mi, m)| SettingResult {
            setting: *setting,
            method: m.to_string(),
            aris: reps.iter().map(|r| r[mi].0).collect(),
            seconds: reps.iter().map(|r| r[mi].1).collect(),
        })
        .collect())
}

pub fn monte_carlo(cfg: &ExperimentConfig, master_seed: u64) -> Result<Vec<SettingResult>> {
    cfg.validate()?;
    let mut out = Vec::new();
    for setting in cfg.settings() {
        out.extend(run_setting(cfg, &setting, master_seed)?);
    }
    Ok(out)
}
