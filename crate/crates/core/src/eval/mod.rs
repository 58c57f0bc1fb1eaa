mod metrics;
mod monte_carlo;

pub use metrics::{ari, rand_index};
pub use monte_carlo::{monte_carlo, rep_seed, run_rep, run_setting, ExperimentConfig, Setting, SettingResult};
