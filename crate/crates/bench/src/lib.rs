//! Shared fixtures for the criterion benchmarks.

use esdsim_core::{ExperimentConfig, InitialState, NoiseModel, Shots};

/// Full-scale (20 000 shots, 10 repetitions) sampled configuration for one set with the default noise.
pub fn noisy_config(alpha: f64) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(InitialState::from_alpha(alpha).expect("alpha in (0, 1]"));
    cfg.noise = Some(NoiseModel::default());
    cfg.mitigation = true;
    cfg
}

/// Single grid point, exact probabilities, no noise.
pub fn exact_point(alpha: f64, gamma_t: f64) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(InitialState::from_alpha(alpha).expect("alpha in (0, 1]"));
    cfg.grid = vec![gamma_t];
    cfg.shots = Shots::Exact;
    cfg.repetitions = 1;
    cfg
}
