//! End-to-end experiment pipeline: circuit assembly per `γt` point, shot
//! repetitions, noise, mitigation and aggregation into concurrence series.

mod circuits;
mod experiment;
mod layout;
mod seeds;

pub use circuits::{
    build_full_circuit_for, build_pre_witness_circuit, build_prep_circuit, env_swap_gates,
    evolution_gates, prep_gates, witness_gates, witness_stage_check, SwapStyle, Target,
};
pub use experiment::{
    ancilla_population_diagnostic, build_full_circuit, debounced_crossing, derived_seeds,
    localize_noise, outcome_distribution, parallel_sets_run, run_experiment, ConcurrenceSeries,
    Crossing, DerivedSeed, ExperimentResult, SeriesPoint,
};
pub use layout::{QubitLayout, Role};
pub use seeds::{
    child_seed, splitmix64, STREAM_CALIBRATION, STREAM_DIAGNOSTIC, STREAM_ENVIRONMENT,
    STREAM_SYSTEM,
};

use crate::channels::NoiseModel;
use crate::entanglement::InitialState;
use crate::error::{Error, Result};

/// Number of shots per repetition, or exact Born probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shots {
    Exact,
    Count(u64),
}

impl Shots {
    pub fn count(&self) -> Option<u64> {
        match *self {
            Shots::Exact => None,
            Shots::Count(n) => Some(n),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum TargetSelection {
    System,
    Environment,
    #[default]
    Both,
}

impl TargetSelection {
    pub fn targets(&self) -> &'static [Target] {
        match self {
            TargetSelection::System => &[Target::System],
            TargetSelection::Environment => &[Target::Environment],
            TargetSelection::Both => &[Target::System, Target::Environment],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub init: InitialState,
    pub grid: Vec<f64>,
    pub shots: Shots,
    pub repetitions: usize,
    pub seed: u64,
    /// Mixed into every child seed so simultaneous sets draw independently.
    pub set_index: u64,
    /// `None` runs the pure state-vector engine.
    pub noise: Option<NoiseModel>,
    pub mitigation: bool,
    pub layout: QubitLayout,
    pub target: TargetSelection,
    pub swap: SwapStyle,
}

impl ExperimentConfig {
    /// Noiseless, 20 000 shots, 10 repetitions, default grid.
    pub fn new(init: InitialState) -> Self {
        Self {
            init,
            grid: default_grid(),
            shots: Shots::Count(20_000),
            repetitions: 10,
            seed: 0,
            set_index: 0,
            noise: None,
            mitigation: false,
            layout: QubitLayout::default(),
            target: TargetSelection::Both,
            swap: SwapStyle::ThreeCx,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.shots == Shots::Count(0) {
            return Err(Error::ZeroShots);
        }
        if self.repetitions == 0 {
            return Err(Error::InvalidConfig(
                "repetitions must be at least 1".into(),
            ));
        }
        if self.grid.is_empty() {
            return Err(Error::InvalidConfig("grid must be non-empty".into()));
        }
        if let Some(&t) = self.grid.iter().find(|t| !t.is_finite() || **t < 0.0) {
            return Err(Error::NegativeTime(t));
        }
        if self.grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidConfig(
                "grid must be strictly increasing".into(),
            ));
        }
        if let Some(noise) = &self.noise {
            noise.validate()?;
        }
        Ok(())
    }
}

/// `points` uniform values from `min` to `max` inclusive.
pub fn uniform_grid(min: f64, max: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![min],
        _ => {
            let step = (max - min) / (points - 1) as f64;
            (0..points).map(|i| min + step * i as f64).collect()
        }
    }
}

/// 16 uniform points on `[0, 3]`.
pub fn default_grid() -> Vec<f64> {
    uniform_grid(0.0, 3.0, 16)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_shape() {
        let g = default_grid();
        assert_eq!(g.len(), 16);
        assert_eq!(g[0], 0.0);
        assert!((g[15] - 3.0).abs() < 1e-15);
        assert!((g[1] - 0.2).abs() < 1e-15);
    }

    #[test]
    fn validation_errors() {
        let init = InitialState::from_alpha(0.5).unwrap();
        let mut cfg = ExperimentConfig::new(init);
        assert!(cfg.validate().is_ok());

        cfg.grid.clear();
        match cfg.validate() {
            Err(Error::InvalidConfig(msg)) => assert!(msg.contains("grid must be non-empty")),
            other => panic!("{other:?}"),
        }
        cfg.grid = vec![0.0, 0.5, 0.5];
        assert!(cfg.validate().is_err());
        cfg.grid = vec![-0.1, 0.5];
        assert_eq!(cfg.validate(), Err(Error::NegativeTime(-0.1)));
        cfg.grid = vec![0.1];
        cfg.shots = Shots::Count(0);
        assert_eq!(cfg.validate(), Err(Error::ZeroShots));
        cfg.shots = Shots::Exact;
        cfg.repetitions = 0;
        assert!(cfg.validate().is_err());
    }
}
