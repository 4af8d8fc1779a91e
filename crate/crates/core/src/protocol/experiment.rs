use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::circuits::{build_full_circuit_for, build_prep_circuit, Target};
use super::layout::{QubitLayout, Role};
use super::seeds::{
    child_seed, STREAM_CALIBRATION, STREAM_DIAGNOSTIC, STREAM_ENVIRONMENT, STREAM_SYSTEM,
};
use super::{ExperimentConfig, Shots};
use crate::channels::{
    apply_readout_noise, build_calibration, mitigate_distribution, run_noisy, CalibrationMatrix,
    NoiseModel, QubitConfusion,
};
use crate::entanglement::{
    concurrence_from_distribution, ConcurrenceEstimate, InitialState, QualityWarning,
};
use crate::error::{Error, Result};
use crate::gates::{transpile_to_basis, Circuit};
use crate::sim::{sample_distribution, DensityMatrix, QuantumState, StateVector};

fn stream(target: Target) -> u64 {
    match target {
        Target::System => STREAM_SYSTEM,
        Target::Environment => STREAM_ENVIRONMENT,
    }
}

/// Full circuit for one `γt` point, in the basis gate set.
pub fn build_full_circuit(cfg: &ExperimentConfig, gamma_t: f64, target: Target) -> Result<Circuit> {
    let c = build_full_circuit_for(&cfg.init, &cfg.layout, gamma_t, target, cfg.swap)?;
    transpile_to_basis(&c)
}

/// Rewrites per-qubit readout overrides from physical indices to the
/// layout's local indices, dropping qubits outside the layout.
pub fn localize_noise(noise: &NoiseModel, layout: &QubitLayout) -> NoiseModel {
    let physical = layout.physical_qubits();
    let readout_overrides = noise
        .readout_overrides
        .iter()
        .filter_map(|o| {
            Role::ALL
                .into_iter()
                .find(|&r| physical[r as usize] == o.qubit)
                .map(|r| QubitConfusion {
                    qubit: layout.local(r),
                    ..*o
                })
        })
        .collect();
    NoiseModel {
        readout_overrides,
        ..noise.clone()
    }
}

/// Distribution over `measured` at the end of `circuit`, started from the
/// all-zero state. Without noise this is the state-vector Born rule; with
/// noise the density-matrix engine runs gate noise and then readout noise.
pub fn outcome_distribution(
    circuit: &Circuit,
    noise: Option<&NoiseModel>,
    measured: &[usize],
) -> Result<Vec<f64>> {
    match noise {
        None => {
            let mut psi = StateVector::zero(circuit.n_qubits())?;
            circuit.run(&mut psi)?;
            psi.probabilities(measured)
        }
        Some(noise) => {
            let mut rho = DensityMatrix::from_pure(&StateVector::zero(circuit.n_qubits())?);
            run_noisy(circuit, &mut rho, noise)?;
            let ideal = rho.probabilities(measured)?;
            apply_readout_noise(&ideal, noise, measured)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesPoint {
    pub gamma_t: f64,
    /// Mean of the clipped per-repetition concurrence estimates.
    pub mean: f64,
    /// Standard error of the mean; zero for a single repetition.
    pub stderr: f64,
    pub estimates: Vec<ConcurrenceEstimate>,
    pub p010_mean: f64,
}

impl SeriesPoint {
    fn aggregate(gamma_t: f64, estimates: Vec<ConcurrenceEstimate>) -> Self {
        let n = estimates.len() as f64;
        let mean = estimates.iter().map(|e| e.value).sum::<f64>() / n;
        let p010_mean = estimates.iter().map(|e| e.p010).sum::<f64>() / n;
        let stderr = if estimates.len() > 1 {
            let var = estimates
                .iter()
                .map(|e| (e.value - mean).powi(2))
                .sum::<f64>()
                / (n - 1.0);
            (var / n).sqrt()
        } else {
            0.0
        };
        Self {
            gamma_t,
            mean,
            stderr,
            estimates,
            p010_mean,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        self.estimates.iter().map(|e| e.value).collect()
    }

    pub fn warnings(&self) -> impl Iterator<Item = &QualityWarning> {
        self.estimates.iter().filter_map(|e| e.warning.as_ref())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcurrenceSeries {
    pub target: Target,
    pub points: Vec<SeriesPoint>,
}

impl ConcurrenceSeries {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn gammas(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.gamma_t).collect()
    }

    pub fn means(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.mean).collect()
    }

    pub fn stderrs(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.stderr).collect()
    }

    pub fn p010_means(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.p010_mean).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub init: InitialState,
    pub layout: QubitLayout,
    pub mitigated: bool,
    pub system: Option<ConcurrenceSeries>,
    pub environment: Option<ConcurrenceSeries>,
}

impl ExperimentResult {
    pub fn series(&self, target: Target) -> Option<&ConcurrenceSeries> {
        match target {
            Target::System => self.system.as_ref(),
            Target::Environment => self.environment.as_ref(),
        }
    }
}

/// Seeds used by one (target, grid point, repetition) task.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DerivedSeed {
    pub target: Target,
    pub grid_index: usize,
    pub repetition: usize,
    pub sampling: u64,
    /// Shared by both targets at the same grid point and repetition.
    pub calibration: u64,
}

/// Every child seed `run_experiment` draws from, in run order. Empty in
/// exact mode, where nothing is sampled.
pub fn derived_seeds(cfg: &ExperimentConfig) -> Vec<DerivedSeed> {
    if cfg.shots == Shots::Exact {
        return Vec::new();
    }
    let mut out = Vec::new();
    for &target in cfg.target.targets() {
        for g in 0..cfg.grid.len() {
            for r in 0..cfg.repetitions {
                out.push(DerivedSeed {
                    target,
                    grid_index: g,
                    repetition: r,
                    sampling: child_seed(
                        cfg.seed,
                        cfg.set_index,
                        stream(target),
                        g as u64,
                        r as u64,
                    ),
                    calibration: child_seed(
                        cfg.seed,
                        cfg.set_index,
                        STREAM_CALIBRATION,
                        g as u64,
                        r as u64,
                    ),
                });
            }
        }
    }
    out
}

fn run_point(
    cfg: &ExperimentConfig,
    noise: Option<&NoiseModel>,
    target: Target,
    g: usize,
) -> Result<SeriesPoint> {
    let gamma_t = cfg.grid[g];
    let measured = cfg.layout.measured();
    let circuit = build_full_circuit(cfg, gamma_t, target)?;
    let dist = outcome_distribution(&circuit, noise, &measured)?;
    let mitigating = cfg.mitigation && noise.is_some();

    let estimates = match cfg.shots {
        Shots::Exact => {
            let dist = match noise {
                Some(n) if mitigating => {
                    mitigate_distribution(&dist, &CalibrationMatrix::exact(n, &measured))?
                }
                _ => dist,
            };
            let e = concurrence_from_distribution(&dist, None)?;
            vec![e; cfg.repetitions]
        }
        Shots::Count(shots) => (0..cfg.repetitions)
            .map(|r| {
                let seed = child_seed(cfg.seed, cfg.set_index, stream(target), g as u64, r as u64);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let counts = sample_distribution(&dist, shots, &mut rng);
                let freqs: Vec<f64> = counts.iter().map(|&k| k as f64 / shots as f64).collect();
                let freqs = match noise {
                    Some(n) if mitigating => {
                        let cal_seed = child_seed(
                            cfg.seed,
                            cfg.set_index,
                            STREAM_CALIBRATION,
                            g as u64,
                            r as u64,
                        );
                        let cal = build_calibration(n, &measured, shots, cal_seed)?;
                        mitigate_distribution(&freqs, &cal)?
                    }
                    _ => freqs,
                };
                concurrence_from_distribution(&freqs, Some(shots))
            })
            .collect::<Result<Vec<_>>>()?,
    };
    Ok(SeriesPoint::aggregate(gamma_t, estimates))
}

/// Runs every (target, grid point) task in parallel. Each task draws only
/// from its own child seeds, so the result does not depend on scheduling.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let noise = cfg.noise.as_ref().map(|n| localize_noise(n, &cfg.layout));
    let targets = cfg.target.targets();
    let tasks: Vec<(Target, usize)> = targets
        .iter()
        .flat_map(|&t| (0..cfg.grid.len()).map(move |g| (t, g)))
        .collect();
    let points = tasks
        .par_iter()
        .map(|&(t, g)| run_point(cfg, noise.as_ref(), t, g))
        .collect::<Result<Vec<_>>>()?;

    let mut chunks = points.chunks(cfg.grid.len());
    let mut take = |target: Target| {
        targets.contains(&target).then(|| ConcurrenceSeries {
            target,
            points: chunks.next().expect("one chunk per target").to_vec(),
        })
    };
    let system = take(Target::System);
    let environment = take(Target::Environment);
    Ok(ExperimentResult {
        init: cfg.init,
        layout: cfg.layout,
        mitigated: cfg.mitigation && cfg.noise.is_some(),
        system,
        environment,
    })
}

/// Runs simultaneous experiments on disjoint qubit sets. Sets never
/// interact, so each result equals the standalone run of its config.
pub fn parallel_sets_run(configs: &[ExperimentConfig]) -> Result<Vec<ExperimentResult>> {
    for (i, a) in configs.iter().enumerate() {
        for b in &configs[i + 1..] {
            if let Some(q) = a.layout.overlaps(&b.layout) {
                return Err(Error::OverlappingLayouts(q));
            }
        }
    }
    configs.par_iter().map(run_experiment).collect()
}

/// Ancilla ground-state population after state preparation, for each
/// `λ`. Returns `(λ/π, P(0))`. Readout noise on the ancilla is included.
pub fn ancilla_population_diagnostic(
    lambdas: &[f64],
    noise: Option<&NoiseModel>,
    shots: Shots,
    seed: u64,
) -> Result<Vec<(f64, f64)>> {
    if shots == Shots::Count(0) {
        return Err(Error::ZeroShots);
    }
    let layout = QubitLayout::default();
    let anc = [layout.local(Role::Ancilla)];
    lambdas
        .iter()
        .enumerate()
        .map(|(i, &lambda)| {
            let init = InitialState::from_lambda(lambda)?;
            let circuit = transpile_to_basis(&build_prep_circuit(&init, &layout)?)?;
            let dist = outcome_distribution(&circuit, noise, &anc)?;
            let p0 = match shots {
                Shots::Exact => dist[0],
                Shots::Count(n) => {
                    let s = child_seed(seed, 0, STREAM_DIAGNOSTIC, i as u64, 0);
                    let counts = sample_distribution(&dist, n, &mut ChaCha8Rng::seed_from_u64(s));
                    counts[0] as f64 / n as f64
                }
            };
            Ok((lambda / std::f64::consts::PI, p0))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Crossing {
    /// Sudden death: the series drops below the threshold.
    FallsBelow,
    /// Sudden birth: the series reaches the threshold.
    RisesAbove,
}

/// First grid point where the series crosses `threshold` and the following
/// point agrees. A crossing at the last point is accepted on its own.
pub fn debounced_crossing(
    gammas: &[f64],
    means: &[f64],
    threshold: f64,
    kind: Crossing,
) -> Option<f64> {
    let past = |m: f64| match kind {
        Crossing::FallsBelow => m < threshold,
        Crossing::RisesAbove => m >= threshold,
    };
    let n = gammas.len().min(means.len());
    (0..n)
        .find(|&i| past(means[i]) && (i + 1 == n || past(means[i + 1])))
        .map(|i| gammas[i])
}
