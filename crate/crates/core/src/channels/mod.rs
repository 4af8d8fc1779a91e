//! Amplitude damping through a purification qubit, the gate/readout noise
//! model, and calibration-matrix readout mitigation.

mod damping;
mod mitigation;
mod noise;

pub use damping::{build_damping_circuit, damping_gates, DampingParams};
pub use mitigation::{build_calibration, mitigate, mitigate_distribution, nnls, CalibrationMatrix};
pub use noise::{
    apply_depolarizing, apply_readout_noise, readout_matrix, run_noisy, Confusion, NoiseModel,
    QubitConfusion,
};
