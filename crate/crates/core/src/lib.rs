//! Dense five-qubit simulator for entanglement sudden death (ESD) and
//! sudden birth (ESB) under amplitude damping.
//!
//! The crate is layered bottom-up:
//!
//! * [`sim`] holds state vectors, density matrices, partial traces and
//!   seeded shot sampling for up to five qubits.
//! * [`gates`] defines the hardware basis set `{ID, X, SQRT_X, RZ, ECR}`,
//!   routed circuits on a linear chain, and the transpiler into that basis.
//! * [`channels`] builds the purification circuit for amplitude damping,
//!   the depolarizing/readout noise model, and calibration-matrix mitigation.
//! * [`entanglement`] is the closed-form layer: X-state density matrices,
//!   concurrence, the `|Φ⟩` witness, and ESD/ESB times.
//! * [`protocol`] assembles the full preparation, damping and witness
//!   circuits and runs repeated shot experiments.
//!
//! Qubit 0 is always the least significant bit of a basis-state index.

pub mod channels;
pub mod entanglement;
pub mod error;
pub mod gates;
pub mod protocol;
pub mod sim;

pub use channels::{CalibrationMatrix, Confusion, DampingParams, NoiseModel, QubitConfusion};
pub use entanglement::{InitialState, XStateMatrix};
pub use error::{Error, Result};
pub use gates::{Circuit, Gate};
pub use protocol::{
    ConcurrenceSeries, ExperimentConfig, ExperimentResult, QubitLayout, Role, SeriesPoint, Shots,
    SwapStyle, Target, TargetSelection,
};
pub use sim::{CMatrix, CountsHistogram, DensityMatrix, QuantumState, StateVector, C64};
