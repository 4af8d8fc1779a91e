use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::gates::{controlled_ry_gates, Circuit, Gate};

/// Parameters of the single-qubit damping map at dimensionless time `γt`.
///
/// `|1_s 0_e> -> η|1_s 0_e> + ζ|0_s 1_e>` with `η = e^{-γt/2}`,
/// `ζ = sqrt(1 - e^{-γt})` and `θ = asin(η)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampingParams {
    pub gamma_t: f64,
    pub eta: f64,
    pub zeta: f64,
    pub theta: f64,
}

impl DampingParams {
    pub fn new(gamma_t: f64) -> Result<Self> {
        if gamma_t.is_nan() || gamma_t < 0.0 {
            return Err(Error::NegativeTime(gamma_t));
        }
        let eta = (-gamma_t / 2.0).exp();
        let zeta = (-(-gamma_t).exp_m1()).sqrt();
        Ok(Self {
            gamma_t,
            eta,
            zeta,
            theta: eta.asin(),
        })
    }

    /// Angle of the controlled Y rotation that splits `|1_s>` into (η, ζ).
    pub fn rotation_angle(&self) -> f64 {
        2.0 * self.eta.acos()
    }

    /// `π - 2θ`; equal to [`Self::rotation_angle`].
    pub fn rotation_angle_from_theta(&self) -> f64 {
        2.0 * (FRAC_PI_2 - self.theta)
    }
}

/// Controlled `RY` from system to environment, then `CX` back from the
/// environment onto the system.
pub fn damping_gates(p: &DampingParams, sys: usize, env: usize) -> Vec<Gate> {
    let mut gates = controlled_ry_gates(sys, env, p.rotation_angle());
    gates.push(Gate::cx(env, sys));
    gates
}

/// The damping isometry as a stand-alone circuit on a linear chain.
pub fn build_damping_circuit(
    p: &DampingParams,
    sys: usize,
    env: usize,
    n_qubits: usize,
) -> Result<Circuit> {
    let mut c = Circuit::linear(n_qubits)?;
    c.extend(damping_gates(p, sys, env))?;
    Ok(c)
}
