use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::Circuit;
use crate::sim::{check_targets, DensityMatrix, QuantumState, C64};

const STOCHASTIC_TOL: f64 = 1e-12;

/// Readout error of one qubit: the two flip probabilities.
///
/// As a row-stochastic matrix indexed `[true][read]` this is
/// `[[1 - flip_0_to_1, flip_0_to_1], [flip_1_to_0, 1 - flip_1_to_0]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Confusion {
    pub flip_0_to_1: f64,
    pub flip_1_to_0: f64,
}

impl Confusion {
    pub const PERFECT: Confusion = Confusion {
        flip_0_to_1: 0.0,
        flip_1_to_0: 0.0,
    };

    pub fn new(flip_0_to_1: f64, flip_1_to_0: f64) -> Result<Self> {
        let c = Self {
            flip_0_to_1,
            flip_1_to_0,
        };
        c.validate()?;
        Ok(c)
    }

    /// `P(read | true)` as `[true][read]`.
    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [
            [1.0 - self.flip_0_to_1, self.flip_0_to_1],
            [self.flip_1_to_0, 1.0 - self.flip_1_to_0],
        ]
    }

    pub fn validate(&self) -> Result<()> {
        for p in [self.flip_0_to_1, self.flip_1_to_0] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::BadProbability(p));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitConfusion {
    pub qubit: usize,
    pub flip_0_to_1: f64,
    pub flip_1_to_0: f64,
}

/// Depolarizing probability after every gate plus per-qubit readout flips.
///
/// Qubit indices in `readout_overrides` are physical indices; the experiment
/// pipeline maps them onto each layout. Missing fields take the defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseModel {
    pub p1: f64,
    pub p2: f64,
    pub readout: Confusion,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub readout_overrides: Vec<QubitConfusion>,
}

impl Default for NoiseModel {
    /// `p1 = 0.001`, `p2 = 0.01`, readout flips `(0.02, 0.03)` on every qubit.
    fn default() -> Self {
        Self {
            p1: 0.001,
            p2: 0.01,
            readout: Confusion {
                flip_0_to_1: 0.02,
                flip_1_to_0: 0.03,
            },
            readout_overrides: Vec::new(),
        }
    }
}

impl NoiseModel {
    pub fn noiseless() -> Self {
        Self {
            p1: 0.0,
            p2: 0.0,
            readout: Confusion::PERFECT,
            readout_overrides: Vec::new(),
        }
    }

    pub fn readout_only(readout: Confusion) -> Self {
        Self {
            readout,
            ..Self::noiseless()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for p in [self.p1, self.p2] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::BadProbability(p));
            }
        }
        self.readout.validate()?;
        for o in &self.readout_overrides {
            Confusion::new(o.flip_0_to_1, o.flip_1_to_0)?;
        }
        Ok(())
    }

    pub fn confusion(&self, qubit: usize) -> Confusion {
        self.readout_overrides
            .iter()
            .rev()
            .find(|o| o.qubit == qubit)
            .map(|o| Confusion {
                flip_0_to_1: o.flip_0_to_1,
                flip_1_to_0: o.flip_1_to_0,
            })
            .unwrap_or(self.readout)
    }

    pub fn has_gate_noise(&self) -> bool {
        self.p1 > 0.0 || self.p2 > 0.0
    }
}

/// `rho -> (1 - p) rho + p · Tr_T(rho) ⊗ I/d_T`, the uniform Pauli twirl on
/// `targets`.
pub fn apply_depolarizing(rho: &mut DensityMatrix, targets: &[usize], p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::BadProbability(p));
    }
    check_targets(targets, rho.n_qubits())?;
    if p == 0.0 {
        return Ok(());
    }
    let dim = rho.dim();
    let mask: usize = targets.iter().map(|&t| 1usize << t).sum();
    let local_dim = 1usize << targets.len();
    let offsets: Vec<usize> = (0..local_dim)
        .map(|l| {
            targets
                .iter()
                .enumerate()
                .map(|(j, &t)| ((l >> j) & 1) << t)
                .sum()
        })
        .collect();

    let data = rho.data().to_vec();
    let inv_d = 1.0 / local_dim as f64;
    let out = rho.data_mut();
    for r in 0..dim {
        for c in 0..dim {
            let idx = r * dim + c;
            let mut mixed = C64::new(0.0, 0.0);
            if r & mask == c & mask {
                let (rb, cb) = (r & !mask, c & !mask);
                for &off in &offsets {
                    mixed += data[(rb | off) * dim + (cb | off)];
                }
                mixed *= inv_d;
            }
            out[idx] = data[idx] * (1.0 - p) + mixed * p;
        }
    }
    Ok(())
}

/// Column-stochastic readout matrix `A[read][true]` over `measured`, with
/// `measured[0]` as the most significant bit.
pub fn readout_matrix(noise: &NoiseModel, measured: &[usize]) -> DMatrix<f64> {
    let k = measured.len();
    let dim = 1usize << k;
    let confusions: Vec<[[f64; 2]; 2]> = measured
        .iter()
        .map(|&q| noise.confusion(q).matrix())
        .collect();
    DMatrix::from_fn(dim, dim, |read, truth| {
        (0..k)
            .map(|j| {
                let shift = k - 1 - j;
                confusions[j][(truth >> shift) & 1][(read >> shift) & 1]
            })
            .product()
    })
}

/// Pushes an ideal outcome distribution through the readout confusion.
pub fn apply_readout_noise(
    probs: &[f64],
    noise: &NoiseModel,
    measured: &[usize],
) -> Result<Vec<f64>> {
    if probs.len() != 1usize << measured.len() {
        return Err(Error::BadDistribution(format!(
            "{} probabilities for {} measured qubits",
            probs.len(),
            measured.len()
        )));
    }
    let total: f64 = probs.iter().sum();
    if probs.iter().any(|&p| p.is_nan() || p < -STOCHASTIC_TOL) || (total - 1.0).abs() > 1e-9 {
        return Err(Error::BadDistribution(format!("sums to {total}")));
    }
    let a = readout_matrix(noise, measured);
    Ok((0..probs.len())
        .map(|read| (0..probs.len()).map(|t| a[(read, t)] * probs[t]).sum())
        .collect())
}

/// Runs `circuit` on `rho`, depolarizing the touched qubits after each gate.
pub fn run_noisy(circuit: &Circuit, rho: &mut DensityMatrix, noise: &NoiseModel) -> Result<()> {
    if rho.n_qubits() != circuit.n_qubits() {
        return Err(Error::DimensionMismatch {
            left: rho.n_qubits(),
            right: circuit.n_qubits(),
        });
    }
    for g in circuit.ops() {
        let targets = g.targets();
        rho.apply_unitary(&g.matrix(), &targets)?;
        let p = if g.is_two_qubit() { noise.p2 } else { noise.p1 };
        apply_depolarizing(rho, &targets, p)?;
    }
    Ok(())
}
