use super::{
    apply_local, check_qubit_count, check_targets, check_unitary, outcome_index, parse_bitstring,
    CMatrix, DensityMatrix, QuantumState, C64,
};
use crate::error::{Error, Result};

const NORM_TOL: f64 = 1e-12;

/// Pure state of `n_qubits` qubits as `2^n` dense amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// `|0...0>`.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_qubit_count(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::InvalidState(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    /// Wraps amplitudes that must already be normalised.
    pub fn from_amplitudes(n_qubits: usize, amps: Vec<C64>) -> Result<Self> {
        check_qubit_count(n_qubits)?;
        if amps.len() != 1usize << n_qubits {
            return Err(Error::DimensionMismatch {
                left: amps.len(),
                right: 1usize << n_qubits,
            });
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::InvalidState("non-finite amplitude".into()));
        }
        let state = Self { n_qubits, amps };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("norm^2 = {norm}, expected 1")));
        }
        Ok(state)
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amps[index]
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }

    /// Exact marginal probability of observing `outcome` on `measured`.
    pub fn born_probability(&self, measured: &[usize], outcome: &str) -> Result<f64> {
        let idx = parse_bitstring(outcome, measured.len())?;
        Ok(self.probabilities(measured)?[idx])
    }
}

impl QuantumState for StateVector {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn apply_unitary(&mut self, u: &CMatrix, targets: &[usize]) -> Result<()> {
        check_targets(targets, self.n_qubits)?;
        if targets.len() > 2 || u.nrows() != 1usize << targets.len() {
            return Err(Error::DimensionMismatch {
                left: u.nrows(),
                right: 1usize << targets.len(),
            });
        }
        check_unitary(u)?;
        apply_local(&mut self.amps, self.n_qubits, u, targets);
        Ok(())
    }

    fn probabilities(&self, measured: &[usize]) -> Result<Vec<f64>> {
        check_targets(measured, self.n_qubits)?;
        let mut probs = vec![0.0; 1usize << measured.len()];
        for (i, a) in self.amps.iter().enumerate() {
            probs[outcome_index(i, measured)] += a.norm_sqr();
        }
        Ok(probs)
    }
}
