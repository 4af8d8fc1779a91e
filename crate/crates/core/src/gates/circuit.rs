use super::Gate;
use crate::error::{Error, Result};
use crate::sim::{apply_local, check_qubit_count, CMatrix, QuantumState, C64};

/// Ordered gate list on a register with a fixed coupling map.
///
/// Two-qubit gates are only accepted on coupled pairs; the circuit never
/// inserts routing swaps on its own.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    ops: Vec<Gate>,
    coupling: Vec<(usize, usize)>,
}

impl Circuit {
    /// Empty circuit on a linear chain `0 - 1 - ... - (n-1)`.
    pub fn linear(n_qubits: usize) -> Result<Self> {
        let coupling = (1..n_qubits).map(|q| (q - 1, q)).collect();
        Self::with_coupling(n_qubits, coupling)
    }

    pub fn with_coupling(n_qubits: usize, coupling: Vec<(usize, usize)>) -> Result<Self> {
        check_qubit_count(n_qubits)?;
        if let Some(&(a, b)) = coupling
            .iter()
            .find(|(a, b)| *a >= n_qubits || *b >= n_qubits || a == b)
        {
            return Err(Error::BadTarget(format!(
                "coupling pair ({a}, {b}) is invalid"
            )));
        }
        Ok(Self {
            n_qubits,
            ops: Vec::new(),
            coupling,
        })
    }

    /// Same register and coupling, no gates.
    pub fn empty_like(&self) -> Self {
        Self {
            n_qubits: self.n_qubits,
            ops: Vec::new(),
            coupling: self.coupling.clone(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[Gate] {
        &self.ops
    }

    pub fn coupling(&self) -> &[(usize, usize)] {
        &self.coupling
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn is_adjacent(&self, a: usize, b: usize) -> bool {
        self.coupling
            .iter()
            .any(|&(x, y)| (x, y) == (a, b) || (y, x) == (a, b))
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let targets = gate.targets();
        crate::sim::check_targets(&targets, self.n_qubits)?;
        if let Gate::Rz(_, l) = gate {
            if !l.is_finite() {
                return Err(Error::InvalidState(format!("non-finite RZ angle {l}")));
            }
        }
        if gate.is_two_qubit() && !self.is_adjacent(targets[0], targets[1]) {
            return Err(Error::UnroutableGate(targets[0], targets[1]));
        }
        self.ops.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<()> {
        gates.into_iter().try_for_each(|g| self.push(g))
    }

    /// Applies every gate in order.
    pub fn run<S: QuantumState + ?Sized>(&self, state: &mut S) -> Result<()> {
        if state.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                left: state.n_qubits(),
                right: self.n_qubits,
            });
        }
        for g in &self.ops {
            state.apply_unitary(&g.matrix(), &g.targets())?;
        }
        Ok(())
    }

    /// Full `2^n x 2^n` unitary of the circuit.
    pub fn unitary(&self) -> CMatrix {
        let dim = 1usize << self.n_qubits;
        let mut u = CMatrix::identity(dim, dim);
        let mut column = vec![C64::new(0.0, 0.0); dim];
        let mats: Vec<(CMatrix, Vec<usize>)> =
            self.ops.iter().map(|g| (g.matrix(), g.targets())).collect();
        for c in 0..dim {
            column
                .iter_mut()
                .enumerate()
                .for_each(|(r, z)| *z = u[(r, c)]);
            for (m, t) in &mats {
                apply_local(&mut column, self.n_qubits, m, t);
            }
            column.iter().enumerate().for_each(|(r, z)| u[(r, c)] = *z);
        }
        u
    }
}
