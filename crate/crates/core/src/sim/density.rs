use super::{
    apply_local, check_qubit_count, check_targets, check_unitary, outcome_index, CMatrix,
    QuantumState, StateVector, C64,
};
use crate::error::{Error, Result};

pub const TRACE_TOL: f64 = 1e-12;
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;

/// Mixed state of `n_qubits` qubits, stored row-major.
///
/// Viewed as a flat vector the entry `(r, c)` sits at `r * dim + c`, so the
/// column index occupies the low `n` bits and the row index the high `n`
/// bits. Superoperators act on that `2n`-bit register directly.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    data: Vec<C64>,
}

impl DensityMatrix {
    pub fn from_pure(state: &StateVector) -> Self {
        let amps = state.amplitudes();
        let dim = amps.len();
        let mut data = Vec::with_capacity(dim * dim);
        for r in amps {
            for c in amps {
                data.push(r * c.conj());
            }
        }
        Self {
            n_qubits: state.n_qubits(),
            data,
        }
    }

    /// Validates trace, Hermiticity and positivity before accepting `rho`.
    pub fn new(n_qubits: usize, rho: &CMatrix) -> Result<Self> {
        check_qubit_count(n_qubits)?;
        let dim = 1usize << n_qubits;
        if rho.nrows() != dim || rho.ncols() != dim {
            return Err(Error::DimensionMismatch {
                left: rho.nrows(),
                right: dim,
            });
        }
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(rho[(r, c)]);
            }
        }
        let dm = Self { n_qubits, data };
        dm.validate()?;
        Ok(dm)
    }

    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        check_qubit_count(n_qubits)?;
        let dim = 1usize << n_qubits;
        let mut data = vec![C64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = C64::new(1.0 / dim as f64, 0.0);
        }
        Ok(Self { n_qubits, data })
    }

    pub fn dim(&self) -> usize {
        1usize << self.n_qubits
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim() + col]
    }

    pub fn matrix(&self) -> CMatrix {
        let dim = self.dim();
        CMatrix::from_row_slice(dim, dim, &self.data)
    }

    pub(crate) fn data(&self) -> &[C64] {
        &self.data
    }

    pub(crate) fn data_mut(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    /// `Tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        // rho is Hermitian so Tr(rho^2) = sum |rho_ij|^2
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        let dim = self.dim();
        let mut dev = 0.0_f64;
        for r in 0..dim {
            for c in r..dim {
                dev = dev.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        dev
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let m = self.matrix();
        let herm = (&m + m.adjoint()) * C64::new(0.5, 0.0);
        herm.symmetric_eigenvalues()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min)
    }

    /// Checks trace 1, Hermiticity and positive semidefiniteness.
    pub fn validate(&self) -> Result<()> {
        if self
            .data
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidState("non-finite entry".into()));
        }
        let tr = self.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} != 1")));
        }
        let herm = self.hermiticity_deviation();
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("not Hermitian ({herm:.3e})")));
        }
        let min_eig = self.min_eigenvalue();
        if min_eig < -PSD_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(())
    }

    /// Reduced state on `keep`; `keep[j]` becomes qubit `j` of the result.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        check_targets(keep, self.n_qubits)
            .map_err(|e| Error::BadTarget(format!("keep set: {e}")))?;
        let dim = self.dim();
        let keep_mask: usize = keep.iter().map(|&q| 1usize << q).sum();
        let out_dim = 1usize << keep.len();
        let local = |i: usize| -> usize {
            keep.iter()
                .enumerate()
                .map(|(j, &q)| ((i >> q) & 1) << j)
                .sum()
        };
        let mut out = vec![C64::new(0.0, 0.0); out_dim * out_dim];
        for r in 0..dim {
            let lr = local(r);
            for c in 0..dim {
                if (r & !keep_mask) != (c & !keep_mask) {
                    continue;
                }
                out[lr * out_dim + local(c)] += self.data[r * dim + c];
            }
        }
        Ok(DensityMatrix {
            n_qubits: keep.len(),
            data: out,
        })
    }
}

impl QuantumState for DensityMatrix {
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
        let n = self.n_qubits;
        let rows: Vec<usize> = targets.iter().map(|t| t + n).collect();
        // rho -> U rho U^dagger: U on the row bits, conj(U) on the column bits
        apply_local(&mut self.data, 2 * n, u, &rows);
        apply_local(&mut self.data, 2 * n, &u.map(|z| z.conj()), targets);
        Ok(())
    }

    fn probabilities(&self, measured: &[usize]) -> Result<Vec<f64>> {
        check_targets(measured, self.n_qubits)?;
        let mut probs = vec![0.0; 1usize << measured.len()];
        for i in 0..self.dim() {
            probs[outcome_index(i, measured)] += self.get(i, i).re;
        }
        Ok(probs)
    }
}
