//! Exact dense simulation for up to five qubits.
//!
//! Basis-state index bit `q` holds qubit `q` (qubit 0 is least significant).
//! Operators acting on several targets use the same rule locally: in a
//! 4x4 matrix, `targets[0]` is the low bit of the row/column index.
//! Measured bitstrings are written in the order the qubits were listed, so
//! the first character belongs to `measured[0]`.

mod counts;
mod density;
mod state;

pub use counts::{bitstring, parse_bitstring, sample_counts, sample_distribution, CountsHistogram};
pub use density::DensityMatrix;
pub use state::StateVector;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub type C64 = num_complex::Complex64;
pub type CMatrix = DMatrix<C64>;

pub const MAX_QUBITS: usize = 5;

/// Unitarity tolerance on `max |U†U - I|`.
pub const UNITARY_TOL: f64 = 1e-12;

/// Common interface of the two simulation engines.
pub trait QuantumState {
    fn n_qubits(&self) -> usize;

    /// Applies a one- or two-qubit unitary to `targets`.
    fn apply_unitary(&mut self, u: &CMatrix, targets: &[usize]) -> Result<()>;

    /// Marginal distribution over `measured`, indexed with `measured[0]` as
    /// the most significant bit.
    fn probabilities(&self, measured: &[usize]) -> Result<Vec<f64>>;
}

/// Largest entry of `|U†U - I|`.
pub fn unitarity_deviation(u: &CMatrix) -> f64 {
    let prod = u.adjoint() * u;
    let mut dev = 0.0_f64;
    for r in 0..prod.nrows() {
        for c in 0..prod.ncols() {
            let expect = if r == c {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            };
            dev = dev.max((prod[(r, c)] - expect).norm());
        }
    }
    dev
}

pub(crate) fn check_unitary(u: &CMatrix) -> Result<()> {
    if !u.is_square() {
        return Err(Error::DimensionMismatch {
            left: u.nrows(),
            right: u.ncols(),
        });
    }
    let deviation = unitarity_deviation(u);
    if deviation.is_nan() || deviation > UNITARY_TOL {
        return Err(Error::NonUnitary { deviation });
    }
    Ok(())
}

/// Validates a target list against a register of `n_qubits` and the
/// operator dimension.
pub(crate) fn check_targets(targets: &[usize], n_qubits: usize) -> Result<()> {
    if targets.is_empty() {
        return Err(Error::BadTarget("empty target list".into()));
    }
    for (i, &t) in targets.iter().enumerate() {
        if t >= n_qubits {
            return Err(Error::BadTarget(format!(
                "qubit {t} out of range for {n_qubits} qubits"
            )));
        }
        if targets[..i].contains(&t) {
            return Err(Error::BadTarget(format!("qubit {t} listed twice")));
        }
    }
    Ok(())
}

pub(crate) fn check_qubit_count(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::InvalidState(format!(
            "qubit count {n_qubits} outside [1, {MAX_QUBITS}]"
        )));
    }
    Ok(())
}

/// Applies a `2^k x 2^k` operator to `data`, viewed as a register of `n_bits`
/// bits, acting on bit positions `targets`.
pub(crate) fn apply_local(data: &mut [C64], n_bits: usize, op: &CMatrix, targets: &[usize]) {
    let k = targets.len();
    let local_dim = 1usize << k;
    debug_assert_eq!(op.nrows(), local_dim);
    debug_assert_eq!(data.len(), 1usize << n_bits);

    let offsets: Vec<usize> = (0..local_dim)
        .map(|l| {
            targets
                .iter()
                .enumerate()
                .map(|(j, &t)| ((l >> j) & 1) << t)
                .sum()
        })
        .collect();
    let mask: usize = targets.iter().map(|&t| 1usize << t).sum();

    let mut buf = vec![C64::new(0.0, 0.0); local_dim];
    for base in 0..data.len() {
        if base & mask != 0 {
            continue;
        }
        for (b, &off) in buf.iter_mut().zip(&offsets) {
            *b = data[base | off];
        }
        for (r, &off) in offsets.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for (c, b) in buf.iter().enumerate() {
                acc += op[(r, c)] * b;
            }
            data[base | off] = acc;
        }
    }
}

/// Maps a full-register index to the outcome index over `measured`.
#[inline]
pub(crate) fn outcome_index(index: usize, measured: &[usize]) -> usize {
    let k = measured.len();
    measured
        .iter()
        .enumerate()
        .map(|(j, &q)| ((index >> q) & 1) << (k - 1 - j))
        .sum()
}

/// Kronecker product with `on_low` acting on the low bits of the index.
pub fn kron_local(on_low: &CMatrix, on_high: &CMatrix) -> CMatrix {
    on_high.kronecker(on_low)
}
