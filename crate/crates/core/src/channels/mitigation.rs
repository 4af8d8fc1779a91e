use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::noise::{readout_matrix, NoiseModel};
use crate::error::{Error, Result};
use crate::sim::{sample_distribution, CountsHistogram};

const COLUMN_TOL: f64 = 1e-9;
/// Smallest accepted ratio of smallest to largest singular value.
const MIN_RCOND: f64 = 1e-10;

/// Column-stochastic map from true to observed outcome distributions.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationMatrix {
    measured: Vec<usize>,
    a: DMatrix<f64>,
}

impl CalibrationMatrix {
    pub fn new(measured: Vec<usize>, a: DMatrix<f64>) -> Result<Self> {
        let dim = 1usize << measured.len();
        if a.nrows() != dim || a.ncols() != dim {
            return Err(Error::DimensionMismatch {
                left: a.nrows(),
                right: dim,
            });
        }
        if a.iter().any(|&x| !(0.0..=1.0).contains(&x)) {
            return Err(Error::BadDistribution(
                "calibration entry outside [0, 1]".into(),
            ));
        }
        for (j, col) in a.column_iter().enumerate() {
            let s = col.sum();
            if (s - 1.0).abs() > COLUMN_TOL {
                return Err(Error::BadDistribution(format!("column {j} sums to {s}")));
            }
        }
        Ok(Self { measured, a })
    }

    /// The noise model's readout matrix, without sampling.
    pub fn exact(noise: &NoiseModel, measured: &[usize]) -> Self {
        Self {
            measured: measured.to_vec(),
            a: readout_matrix(noise, measured),
        }
    }

    pub fn identity(measured: &[usize]) -> Self {
        let dim = 1usize << measured.len();
        Self {
            measured: measured.to_vec(),
            a: DMatrix::identity(dim, dim),
        }
    }

    pub fn measured(&self) -> &[usize] {
        &self.measured
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.a
    }
}

/// Estimates the calibration matrix by preparing every basis state of the
/// measured qubits and sampling `shots` noisy readouts of each.
pub fn build_calibration(
    noise: &NoiseModel,
    measured: &[usize],
    shots: u64,
    seed: u64,
) -> Result<CalibrationMatrix> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    noise.validate()?;
    let exact = readout_matrix(noise, measured);
    let dim = exact.nrows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = DMatrix::zeros(dim, dim);
    for truth in 0..dim {
        let column: Vec<f64> = exact.column(truth).iter().copied().collect();
        let counts = sample_distribution(&column, shots, &mut rng);
        for (read, n) in counts.into_iter().enumerate() {
            a[(read, truth)] = n as f64 / shots as f64;
        }
    }
    CalibrationMatrix::new(measured.to_vec(), a)
}

/// Mitigated outcome distribution for a histogram.
pub fn mitigate(counts: &CountsHistogram, cal: &CalibrationMatrix) -> Result<Vec<f64>> {
    if counts.bit_labels() != cal.measured() {
        return Err(Error::LabelMismatch {
            expected: cal.measured().to_vec(),
            found: counts.bit_labels().to_vec(),
        });
    }
    mitigate_distribution(&counts.frequencies(), cal)
}

/// Non-negative least squares `min ||A x - observed||` over `x >= 0`,
/// renormalised to a probability distribution.
pub fn mitigate_distribution(observed: &[f64], cal: &CalibrationMatrix) -> Result<Vec<f64>> {
    let a = cal.matrix();
    if observed.len() != a.nrows() {
        return Err(Error::DimensionMismatch {
            left: observed.len(),
            right: a.nrows(),
        });
    }
    let sv = a.singular_values();
    let smax = sv.max();
    let smin = sv.min();
    if smin.is_nan() || smin <= MIN_RCOND * smax {
        return Err(Error::SingularCalibration(smax / smin));
    }
    let b = DVector::from_column_slice(observed);
    let x = nnls(a, &b);
    let total: f64 = x.iter().sum();
    if total.is_nan() || total <= 0.0 {
        return Err(Error::BadDistribution(
            "mitigated distribution is empty".into(),
        ));
    }
    Ok(x.iter().map(|v| v / total).collect())
}

/// Lawson-Hanson active-set solver for `min ||A x - b||₂, x >= 0`.
pub fn nnls(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let n = a.ncols();
    let tol = 1e-12 * a.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1.0) * n as f64;
    let mut x = DVector::zeros(n);
    let mut passive = vec![false; n];

    let lstsq = |passive: &[bool]| -> DVector<f64> {
        let idx: Vec<usize> = (0..n).filter(|&j| passive[j]).collect();
        let sub = DMatrix::from_fn(a.nrows(), idx.len(), |r, c| a[(r, idx[c])]);
        let sol = sub
            .svd(true, true)
            .solve(b, 1e-14)
            .expect("SVD computed with both factors");
        let mut full = DVector::zeros(n);
        for (k, &j) in idx.iter().enumerate() {
            full[j] = sol[k];
        }
        full
    };

    for _ in 0..3 * n + 10 {
        let w = a.transpose() * (b - a * &x);
        let candidate = (0..n)
            .filter(|&j| !passive[j] && w[j] > tol)
            .max_by(|&i, &j| w[i].total_cmp(&w[j]));
        let Some(j) = candidate else { break };
        passive[j] = true;

        loop {
            let s = lstsq(&passive);
            let infeasible: Vec<usize> = (0..n).filter(|&i| passive[i] && s[i] <= tol).collect();
            if infeasible.is_empty() {
                x = s;
                break;
            }
            let alpha = infeasible
                .iter()
                .map(|&i| x[i] / (x[i] - s[i]))
                .fold(f64::INFINITY, f64::min);
            x += (s - &x) * alpha;
            for i in 0..n {
                if passive[i] && x[i] <= tol {
                    passive[i] = false;
                    x[i] = 0.0;
                }
            }
        }
    }
    x
}
