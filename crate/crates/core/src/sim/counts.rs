use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use super::{QuantumState, StateVector};
use crate::error::{Error, Result};

/// Shot counts over an ordered list of measured qubits.
///
/// `counts[i]` is the number of shots whose outcome index is `i`, with
/// `bit_labels[0]` the most significant bit (the leftmost character of the
/// bitstring).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountsHistogram {
    bit_labels: Vec<usize>,
    counts: Vec<u64>,
    shots: u64,
}

impl CountsHistogram {
    pub fn new(bit_labels: Vec<usize>, counts: Vec<u64>) -> Result<Self> {
        if counts.len() != 1usize << bit_labels.len() {
            return Err(Error::DimensionMismatch {
                left: counts.len(),
                right: 1usize << bit_labels.len(),
            });
        }
        let shots = counts.iter().sum();
        if shots == 0 {
            return Err(Error::ZeroShots);
        }
        Ok(Self {
            bit_labels,
            counts,
            shots,
        })
    }

    /// Builds a histogram from `(bitstring, count)` pairs.
    pub fn from_pairs<'a>(
        bit_labels: Vec<usize>,
        pairs: impl IntoIterator<Item = (&'a str, u64)>,
    ) -> Result<Self> {
        let k = bit_labels.len();
        let mut counts = vec![0; 1usize << k];
        for (key, n) in pairs {
            counts[parse_bitstring(key, k)?] += n;
        }
        Self::new(bit_labels, counts)
    }

    pub fn bit_labels(&self) -> &[usize] {
        &self.bit_labels
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    /// Count for a bitstring such as `"010"`; zero for a malformed key.
    pub fn get(&self, outcome: &str) -> u64 {
        parse_bitstring(outcome, self.bit_labels.len())
            .map(|i| self.counts[i])
            .unwrap_or(0)
    }

    pub fn frequencies(&self) -> Vec<f64> {
        let total = self.shots as f64;
        self.counts.iter().map(|&n| n as f64 / total).collect()
    }

    /// Non-zero entries as `(bitstring, count)`, in index order.
    pub fn iter(&self) -> impl Iterator<Item = (String, u64)> + '_ {
        let k = self.bit_labels.len();
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &n)| n > 0)
            .map(move |(i, &n)| (bitstring(i, k), n))
    }
}

/// Renders outcome index `index` over `k` bits, most significant first.
pub fn bitstring(index: usize, k: usize) -> String {
    (0..k)
        .map(|j| {
            if (index >> (k - 1 - j)) & 1 == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

pub fn parse_bitstring(outcome: &str, k: usize) -> Result<usize> {
    if outcome.len() != k {
        return Err(Error::BadTarget(format!(
            "outcome {outcome:?} has length {}, expected {k}",
            outcome.len()
        )));
    }
    outcome.chars().try_fold(0usize, |acc, ch| match ch {
        '0' => Ok(acc << 1),
        '1' => Ok((acc << 1) | 1),
        _ => Err(Error::BadTarget(format!(
            "outcome {outcome:?} is not a bitstring"
        ))),
    })
}

/// Draws `shots` samples from `probs` as a multinomial, using sequential
/// conditional binomials so the cost is independent of the shot count.
pub fn sample_distribution<R: Rng + ?Sized>(probs: &[f64], shots: u64, rng: &mut R) -> Vec<u64> {
    let mut counts = vec![0u64; probs.len()];
    let mut remaining = shots;
    let mut mass_left: f64 = probs.iter().map(|p| p.max(0.0)).sum();
    let last = probs.len() - 1;
    for (i, &p) in probs.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        let p = p.max(0.0);
        if i == last || mass_left <= 0.0 {
            counts[i] = remaining;
            break;
        }
        let cond = (p / mass_left).clamp(0.0, 1.0);
        let k = Binomial::new(remaining, cond)
            .expect("conditional probability lies in [0, 1]")
            .sample(rng);
        counts[i] = k;
        remaining -= k;
        mass_left -= p;
    }
    counts
}

/// Samples `shots` projective measurements of `measured` from `state`.
pub fn sample_counts(
    state: &StateVector,
    measured: &[usize],
    shots: u64,
    seed: u64,
) -> Result<CountsHistogram> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let probs = state.probabilities(measured)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let counts = sample_distribution(&probs, shots, &mut rng);
    CountsHistogram::new(measured.to_vec(), counts)
}
