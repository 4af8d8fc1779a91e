use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Circuit, Gate};
use crate::error::Result;

/// Seeded random circuit over `{ID, X, SQRT_X, RZ, CX, SWAP}` on a linear
/// chain of `n_qubits`, with at most `max_gates` gates.
pub fn random_routed_circuit(seed: u64, n_qubits: usize, max_gates: usize) -> Result<Circuit> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Circuit::linear(n_qubits)?;
    let len = rng.random_range(0..=max_gates);
    for _ in 0..len {
        let q = rng.random_range(0..n_qubits);
        let two_qubit_ok = n_qubits > 1;
        let kind = rng.random_range(0..if two_qubit_ok { 6 } else { 4 });
        let gate = match kind {
            0 => Gate::Id(q),
            1 => Gate::X(q),
            2 => Gate::SqrtX(q),
            3 => Gate::Rz(q, rng.random_range(0.0..TAU)),
            k => {
                let a = rng.random_range(0..n_qubits - 1);
                let (x, y) = if rng.random_bool(0.5) {
                    (a, a + 1)
                } else {
                    (a + 1, a)
                };
                if k == 4 {
                    Gate::cx(x, y)
                } else {
                    Gate::Swap(x, y)
                }
            }
        };
        c.push(gate)?;
    }
    Ok(c)
}
