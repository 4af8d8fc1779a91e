use esdsim_core::channels::{apply_depolarizing, run_noisy, NoiseModel};
use esdsim_core::gates::{
    ecr, local_equivalence_invariants, random_routed_circuit, rz, sqrt_x, transpile_to_basis,
    unitary_equal_up_to_phase, Gate,
};
use esdsim_core::sim::{kron_local, CMatrix};
use esdsim_core::{Circuit, DensityMatrix, QuantumState, StateVector, C64};
use proptest::prelude::*;

fn euler(a: f64, b: f64, c: f64) -> CMatrix {
    rz(a) * sqrt_x() * rz(b) * sqrt_x() * rz(c)
}

fn random_state(n: usize, parts: &[(f64, f64)]) -> StateVector {
    let amps: Vec<C64> = parts
        .iter()
        .take(1 << n)
        .map(|&(re, im)| C64::new(re, im))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(n, amps.into_iter().map(|a| a / norm).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn circuits_preserve_norm(seed in any::<u64>(), n in 1usize..=5) {
        let c = random_routed_circuit(seed, n, 30).unwrap();
        let mut psi = StateVector::zero(n).unwrap();
        c.run(&mut psi).unwrap();
        prop_assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn transpiled_circuits_are_phase_equal(seed in any::<u64>(), n in 2usize..=5) {
        let c = random_routed_circuit(seed, n, 20).unwrap();
        let t = transpile_to_basis(&c).unwrap();
        prop_assert!(t.ops().iter().all(Gate::is_basis));
        prop_assert!(unitary_equal_up_to_phase(&c.unitary(), &t.unitary()).unwrap());
    }

    #[test]
    fn makhlin_invariants_ignore_local_dressing(
        angles in proptest::collection::vec(-3.2f64..3.2, 12),
    ) {
        let a = kron_local(&euler(angles[0], angles[1], angles[2]), &euler(angles[3], angles[4], angles[5]));
        let b = kron_local(&euler(angles[6], angles[7], angles[8]), &euler(angles[9], angles[10], angles[11]));
        let dressed = a * ecr() * b;
        let bare = local_equivalence_invariants(&ecr()).unwrap();
        let got = local_equivalence_invariants(&dressed).unwrap();
        prop_assert!(bare.approx_eq(&got, 1e-9));
    }

    #[test]
    fn noisy_runs_stay_physical(seed in any::<u64>(), p1 in 0.0f64..0.2, p2 in 0.0f64..0.5) {
        let c = random_routed_circuit(seed, 3, 15).unwrap();
        let mut rho = DensityMatrix::from_pure(&StateVector::zero(3).unwrap());
        let noise = NoiseModel { p1, p2, ..NoiseModel::noiseless() };
        run_noisy(&transpile_to_basis(&c).unwrap(), &mut rho, &noise).unwrap();
        prop_assert!((rho.trace() - C64::new(1.0, 0.0)).norm() < 1e-12);
        prop_assert!(rho.hermiticity_deviation() < 1e-12);
        prop_assert!(rho.min_eigenvalue() > -1e-10);
        prop_assert!(rho.purity() <= 1.0 + 1e-12);
    }

    #[test]
    fn depolarizing_keeps_reduced_trace(
        parts in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 8),
        p in 0.0f64..=1.0,
        q in 0usize..3,
    ) {
        prop_assume!(parts.iter().any(|&(a, b)| a.abs() + b.abs() > 1e-3));
        let psi = random_state(3, &parts);
        let mut rho = psi.to_density();
        let others: Vec<usize> = (0..3).filter(|&k| k != q).collect();
        let before = rho.partial_trace(&others).unwrap();
        apply_depolarizing(&mut rho, &[q], p).unwrap();
        let after = rho.partial_trace(&others).unwrap();
        prop_assert!((after.matrix() - before.matrix()).norm() < 1e-12);
        prop_assert!(rho.min_eigenvalue() > -1e-10);
    }

    #[test]
    fn partial_trace_of_pure_state_is_a_state(
        parts in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 16),
        keep in proptest::sample::subsequence(vec![0usize, 1, 2, 3], 1..4),
    ) {
        prop_assume!(parts.iter().any(|&(a, b)| a.abs() + b.abs() > 1e-3));
        let rho = random_state(4, &parts).to_density();
        let red = rho.partial_trace(&keep).unwrap();
        prop_assert!(red.validate().is_ok());
        prop_assert!((red.trace().re - 1.0).abs() < 1e-12);
    }
}

#[test]
fn two_hundred_seeded_circuits_transpile_exactly() {
    for seed in 0..200u64 {
        let c = random_routed_circuit(seed, 5, 25).unwrap();
        let t = transpile_to_basis(&c).unwrap();
        assert!(
            unitary_equal_up_to_phase(&c.unitary(), &t.unitary()).unwrap(),
            "circuit seed {seed}"
        );
    }
}

#[test]
fn density_and_state_vector_engines_agree() {
    let c = transpile_to_basis(&random_routed_circuit(7, 4, 30).unwrap()).unwrap();
    let mut psi = StateVector::zero(4).unwrap();
    c.run(&mut psi).unwrap();
    let mut rho = DensityMatrix::from_pure(&StateVector::zero(4).unwrap());
    c.run(&mut rho).unwrap();
    assert!((rho.matrix() - psi.to_density().matrix()).norm() < 1e-12);
    let a = psi.probabilities(&[3, 0]).unwrap();
    let b = rho.probabilities(&[3, 0]).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn circuit_rejects_non_adjacent_pairs() {
    let mut c = Circuit::linear(5).unwrap();
    assert!(c.push(Gate::cx(0, 2)).is_err());
    assert!(c.push(Gate::Swap(3, 4)).is_ok());
}
