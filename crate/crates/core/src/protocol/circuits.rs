use std::f64::consts::FRAC_PI_2;

use super::layout::{QubitLayout, Role};
use crate::channels::{damping_gates, DampingParams};
use crate::entanglement::InitialState;
use crate::error::Result;
use crate::gates::{rotation_gates, ry_gates, Circuit, Gate};
use crate::sim::{StateVector, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Target {
    System,
    Environment,
}

/// How the environment qubits are brought next to the ancilla.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum SwapStyle {
    /// Full `SWAP` (three alternating CX).
    #[default]
    ThreeCx,
    /// Reset-aware swap `CX(env -> sys)` then `CX(sys -> env)`. Equals a
    /// swap only when the system qubit is in `|0>`; after damping it is not,
    /// so the environment estimate picks up the wrong coherences.
    TwoCx,
}

/// Rotation `SQRT_X · RZ(λ) · SQRT_X` on sys0, then CX sys0 → ancilla,
/// CX ancilla → sys1, CX sys1 → ancilla. Leaves the ancilla in `|0>`.
pub fn prep_gates(init: &InitialState, layout: &QubitLayout) -> Vec<Gate> {
    let (s0, a, s1) = (
        layout.local(Role::Sys0),
        layout.local(Role::Ancilla),
        layout.local(Role::Sys1),
    );
    let mut gates = rotation_gates(s0, init.lambda).to_vec();
    gates.extend([Gate::cx(s0, a), Gate::cx(a, s1), Gate::cx(s1, a)]);
    gates
}

pub fn build_prep_circuit(init: &InitialState, layout: &QubitLayout) -> Result<Circuit> {
    let mut c = Circuit::linear(5)?;
    c.extend(prep_gates(init, layout))?;
    Ok(c)
}

/// Independent damping of both system qubits into their environments.
pub fn evolution_gates(p: &DampingParams, layout: &QubitLayout) -> Vec<Gate> {
    let mut gates = damping_gates(p, layout.local(Role::Sys0), layout.local(Role::Env0));
    gates.extend(damping_gates(
        p,
        layout.local(Role::Sys1),
        layout.local(Role::Env1),
    ));
    gates
}

pub fn env_swap_gates(layout: &QubitLayout, style: SwapStyle) -> Vec<Gate> {
    let pairs = [
        (layout.local(Role::Sys0), layout.local(Role::Env0)),
        (layout.local(Role::Sys1), layout.local(Role::Env1)),
    ];
    pairs
        .into_iter()
        .flat_map(|(sys, env)| match style {
            SwapStyle::ThreeCx => vec![Gate::Swap(sys, env)],
            SwapStyle::TwoCx => vec![Gate::cx(env, sys), Gate::cx(sys, env)],
        })
        .collect()
}

/// Parity witness onto the ancilla.
///
/// With the pair in `|ξ>` and the ancilla in `|0>` the gates produce
/// `½[i(|ξ> - XX|ξ>)|0> + (|ξ> + XX|ξ>)|1>]` up to a global phase, where `XX`
/// flips both system qubits.
pub fn witness_gates(layout: &QubitLayout) -> Vec<Gate> {
    let (s0, a, s1) = (
        layout.local(Role::Sys0),
        layout.local(Role::Ancilla),
        layout.local(Role::Sys1),
    );
    let mut gates = ry_gates(a, FRAC_PI_2).to_vec();
    gates.extend([Gate::cx(a, s0), Gate::cx(a, s1)]);
    gates.extend(ry_gates(a, FRAC_PI_2));
    gates.push(Gate::Rz(a, -FRAC_PI_2));
    gates
}

/// Preparation, damping and (for the environment) the swaps: everything
/// before the witness.
pub fn build_pre_witness_circuit(
    init: &InitialState,
    layout: &QubitLayout,
    gamma_t: f64,
    target: Target,
    swap: SwapStyle,
) -> Result<Circuit> {
    let p = DampingParams::new(gamma_t)?;
    let mut c = Circuit::linear(5)?;
    c.extend(prep_gates(init, layout))?;
    c.extend(evolution_gates(&p, layout))?;
    if target == Target::Environment {
        c.extend(env_swap_gates(layout, swap))?;
    }
    Ok(c)
}

pub fn build_full_circuit_for(
    init: &InitialState,
    layout: &QubitLayout,
    gamma_t: f64,
    target: Target,
    swap: SwapStyle,
) -> Result<Circuit> {
    let mut c = build_pre_witness_circuit(init, layout, gamma_t, target, swap)?;
    c.extend(witness_gates(layout))?;
    Ok(c)
}

/// Checks `post` against the witness output predicted from `pre`, up to a
/// global phase, within `1e-10`. `pre` must have the ancilla in `|0>`.
pub fn witness_stage_check(pre: &StateVector, post: &StateVector, layout: &QubitLayout) -> bool {
    const TOL: f64 = 1e-10;
    if pre.dim() != post.dim() || pre.dim() != 32 {
        return false;
    }
    let anc = 1usize << layout.local(Role::Ancilla);
    let flip = (1usize << layout.local(Role::Sys0)) | (1usize << layout.local(Role::Sys1));
    let xi = pre.amplitudes();
    if xi
        .iter()
        .enumerate()
        .any(|(i, a)| i & anc != 0 && a.norm() > TOL)
    {
        return false;
    }

    let half = C64::new(0.5, 0.0);
    let i_half = C64::new(0.0, 0.5);
    let mut expected = vec![C64::new(0.0, 0.0); 32];
    for i in (0..32).filter(|i| i & anc == 0) {
        let (a, b) = (xi[i], xi[i ^ flip]);
        expected[i] = i_half * (a - b);
        expected[i | anc] = half * (a + b);
    }

    let (k, _) = expected
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
        .expect("non-empty");
    let got = post.amplitudes();
    if got[k].norm() < TOL {
        return false;
    }
    let phase = got[k] / expected[k];
    let phase = phase / phase.norm();
    expected
        .iter()
        .zip(got)
        .all(|(e, g)| (e * phase - g).norm() <= TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::{analytic_rho_env, analytic_rho_s, witness_probability};
    use crate::sim::QuantumState;

    fn run(c: &Circuit) -> StateVector {
        let mut psi = StateVector::zero(5).unwrap();
        c.run(&mut psi).unwrap();
        psi
    }

    fn pair_index(layout: &QubitLayout, b0: usize, b1: usize) -> usize {
        (b0 << layout.local(Role::Sys0)) | (b1 << layout.local(Role::Sys1))
    }

    #[test]
    fn prep_produces_pair_state_with_clean_ancilla() {
        let layout = QubitLayout::default();
        for alpha in [0.5f64.sqrt(), 1.0 / 3f64.sqrt(), 1.0 / 5f64.sqrt()] {
            let init = InitialState::from_alpha(alpha).unwrap();
            let psi = run(&build_prep_circuit(&init, &layout).unwrap());
            let a00 = psi.amplitude(pair_index(&layout, 0, 0));
            let a11 = psi.amplitude(pair_index(&layout, 1, 1));
            assert!((a00.re - init.s).abs() < 1e-10 && a00.im.abs() < 1e-10);
            assert!((a11.re - init.c).abs() < 1e-10 && a11.im.abs() < 1e-10);
            assert!((a00.norm_sqr() + a11.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn prep_at_zero_lambda_is_both_excited() {
        let layout = QubitLayout::default();
        let init = InitialState::from_lambda(0.0).unwrap();
        let psi = run(&build_prep_circuit(&init, &layout).unwrap());
        assert!((psi.amplitude(pair_index(&layout, 1, 1)).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn prep_on_reversed_layout() {
        let layout = QubitLayout::new([4, 3, 2, 1, 0]).unwrap();
        let init = InitialState::from_alpha(0.6).unwrap();
        let psi = run(&build_prep_circuit(&init, &layout).unwrap());
        assert!((psi.amplitude(pair_index(&layout, 0, 0)).re - 0.6).abs() < 1e-10);
        assert!((psi.amplitude(pair_index(&layout, 1, 1)).re - 0.8).abs() < 1e-10);
    }

    #[test]
    fn witness_stage_on_pipeline_states() {
        let layout = QubitLayout::default();
        let init = InitialState::from_alpha(1.0 / 3f64.sqrt()).unwrap();
        for target in [Target::System, Target::Environment] {
            for swap in [SwapStyle::ThreeCx, SwapStyle::TwoCx] {
                for gt in [0.0, 0.4, 1.3] {
                    let mut c =
                        build_pre_witness_circuit(&init, &layout, gt, target, swap).unwrap();
                    let pre = run(&c);
                    c.extend(witness_gates(&layout)).unwrap();
                    let post = run(&c);
                    assert!(witness_stage_check(&pre, &post, &layout));
                }
            }
        }
    }

    #[test]
    fn witness_stage_on_zero_and_eigenstates() {
        let layout = QubitLayout::default();
        let mut w = Circuit::linear(5).unwrap();
        w.extend(witness_gates(&layout)).unwrap();
        let anc = [layout.local(Role::Ancilla)];

        let zero = StateVector::zero(5).unwrap();
        let mut post = zero.clone();
        w.run(&mut post).unwrap();
        assert!(witness_stage_check(&zero, &post, &layout));
        assert!((post.probabilities(&anc).unwrap()[1] - 0.5).abs() < 1e-12);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        for (sign, anc_outcome) in [(1.0, 1), (-1.0, 0)] {
            let mut amps = vec![C64::new(0.0, 0.0); 32];
            amps[pair_index(&layout, 0, 0)] = C64::new(h, 0.0);
            amps[pair_index(&layout, 1, 1)] = C64::new(sign * h, 0.0);
            let xi = StateVector::from_amplitudes(5, amps).unwrap();
            let mut post = xi.clone();
            w.run(&mut post).unwrap();
            assert!(witness_stage_check(&xi, &post, &layout));
            assert!((post.probabilities(&anc).unwrap()[anc_outcome] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn witness_stage_rejects_wrong_output() {
        let layout = QubitLayout::default();
        let zero = StateVector::zero(5).unwrap();
        assert!(!witness_stage_check(&zero, &zero, &layout));
    }

    #[test]
    fn born_probability_equals_half_witness() {
        let layout = QubitLayout::default();
        let measured = layout.measured();
        for alpha in [0.5f64.sqrt(), 1.0 / 5f64.sqrt()] {
            let init = InitialState::from_alpha(alpha).unwrap();
            for gt in [0.0, 0.7, 2.2] {
                let p = DampingParams::new(gt).unwrap();
                for (target, rho) in [
                    (Target::System, analytic_rho_s(&init, &p)),
                    (Target::Environment, analytic_rho_env(&init, &p)),
                ] {
                    let c = build_full_circuit_for(&init, &layout, gt, target, SwapStyle::ThreeCx)
                        .unwrap();
                    let p010 = run(&c).born_probability(&measured, "010").unwrap();
                    assert!((p010 - witness_probability(&rho) / 2.0).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn two_cx_swap_needs_a_clean_system_qubit() {
        let layout = QubitLayout::default();
        let (s0, e0) = (layout.local(Role::Sys0), layout.local(Role::Env0));
        let mut c = Circuit::linear(5).unwrap();
        c.extend(env_swap_gates(&layout, SwapStyle::TwoCx)).unwrap();
        let mut psi = StateVector::basis(5, 1 << e0).unwrap();
        c.run(&mut psi).unwrap();
        assert!((psi.amplitude(1 << s0).norm() - 1.0).abs() < 1e-12);

        let mut psi = StateVector::basis(5, (1 << e0) | (1 << s0)).unwrap();
        c.run(&mut psi).unwrap();
        assert!(psi.amplitude((1 << e0) | (1 << s0)).norm() < 1e-12);
    }

    #[test]
    fn only_adjacent_gates() {
        let layout = QubitLayout::default();
        let init = InitialState::from_alpha(0.5).unwrap();
        let c =
            build_full_circuit_for(&init, &layout, 1.0, Target::Environment, SwapStyle::ThreeCx)
                .unwrap();
        for g in c.ops().iter().filter(|g| g.is_two_qubit()) {
            let t = g.targets();
            assert_eq!(t[0].abs_diff(t[1]), 1);
        }
    }
}
