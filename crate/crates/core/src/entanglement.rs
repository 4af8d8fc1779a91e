//! Closed-form layer: the X-state density matrices of the system and
//! environment pairs, concurrence, the `|Φ⟩` witness, and ESD/ESB times.
//!
//! Two-qubit matrices here use the textbook order `|ab>` → index `2a + b`,
//! where `a` is the first qubit of the pair (`sys0` or `env0`).

use crate::channels::DampingParams;
use crate::error::{Error, Result};
use crate::sim::{CountsHistogram, DensityMatrix, QuantumState, C64};

/// Entries off the diagonal and anti-diagonal must be below this.
pub const X_FORM_TOL: f64 = 1e-10;
/// `s` and `c` closer than this are treated as the balanced case.
pub const BALANCE_TOL: f64 = 1e-12;
/// Bracket for the bisection cross-checks of the ESD/ESB times.
pub const BISECTION_BRACKET: (f64, f64) = (0.0, 50.0);
pub const BISECTION_TOL: f64 = 1e-9;

/// Initial pair state `sin(λ/2)|00> + cos(λ/2)|11>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialState {
    pub lambda: f64,
    /// `sin(λ/2)`, the amplitude on `|00>`.
    pub s: f64,
    /// `cos(λ/2)`, the amplitude on `|11>`.
    pub c: f64,
}

impl InitialState {
    pub fn from_lambda(lambda: f64) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "lambda must be finite, got {lambda}"
            )));
        }
        let (s, c) = (lambda / 2.0).sin_cos();
        Ok(Self { lambda, s, c })
    }

    /// State with `|00>` amplitude `alpha` in `(0, 1]`.
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "alpha must lie in (0, 1], got {alpha}"
            )));
        }
        Ok(Self {
            lambda: 2.0 * alpha.asin(),
            s: alpha,
            c: (1.0 - alpha * alpha).sqrt(),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.s
    }

    fn is_balanced_or_above(&self) -> bool {
        self.s >= self.c - BALANCE_TOL
    }
}

/// Two-qubit density matrix with support on the diagonal and anti-diagonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XStateMatrix {
    m: [[C64; 4]; 4],
}

impl XStateMatrix {
    /// Builds the matrix from its diagonal and the two upper anti-diagonal
    /// entries `ρ₀₃` and `ρ₁₂`.
    pub fn new(diag: [f64; 4], rho03: C64, rho12: C64) -> Self {
        let z = C64::new(0.0, 0.0);
        let mut m = [[z; 4]; 4];
        for (i, d) in diag.iter().enumerate() {
            m[i][i] = C64::new(*d, 0.0);
        }
        m[0][3] = rho03;
        m[3][0] = rho03.conj();
        m[1][2] = rho12;
        m[2][1] = rho12.conj();
        Self { m }
    }

    /// Wraps a two-qubit density matrix in textbook order, rejecting any
    /// entry outside the X pattern.
    pub fn from_entries(m: [[C64; 4]; 4]) -> Result<Self> {
        let worst = (0..4)
            .flat_map(|r| (0..4).map(move |c| (r, c)))
            .filter(|&(r, c)| r != c && r + c != 3)
            .map(|(r, c)| m[r][c].norm())
            .fold(0.0_f64, f64::max);
        if worst >= X_FORM_TOL {
            return Err(Error::NotXForm(worst));
        }
        Ok(Self { m })
    }

    /// Converts a simulator density matrix whose qubit 0 holds the second
    /// member of the pair (so qubit 1, the first member, is the high bit).
    pub fn from_density(rho: &DensityMatrix) -> Result<Self> {
        if rho.n_qubits() != 2 {
            return Err(Error::DimensionMismatch {
                left: rho.n_qubits(),
                right: 2,
            });
        }
        let mut m = [[C64::new(0.0, 0.0); 4]; 4];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, z) in row.iter_mut().enumerate() {
                *z = rho.get(r, c);
            }
        }
        Self::from_entries(m)
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.m[r][c]
    }

    pub fn entries(&self) -> &[[C64; 4]; 4] {
        &self.m
    }

    pub fn trace(&self) -> f64 {
        (0..4).map(|i| self.m[i][i].re).sum()
    }

    pub fn max_abs_diff(&self, other: &XStateMatrix) -> f64 {
        (0..4)
            .flat_map(|r| (0..4).map(move |c| (r, c)))
            .map(|(r, c)| (self.m[r][c] - other.m[r][c]).norm())
            .fold(0.0, f64::max)
    }
}

/// Reduced state of the system pair after damping at `p`.
pub fn analytic_rho_s(init: &InitialState, p: &DampingParams) -> XStateMatrix {
    let (s, c) = (init.s, init.c);
    let (e2, z2) = (p.eta * p.eta, p.zeta * p.zeta);
    let mid = c * c * e2 * z2;
    XStateMatrix::new(
        [s * s + c * c * z2 * z2, mid, mid, c * c * e2 * e2],
        C64::new(s * c * e2, 0.0),
        C64::new(0.0, 0.0),
    )
}

/// Reduced state of the environment pair: [`analytic_rho_s`] with η and ζ
/// exchanged.
pub fn analytic_rho_env(init: &InitialState, p: &DampingParams) -> XStateMatrix {
    let swapped = DampingParams {
        eta: p.zeta,
        zeta: p.eta,
        ..*p
    };
    analytic_rho_s(init, &swapped)
}

/// `C = 2 max(0, |ρ₀₃| - sqrt(ρ₁₁ρ₂₂), |ρ₁₂| - sqrt(ρ₀₀ρ₃₃))`.
pub fn concurrence_xstate(rho: &XStateMatrix) -> f64 {
    let d = |i: usize| rho.get(i, i).re.max(0.0);
    let a = rho.get(0, 3).norm() - (d(1) * d(2)).sqrt();
    let b = rho.get(1, 2).norm() - (d(0) * d(3)).sqrt();
    (2.0 * a.max(b).max(0.0)).min(1.0)
}

/// System concurrence `max(0, -2η²(c²ζ² - sc))`.
pub fn system_concurrence(init: &InitialState, p: &DampingParams) -> f64 {
    let (s, c) = (init.s, init.c);
    (-2.0 * p.eta * p.eta * (c * c * p.zeta * p.zeta - s * c)).max(0.0)
}

/// Environment concurrence `max(0, -2ζ²(c²η² - sc))`.
pub fn environment_concurrence(init: &InitialState, p: &DampingParams) -> f64 {
    let (s, c) = (init.s, init.c);
    (-2.0 * p.zeta * p.zeta * (c * c * p.eta * p.eta - s * c)).max(0.0)
}

/// `P_Φ = <Φ|ρ|Φ>` for `|Φ> = (|00> + |11>)/sqrt(2)`.
pub fn witness_probability(rho: &XStateMatrix) -> f64 {
    0.5 * (rho.get(0, 0).re + rho.get(3, 3).re) + rho.get(0, 3).re
}

/// Concurrence implied by a witness probability, `max(0, 2 P_Φ - 1)`.
pub fn concurrence_from_witness(p_phi: f64) -> f64 {
    (2.0 * p_phi - 1.0).max(0.0)
}

/// Raised when a shot estimate exceeds 1 by more than three standard errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualityWarning {
    pub raw: f64,
    pub sigma: f64,
}

impl std::fmt::Display for QualityWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "concurrence estimate {:.6} exceeds 1 by more than 3 sigma ({:.3e})",
            self.raw, self.sigma
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrenceEstimate {
    /// `max(0, 4 P₀₁₀ - 1)` clipped to `[0, 1]`.
    pub value: f64,
    /// `4 P₀₁₀ - 1` before clipping.
    pub raw: f64,
    pub p010: f64,
    pub warning: Option<QualityWarning>,
}

/// Outcome `0_{sys0} 1_{ancilla} 0_{sys1}` in measured order.
pub const WITNESS_OUTCOME: usize = 0b010;

/// Estimate from a distribution over the three measured qubits (sys0,
/// ancilla, sys1). `shots` sets the binomial error used for the warning.
pub fn concurrence_from_distribution(
    dist: &[f64],
    shots: Option<u64>,
) -> Result<ConcurrenceEstimate> {
    if dist.len() != 8 {
        return Err(Error::BadDistribution(format!(
            "expected 8 outcomes over three qubits, got {}",
            dist.len()
        )));
    }
    let p010 = dist[WITNESS_OUTCOME];
    let raw = 4.0 * p010 - 1.0;
    let sigma = shots
        .map(|n| 4.0 * (p010 * (1.0 - p010) / n as f64).sqrt())
        .unwrap_or(0.0);
    let warning = (raw > 1.0 + 3.0 * sigma).then_some(QualityWarning { raw, sigma });
    Ok(ConcurrenceEstimate {
        value: raw.clamp(0.0, 1.0),
        raw,
        p010,
        warning,
    })
}

/// Estimate from raw counts; the histogram must cover exactly three qubits.
pub fn concurrence_from_counts(counts: &CountsHistogram) -> Result<ConcurrenceEstimate> {
    if counts.bit_labels().len() != 3 {
        return Err(Error::LabelMismatch {
            expected: vec![0; 3],
            found: counts.bit_labels().to_vec(),
        });
    }
    concurrence_from_distribution(&counts.frequencies(), Some(counts.shots()))
}

/// Sudden-death time `γt_d = -ln(1 - s/c)`, or `None` when `s >= c` and the
/// system concurrence only decays asymptotically.
pub fn esd_time(init: &InitialState) -> Option<f64> {
    if init.is_balanced_or_above() {
        return None;
    }
    let t = -(-init.s / init.c).ln_1p();
    debug_assert!(esd_time_bisection(init).is_none_or(|b| (b - t).abs() < BISECTION_TOL));
    Some(t)
}

/// Sudden-birth time `γt_b = -ln(s/c)`, or `None` when `s >= c` (the
/// environment is entangled from `t = 0`) or `s = 0` (never entangled).
pub fn esb_time(init: &InitialState) -> Option<f64> {
    if init.is_balanced_or_above() || init.s <= 0.0 {
        return None;
    }
    let t = -(init.s / init.c).ln();
    debug_assert!(esb_time_bisection(init).is_none_or(|b| (b - t).abs() < BISECTION_TOL));
    Some(t)
}

/// Root of `sc - c²ζ²(γt)` by bisection on [`BISECTION_BRACKET`].
pub fn esd_time_bisection(init: &InitialState) -> Option<f64> {
    if init.is_balanced_or_above() {
        return None;
    }
    let (s, c) = (init.s, init.c);
    bisect(|gt| s * c - c * c * (-(-gt).exp_m1()))
}

/// Root of `sc - c²η²(γt)` by bisection on [`BISECTION_BRACKET`].
pub fn esb_time_bisection(init: &InitialState) -> Option<f64> {
    if init.is_balanced_or_above() {
        return None;
    }
    let (s, c) = (init.s, init.c);
    bisect(|gt| s * c - c * c * (-gt).exp())
}

fn bisect(f: impl Fn(f64) -> f64) -> Option<f64> {
    let (mut lo, mut hi) = BISECTION_BRACKET;
    let (flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Some(lo);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if f(mid).signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, LN_2};

    fn alpha(k: f64) -> InitialState {
        InitialState::from_alpha(1.0 / k.sqrt()).unwrap()
    }

    fn params(gt: f64) -> DampingParams {
        DampingParams::new(gt).unwrap()
    }

    #[test]
    fn rho_s_examples() {
        let init = alpha(3.0);
        let r0 = analytic_rho_s(&init, &params(0.0));
        let pure = XStateMatrix::new(
            [init.s * init.s, 0.0, 0.0, init.c * init.c],
            C64::new(init.s * init.c, 0.0),
            C64::new(0.0, 0.0),
        );
        assert!(r0.max_abs_diff(&pure) < 1e-15);

        let rinf = analytic_rho_s(&init, &params(50.0));
        let ground =
            XStateMatrix::new([1.0, 0.0, 0.0, 0.0], C64::new(0.0, 0.0), C64::new(0.0, 0.0));
        assert!(rinf.max_abs_diff(&ground) < 1e-10);

        let r = analytic_rho_s(&alpha(2.0), &params(LN_2));
        let expect = XStateMatrix::new(
            [5.0 / 8.0, 1.0 / 8.0, 1.0 / 8.0, 1.0 / 8.0],
            C64::new(0.25, 0.0),
            C64::new(0.0, 0.0),
        );
        assert!(r.max_abs_diff(&expect) < 1e-15);
        assert!((r.trace() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rho_env_examples() {
        let init = alpha(5.0);
        let ground =
            XStateMatrix::new([1.0, 0.0, 0.0, 0.0], C64::new(0.0, 0.0), C64::new(0.0, 0.0));
        assert!(analytic_rho_env(&init, &params(0.0)).max_abs_diff(&ground) < 1e-15);

        let transferred = XStateMatrix::new(
            [init.s * init.s, 0.0, 0.0, init.c * init.c],
            C64::new(init.s * init.c, 0.0),
            C64::new(0.0, 0.0),
        );
        assert!(analytic_rho_env(&init, &params(50.0)).max_abs_diff(&transferred) < 1e-10);

        let b = alpha(2.0);
        let p = params(LN_2);
        assert!(analytic_rho_env(&b, &p).max_abs_diff(&analytic_rho_s(&b, &p)) < 1e-15);
    }

    #[test]
    fn concurrence_examples() {
        let bell = XStateMatrix::new([0.5, 0.0, 0.0, 0.5], C64::new(0.5, 0.0), C64::new(0.0, 0.0));
        assert!((concurrence_xstate(&bell) - 1.0).abs() < 1e-15);
        assert!((witness_probability(&bell) - 1.0).abs() < 1e-15);

        let product =
            XStateMatrix::new([1.0, 0.0, 0.0, 0.0], C64::new(0.0, 0.0), C64::new(0.0, 0.0));
        assert_eq!(concurrence_xstate(&product), 0.0);

        let mixed = XStateMatrix::new([0.25; 4], C64::new(0.0, 0.0), C64::new(0.0, 0.0));
        assert!((witness_probability(&mixed) - 0.25).abs() < 1e-15);
        assert_eq!(concurrence_from_witness(witness_probability(&mixed)), 0.0);

        let r = analytic_rho_s(&alpha(5.0), &params(0.0));
        assert!((concurrence_xstate(&r) - 0.8).abs() < 1e-15);
        let r = analytic_rho_s(&alpha(3.0), &params(0.0));
        assert!((concurrence_xstate(&r) - 2.0 * 2f64.sqrt() / 3.0).abs() < 1e-15);

        let r = analytic_rho_s(&alpha(2.0), &params(LN_2));
        assert!((witness_probability(&r) - 5.0 / 8.0).abs() < 1e-15);
        assert!((concurrence_xstate(&r) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn psi_type_anti_diagonal_counts_too() {
        // (|01> + |10>)/sqrt(2)
        let psi = XStateMatrix::new([0.0, 0.5, 0.5, 0.0], C64::new(0.0, 0.0), C64::new(0.5, 0.0));
        assert!((concurrence_xstate(&psi) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn not_x_form_is_rejected() {
        let mut m = [[C64::new(0.0, 0.0); 4]; 4];
        m[0][0] = C64::new(1.0, 0.0);
        m[0][1] = C64::new(1e-3, 0.0);
        assert!(matches!(
            XStateMatrix::from_entries(m),
            Err(Error::NotXForm(_))
        ));
    }

    #[test]
    fn counts_estimator() {
        let all = CountsHistogram::from_pairs(vec![1, 2, 3], [("010", 1000)]).unwrap();
        let est = concurrence_from_counts(&all).unwrap();
        assert_eq!(est.value, 1.0);
        assert_eq!(est.raw, 3.0);
        assert!(est.warning.is_some());

        let half =
            CountsHistogram::from_pairs(vec![1, 2, 3], [("010", 500), ("110", 500)]).unwrap();
        let est = concurrence_from_counts(&half).unwrap();
        assert_eq!(est.value, 1.0);
        assert!(est.warning.is_none());

        let uniform = CountsHistogram::new(vec![1, 2, 3], vec![10; 8]).unwrap();
        let est = concurrence_from_counts(&uniform).unwrap();
        assert_eq!(est.p010, 0.125);
        assert_eq!(est.value, 0.0);

        let two = CountsHistogram::new(vec![1, 2], vec![1; 4]).unwrap();
        assert!(matches!(
            concurrence_from_counts(&two),
            Err(Error::LabelMismatch { .. })
        ));
    }

    #[test]
    fn sudden_times() {
        let a5 = alpha(5.0);
        assert!((esd_time(&a5).unwrap() - LN_2).abs() < 1e-15);
        assert!((esb_time(&a5).unwrap() - LN_2).abs() < 1e-15);
        assert!((esd_time_bisection(&a5).unwrap() - LN_2).abs() < 1e-9);

        let a3 = alpha(3.0);
        let td = esd_time(&a3).unwrap();
        let tb = esb_time(&a3).unwrap();
        assert!((td - (-(1.0 - FRAC_1_SQRT_2).ln())).abs() < 1e-12);
        assert!((tb - 0.5 * LN_2).abs() < 1e-15);
        assert!(tb < td);
        assert!((esb_time_bisection(&a3).unwrap() - tb).abs() < 1e-9);

        let a2 = alpha(2.0);
        assert_eq!(esd_time(&a2), None);
        assert_eq!(esb_time(&a2), None);
        assert_eq!(esd_time_bisection(&a2), None);
        // lambda-built balanced state may carry an ulp of imbalance
        let b = InitialState::from_lambda(std::f64::consts::FRAC_PI_2).unwrap();
        assert_eq!(esd_time(&b), None);
    }

    #[test]
    fn balanced_closed_forms() {
        let init = alpha(2.0);
        for k in 0..64 {
            let gt = 3.0 * k as f64 / 63.0;
            let p = params(gt);
            assert!((system_concurrence(&init, &p) - (-2.0 * gt).exp()).abs() < 1e-12);
            assert!(
                (environment_concurrence(&init, &p) - (1.0 - (-gt).exp()).powi(2)).abs() < 1e-12
            );
        }
    }
}
