use std::f64::consts::FRAC_PI_2;

use super::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::sim::{CMatrix, C64};

pub const PHASE_EQ_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Control,
    Target,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OneQubit {
    X,
    SqrtX,
    Rz(f64),
}

impl OneQubit {
    fn on(self, q: usize) -> Gate {
        match self {
            OneQubit::X => Gate::X(q),
            OneQubit::SqrtX => Gate::SqrtX(q),
            OneQubit::Rz(l) => Gate::Rz(q, l),
        }
    }
}

/// Single-qubit dressing that turns `ECR(control, target)` into `CX`.
///
/// `CX(c, t) ≅ [RZ_c(π/2) · SQRT_X_t] · ECR(c, t) · X_c` up to a global phase.
#[derive(Debug, Clone, PartialEq)]
pub struct CxRule {
    pub before: Vec<(Side, OneQubit)>,
    pub after: Vec<(Side, OneQubit)>,
}

impl CxRule {
    pub fn standard() -> Self {
        Self {
            before: vec![(Side::Control, OneQubit::X)],
            after: vec![
                (Side::Control, OneQubit::Rz(FRAC_PI_2)),
                (Side::Target, OneQubit::SqrtX),
            ],
        }
    }

    pub fn expand(&self, control: usize, target: usize) -> Vec<Gate> {
        let pick = |side: Side| match side {
            Side::Control => control,
            Side::Target => target,
        };
        let mut gates: Vec<Gate> = self.before.iter().map(|&(s, g)| g.on(pick(s))).collect();
        gates.push(Gate::Ecr(control, target));
        gates.extend(self.after.iter().map(|&(s, g)| g.on(pick(s))));
        gates
    }
}

impl Default for CxRule {
    fn default() -> Self {
        Self::standard()
    }
}

/// Rewrites `c` into `{ID, X, SQRT_X, RZ, ECR}` with the standard CX rule.
pub fn transpile_to_basis(c: &Circuit) -> Result<Circuit> {
    transpile_with_rule(c, &CxRule::standard())
}

pub fn transpile_with_rule(c: &Circuit, rule: &CxRule) -> Result<Circuit> {
    let mut out = c.empty_like();
    for g in c.ops() {
        if g.is_two_qubit() {
            let t = g.targets();
            if !c.is_adjacent(t[0], t[1]) {
                return Err(Error::UnroutableGate(t[0], t[1]));
            }
        }
        match *g {
            Gate::Cx { control, target } => out.extend(rule.expand(control, target))?,
            Gate::Swap(a, b) => {
                for (ctl, tgt) in [(a, b), (b, a), (a, b)] {
                    out.extend(rule.expand(ctl, tgt))?;
                }
            }
            basis => out.push(basis)?,
        }
    }
    Ok(out)
}

/// Whether `u = e^{iφ} v` for some phase, within [`PHASE_EQ_TOL`].
///
/// The phase is fixed by the first entry of `v` whose magnitude is at least
/// half the size guaranteed to exist in every column of a unitary.
pub fn unitary_equal_up_to_phase(u: &CMatrix, v: &CMatrix) -> Result<bool> {
    if u.shape() != v.shape() {
        return Err(Error::DimensionMismatch {
            left: u.nrows(),
            right: v.nrows(),
        });
    }
    let floor = 0.5 / (v.nrows() as f64).sqrt();
    let Some((idx, _)) = v.iter().enumerate().find(|(_, z)| z.norm() >= floor) else {
        return Ok(false);
    };
    let ratio = u.iter().nth(idx).copied().unwrap() / v.iter().nth(idx).copied().unwrap();
    if ratio.norm() < 1e-300 {
        return Ok(false);
    }
    let phase = C64::from_polar(1.0, ratio.arg());
    let dev = u
        .iter()
        .zip(v.iter())
        .map(|(a, b)| (a - phase * b).norm())
        .fold(0.0_f64, f64::max);
    Ok(dev <= PHASE_EQ_TOL)
}
