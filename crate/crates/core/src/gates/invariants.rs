use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::sim::{check_unitary, CMatrix, C64};

/// Makhlin invariants of a two-qubit gate.
///
/// `g1 = tr²(m) / (16 det U)` is complex and `g2 = (tr²(m) - tr(m²)) / (4 det U)`
/// is real, where `m = U_Bᵀ U_B` and `U_B` is `U` in the magic basis. Two gates
/// are equal up to single-qubit operations iff both invariants agree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalInvariants {
    pub g1: C64,
    pub g2: f64,
}

impl LocalInvariants {
    pub fn approx_eq(&self, other: &LocalInvariants, tol: f64) -> bool {
        (self.g1 - other.g1).norm() <= tol && (self.g2 - other.g2).abs() <= tol
    }
}

fn magic_basis() -> CMatrix {
    let h = FRAC_1_SQRT_2;
    let r = |x: f64| C64::new(x * h, 0.0);
    let i = |x: f64| C64::new(0.0, x * h);
    let z = C64::new(0.0, 0.0);
    CMatrix::from_row_slice(
        4,
        4,
        &[
            r(1.0),
            z,
            z,
            i(1.0),
            z,
            i(1.0),
            r(1.0),
            z,
            z,
            i(1.0),
            r(-1.0),
            z,
            r(1.0),
            z,
            z,
            i(-1.0),
        ],
    )
}

pub fn local_equivalence_invariants(u: &CMatrix) -> Result<LocalInvariants> {
    if u.nrows() != 4 || u.ncols() != 4 {
        return Err(Error::DimensionMismatch {
            left: u.nrows(),
            right: 4,
        });
    }
    check_unitary(u)?;
    let q = magic_basis();
    let ub = q.adjoint() * u * &q;
    let m = ub.transpose() * &ub;
    let det = u.determinant();
    let tr = m.trace();
    let tr_sq = (&m * &m).trace();
    let g1 = tr * tr / (C64::new(16.0, 0.0) * det);
    let g2 = (tr * tr - tr_sq) / (C64::new(4.0, 0.0) * det);
    Ok(LocalInvariants { g1, g2: g2.re })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::Gate;
    use crate::sim::unitarity_deviation;

    #[test]
    fn magic_basis_is_unitary() {
        assert!(unitarity_deviation(&magic_basis()) < 1e-15);
    }

    #[test]
    fn known_classes() {
        let cx = local_equivalence_invariants(&Gate::cx(0, 1).matrix()).unwrap();
        let ecr = local_equivalence_invariants(&Gate::Ecr(0, 1).matrix()).unwrap();
        let swap = local_equivalence_invariants(&Gate::Swap(0, 1).matrix()).unwrap();
        let id = local_equivalence_invariants(&CMatrix::identity(4, 4)).unwrap();
        assert!(cx.approx_eq(
            &LocalInvariants {
                g1: C64::new(0.0, 0.0),
                g2: 1.0
            },
            1e-12
        ));
        assert!(ecr.approx_eq(&cx, 1e-9));
        assert!(swap.approx_eq(
            &LocalInvariants {
                g1: C64::new(-1.0, 0.0),
                g2: -3.0
            },
            1e-12
        ));
        assert!(id.approx_eq(
            &LocalInvariants {
                g1: C64::new(1.0, 0.0),
                g2: 3.0
            },
            1e-12
        ));
        assert!(!cx.approx_eq(&swap, 1e-9));
    }

    #[test]
    fn rejects_non_unitary_and_wrong_size() {
        let m = CMatrix::identity(4, 4) * C64::new(2.0, 0.0);
        assert!(matches!(
            local_equivalence_invariants(&m),
            Err(Error::NonUnitary { .. })
        ));
        assert!(local_equivalence_invariants(&CMatrix::identity(2, 2)).is_err());
    }
}
