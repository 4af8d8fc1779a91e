//! Hardware basis gates, routed circuits on a linear chain, and
//! transpilation into the basis `{ID, X, SQRT_X, RZ, ECR}`.
//!
//! Two-qubit matrices follow the local ordering of [`crate::sim`]: the first
//! listed qubit is the low bit. `CX` lists `[control, target]`; `ECR(a, b)`
//! is `(X_a - Y_a X_b) / sqrt(2)`, i.e. `X_a · exp(-iπ/4 Z_a X_b)`.

mod circuit;
mod invariants;
mod random;
mod transpile;

pub use circuit::Circuit;
pub use invariants::{local_equivalence_invariants, LocalInvariants};
pub use random::random_routed_circuit;
pub use transpile::{
    transpile_to_basis, transpile_with_rule, unitary_equal_up_to_phase, CxRule, OneQubit, Side,
};

use std::f64::consts::FRAC_1_SQRT_2;

use crate::sim::{kron_local, CMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    Id(usize),
    X(usize),
    SqrtX(usize),
    /// `RZ(λ) = diag(e^{-iλ/2}, e^{iλ/2})`.
    Rz(usize, f64),
    Cx {
        control: usize,
        target: usize,
    },
    Ecr(usize, usize),
    Swap(usize, usize),
}

impl Gate {
    pub fn cx(control: usize, target: usize) -> Self {
        Gate::Cx { control, target }
    }

    /// Qubits the matrix acts on, in local-bit order.
    pub fn targets(&self) -> Vec<usize> {
        match *self {
            Gate::Id(q) | Gate::X(q) | Gate::SqrtX(q) | Gate::Rz(q, _) => vec![q],
            Gate::Cx { control, target } => vec![control, target],
            Gate::Ecr(a, b) | Gate::Swap(a, b) => vec![a, b],
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cx { .. } | Gate::Ecr(..) | Gate::Swap(..))
    }

    /// Whether the gate belongs to the hardware basis set.
    pub fn is_basis(&self) -> bool {
        !matches!(self, Gate::Cx { .. } | Gate::Swap(..))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::Id(_) => "id",
            Gate::X(_) => "x",
            Gate::SqrtX(_) => "sx",
            Gate::Rz(..) => "rz",
            Gate::Cx { .. } => "cx",
            Gate::Ecr(..) => "ecr",
            Gate::Swap(..) => "swap",
        }
    }

    /// The same gate moved onto other qubits.
    pub fn remap(&self, f: impl Fn(usize) -> usize) -> Gate {
        match *self {
            Gate::Id(q) => Gate::Id(f(q)),
            Gate::X(q) => Gate::X(f(q)),
            Gate::SqrtX(q) => Gate::SqrtX(f(q)),
            Gate::Rz(q, l) => Gate::Rz(f(q), l),
            Gate::Cx { control, target } => Gate::cx(f(control), f(target)),
            Gate::Ecr(a, b) => Gate::Ecr(f(a), f(b)),
            Gate::Swap(a, b) => Gate::Swap(f(a), f(b)),
        }
    }

    pub fn matrix(&self) -> CMatrix {
        match *self {
            Gate::Id(_) => CMatrix::identity(2, 2),
            Gate::X(_) => pauli_x(),
            Gate::SqrtX(_) => sqrt_x(),
            Gate::Rz(_, lambda) => rz(lambda),
            Gate::Cx { .. } => {
                let mut m = CMatrix::zeros(4, 4);
                for (r, c) in [(0, 0), (2, 2), (3, 1), (1, 3)] {
                    m[(r, c)] = one();
                }
                m
            }
            Gate::Ecr(..) => ecr(),
            Gate::Swap(..) => {
                let mut m = CMatrix::zeros(4, 4);
                for (r, c) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
                    m[(r, c)] = one();
                }
                m
            }
        }
    }
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

fn mat2(entries: [C64; 4]) -> CMatrix {
    CMatrix::from_row_slice(2, 2, &entries)
}

pub fn pauli_x() -> CMatrix {
    let z = C64::new(0.0, 0.0);
    mat2([z, one(), one(), z])
}

pub fn pauli_y() -> CMatrix {
    let z = C64::new(0.0, 0.0);
    mat2([z, C64::new(0.0, -1.0), C64::new(0.0, 1.0), z])
}

pub fn pauli_z() -> CMatrix {
    let z = C64::new(0.0, 0.0);
    mat2([one(), z, z, -one()])
}

/// `½ [[1+i, 1-i], [1-i, 1+i]]`.
pub fn sqrt_x() -> CMatrix {
    let p = C64::new(0.5, 0.5);
    let m = C64::new(0.5, -0.5);
    mat2([p, m, m, p])
}

pub fn rz(lambda: f64) -> CMatrix {
    let z = C64::new(0.0, 0.0);
    mat2([
        C64::from_polar(1.0, -lambda / 2.0),
        z,
        z,
        C64::from_polar(1.0, lambda / 2.0),
    ])
}

pub fn ecr() -> CMatrix {
    let i2 = CMatrix::identity(2, 2);
    (kron_local(&pauli_x(), &i2) - kron_local(&pauli_y(), &pauli_x()))
        * C64::new(FRAC_1_SQRT_2, 0.0)
}

/// Product `SQRT_X · RZ(λ) · SQRT_X`, which equals
/// `[[sin(λ/2), cos(λ/2)], [cos(λ/2), -sin(λ/2)]]` with no leftover phase.
pub fn ry_equivalent(lambda: f64) -> CMatrix {
    sqrt_x() * rz(lambda) * sqrt_x()
}

/// Gates realising [`ry_equivalent`] on qubit `q`.
pub fn rotation_gates(q: usize, lambda: f64) -> [Gate; 3] {
    [Gate::SqrtX(q), Gate::Rz(q, lambda), Gate::SqrtX(q)]
}

/// Basis gates for `RY(angle) = exp(-i angle Y / 2)` on `q`, exactly.
///
/// `RY(a) = SQRT_X · RZ(-a) · SQRT_X · X`; the `X` acts first.
pub fn ry_gates(q: usize, angle: f64) -> [Gate; 4] {
    [
        Gate::X(q),
        Gate::SqrtX(q),
        Gate::Rz(q, -angle),
        Gate::SqrtX(q),
    ]
}

pub fn ry(angle: f64) -> CMatrix {
    let (s, c) = (angle / 2.0).sin_cos();
    mat2([
        C64::new(c, 0.0),
        C64::new(-s, 0.0),
        C64::new(s, 0.0),
        C64::new(c, 0.0),
    ])
}

/// Controlled `RY(angle)`: `CX · RY_t(-a/2) · CX` sandwiched by `RY_t(a/2)`.
pub fn controlled_ry_gates(control: usize, target: usize, angle: f64) -> Vec<Gate> {
    let mut gates = vec![Gate::cx(control, target)];
    gates.extend(ry_gates(target, -angle / 2.0));
    gates.push(Gate::cx(control, target));
    gates.extend(ry_gates(target, angle / 2.0));
    gates
}
