use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Role of each qubit in the five-qubit chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Env0,
    Sys0,
    Ancilla,
    Sys1,
    Env1,
}

impl Role {
    pub const ALL: [Role; 5] = [
        Role::Env0,
        Role::Sys0,
        Role::Ancilla,
        Role::Sys1,
        Role::Env1,
    ];
}

/// Physical qubits assigned to `env0 - sys0 - ancilla - sys1 - env1`.
///
/// The five indices must be consecutive along a linear chain, in either
/// direction. Simulation runs on a five-qubit register whose qubit `k` is
/// the physical qubit `min + k`; the layout therefore fixes which end of the
/// register each role lands on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "[usize; 5]", into = "[usize; 5]")]
pub struct QubitLayout {
    physical: [usize; 5],
}

impl QubitLayout {
    pub fn new(physical: [usize; 5]) -> Result<Self> {
        let ascending = physical.windows(2).all(|w| w[1] == w[0] + 1);
        let descending = physical.windows(2).all(|w| w[0] == w[1] + 1);
        if !(ascending || descending) {
            return Err(Error::InvalidConfig(format!(
                "layout {physical:?} is not a consecutive linear chain"
            )));
        }
        Ok(Self { physical })
    }

    /// The three disjoint chains `q0-q4`, `q6-q10` and `q27-q31`.
    pub fn standard_sets() -> [QubitLayout; 3] {
        [
            QubitLayout {
                physical: [0, 1, 2, 3, 4],
            },
            QubitLayout {
                physical: [6, 7, 8, 9, 10],
            },
            QubitLayout {
                physical: [27, 28, 29, 30, 31],
            },
        ]
    }

    pub fn physical(&self, role: Role) -> usize {
        self.physical[role as usize]
    }

    pub fn physical_qubits(&self) -> [usize; 5] {
        self.physical
    }

    /// Simulation-register index of `role`.
    pub fn local(&self, role: Role) -> usize {
        let min = *self.physical.iter().min().expect("five entries");
        self.physical(role) - min
    }

    /// Measured qubits `(sys0, ancilla, sys1)`, in bitstring order.
    pub fn measured(&self) -> [usize; 3] {
        [
            self.local(Role::Sys0),
            self.local(Role::Ancilla),
            self.local(Role::Sys1),
        ]
    }

    pub fn overlaps(&self, other: &QubitLayout) -> Option<usize> {
        self.physical
            .iter()
            .copied()
            .find(|q| other.physical.contains(q))
    }
}

impl Default for QubitLayout {
    fn default() -> Self {
        Self {
            physical: [0, 1, 2, 3, 4],
        }
    }
}

impl TryFrom<[usize; 5]> for QubitLayout {
    type Error = Error;

    fn try_from(physical: [usize; 5]) -> Result<Self> {
        Self::new(physical)
    }
}

impl From<QubitLayout> for [usize; 5] {
    fn from(layout: QubitLayout) -> Self {
        layout.physical
    }
}
