use thiserror::Error;

/// Errors raised by the simulator, channels, and protocol layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("operator is not unitary (max deviation {deviation:.3e})")]
    NonUnitary { deviation: f64 },

    #[error("bad target: {0}")]
    BadTarget(String),

    #[error("shot count must be at least 1")]
    ZeroShots,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("two-qubit gate on non-adjacent qubits ({0}, {1})")]
    UnroutableGate(usize, usize),

    #[error("gamma*t must be non-negative, got {0}")]
    NegativeTime(f64),

    #[error("probability {0} outside [0, 1]")]
    BadProbability(f64),

    #[error("bad distribution: {0}")]
    BadDistribution(String),

    #[error("label mismatch: expected {expected:?}, found {found:?}")]
    LabelMismatch {
        expected: Vec<usize>,
        found: Vec<usize>,
    },

    #[error("calibration matrix is numerically singular (condition estimate {0:.3e})")]
    SingularCalibration(f64),

    #[error("matrix is not in X form (off-pattern entry of magnitude {0:.3e})")]
    NotXForm(f64),

    #[error("qubit layouts overlap on physical qubit {0}")]
    OverlappingLayouts(usize),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
