//! Error types shared across the simulator.

use crate::fock::Convention;

/// Errors produced by state construction, circuit application and measurement.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// An operation required one amplitude convention but received the other.
    #[error("convention mismatch: expected {expected:?}, got {got:?}")]
    ConventionMismatch { expected: Convention, got: Convention },

    /// A state mixed terms of different total photon number.
    #[error("photon-number mixture: terms with {a} and {b} photons in one state")]
    PhotonNumberMixture { a: u32, b: u32 },

    /// Tensor factors shared a spatial mode.
    #[error("tensor factors overlap on spatial mode {0:?}")]
    OverlappingModes(String),

    /// Normalization or fidelity was requested for the zero state.
    #[error("zero state")]
    ZeroState,

    /// A value has no exact representation in the required form.
    #[error("not exactly representable: {0}")]
    NotRepresentable(String),

    /// A spatial mode is not part of the declared mode set.
    #[error("unknown spatial mode {0:?}")]
    UnknownMode(String),

    /// Circuit wiring violates the feed-forward contract.
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    /// A configuration combination is not supported.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Detection requires at least one detected spatial mode.
    #[error("empty detected set")]
    EmptyDetectedSet,

    /// A singlet needs two distinct internal labels.
    #[error("singlet labels must differ, got {0} twice")]
    EqualSingletLabels(u8),

    /// Hyper-encoding covers internal labels 1..=4 only.
    #[error("internal label {0} outside the hyper-encoding range 1..=4")]
    HyperLabelOutOfRange(u8),

    /// Interference efficiency must lie in the unit interval.
    #[error("eta {0} outside [0, 1]")]
    EtaOutOfRange(String),

    /// Malformed textual input (patterns, rationals, flags).
    #[error("parse error: {0}")]
    Parse(String),

    /// Report serialization failed.
    #[error("serialization error: {0}")]
    Serialize(String),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Serialize(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
