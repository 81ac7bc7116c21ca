//! Exact simulator for linear-optical high-dimensional entanglement swapping.
//!
//! The crate models bosonic states over (spatial mode, internal mode) cells,
//! applies 50:50 beam-splitter networks by exact polynomial substitution on
//! creation operators, and enumerates detection outcomes under threshold and
//! photon-number-resolving detector models. All default arithmetic is exact:
//! amplitudes live in the ring Z[i, 1/√2] and probabilities are reduced
//! rationals, so heralded states, event counts and success probabilities are
//! integer identities rather than approximations.
//!
//! Module layout:
//! - [`amplitude`]: the exact ring and rational probabilities.
//! - [`scalar`]: the backend trait and the floating-complex alternative.
//! - [`fock`]: occupation vectors, sparse superpositions, state algebra.
//! - [`optics`]: beam splitters and feed-forward circuits.
//! - [`protocol`]: the named initial, ancilla and target states, the
//!   swapping circuits, and the hyper-encoding dictionary.
//! - [`measure`]: detection enumeration, heralding, classification,
//!   success-probability accounting and the η^N fidelity-decay model.
//! - [`report`]: serializable run reports (JSON and CSV).

pub mod amplitude;
pub mod error;
pub mod fock;
pub mod measure;
pub mod optics;
pub mod protocol;
pub mod report;
pub mod scalar;

pub use amplitude::{Amplitude, Rational};
pub use error::{Error, Result};
pub use fock::{Convention, Mode, ModeCell, Normalized, OccupationVector, PureState};
pub use measure::{
    aggregate, classify, classify_on, coincidence_component, count_events, enumerate_outcomes,
    fidelity, fidelity_decay, flexible_sweep, pnr_gains, Aggregates, Classified,
    CountConvention, DetectionPattern, EventCounts, FlexibleAggregates, FlexibleSlice,
    GainReport, HeraldClass, Outcome,
};
pub use optics::{apply_beam_splitter, apply_circuit, BeamSplitter, Circuit};
pub use protocol::{
    ancilla_state, bell_singlet, build_circuit, entangled_pair, hyper_label, hyper_render,
    hyper_unlabel, numeric_render, AncillaBasis, DetectorModel, HeraldAssignment,
    InitialStateVariant, Polarization, ProtocolConfig, TimeBin,
};
pub use report::{build_report, HeraldReport, HeraldRow, RunManifest};
pub use scalar::{Phase, ProbValue, Scalar, FLOAT_EPS};
