//! The entanglement-swapping protocols: sources, ancillas, circuits, targets.
//!
//! Two entangled photon pairs enter on rails (a, b) and (c, d). Rails b and c
//! interfere on a first beam splitter; each of its outputs then interferes
//! with one rail of a two-photon ancilla on a further splitter layer (one
//! layer for dimensions up to 4, two layers with two ancillas for 5 and 6).
//! All post-splitter rails are detected except a and d, which keep the
//! heralded state.
//!
//! Internal labels are plain integers 1..=6. The four-label protocols admit a
//! hyperentangled reading (polarization crossed with an early/late time bin),
//! exposed through [`hyper_label`] and [`hyper_render`].
//!
//! States built here use the monomial convention so they feed circuits
//! directly; with at most one photon per cell the coefficients equal Fock
//! amplitudes anyway.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{Mode, ModeCell, OccupationVector, PureState};
use crate::fock::Convention;
use crate::optics::{BeamSplitter, Circuit};
use crate::scalar::{Phase, Scalar};

/// Which two-photon state each source pair emits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialStateVariant {
    /// (1/√d) Σ_k |k,k⟩ over labels 1..=d.
    Uniform,
    /// (|1,2⟩ + |2,1⟩ + |3,4⟩)/√3: three-dimensional entanglement carried on
    /// four labels (dimension 3 only).
    HybridSymmetric,
    /// (|1,1⟩ + |2,2⟩ + |3,4⟩)/√3 (dimension 3 only).
    HybridDiagonal,
}

/// Which state the two-photon ancilla is prepared in (dimension 4 only for
/// the non-plain choices).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AncillaBasis {
    /// (|1,2⟩ + e^(iφ)|3,4⟩)/√2.
    Plain,
    /// (|1,2⟩ + |2,1⟩ + |3,4⟩ + |4,3⟩)/2.
    Symmetric,
    /// (|1,4⟩ + |2,3⟩)/√2: pairs the labels across the two halves.
    CrossPaired,
}

/// Detector readout model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectorModel {
    /// Click / no-click per rail; photon numbers behind a click merge.
    Threshold,
    /// Full photon-number resolution per (rail, label) cell.
    Pnr,
}

/// How output rails are assigned when reading a run's heralds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HeraldAssignment {
    /// The canonical kept pair is the only output; every other final rail is
    /// detected.
    Fixed,
    /// Each candidate output pair (the canonical one plus every splitter
    /// output pair that survives to the final rails) is swept in turn, with
    /// the remaining rails detected; reports carry the per-pair slices and
    /// their sums.
    Flexible,
}

/// Full description of one protocol run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    pub dim: u8,
    pub variant: InitialStateVariant,
    pub ancilla: AncillaBasis,
    pub ancilla_phase: Phase,
    pub detector: DetectorModel,
    pub heralds: HeraldAssignment,
}

impl ProtocolConfig {
    /// The default configuration for a dimension: uniform sources for 4, 5
    /// and 6, the symmetric hybrid source for 3; plain ancilla at phase zero;
    /// threshold detectors; fixed heralds.
    ///
    /// # Errors
    ///
    /// [`Error::InvalidConfig`] for dimensions outside 3..=6.
    pub fn new(dim: u8) -> Result<Self> {
        let variant = match dim {
            3 => InitialStateVariant::HybridSymmetric,
            4..=6 => InitialStateVariant::Uniform,
            _ => {
                return Err(Error::InvalidConfig(format!(
                    "dimension {dim} is not supported (3..=6)"
                )))
            }
        };
        Ok(ProtocolConfig {
            dim,
            variant,
            ancilla: AncillaBasis::Plain,
            ancilla_phase: Phase::zero(),
            detector: DetectorModel::Threshold,
            heralds: HeraldAssignment::Fixed,
        })
    }

    /// Checks the cross-field constraints.
    ///
    /// # Errors
    ///
    /// [`Error::InvalidConfig`] naming the first violated constraint:
    /// dimension in 3..=6; hybrid sources exactly for dimension 3; non-plain
    /// ancillas only for dimension 4; a nonzero ancilla phase only for the
    /// dimension-4 plain-ancilla protocol.
    pub fn validate(&self) -> Result<()> {
        if !(3..=6).contains(&self.dim) {
            return Err(Error::InvalidConfig(format!(
                "dimension {} is not supported (3..=6)",
                self.dim
            )));
        }
        let hybrid = matches!(
            self.variant,
            InitialStateVariant::HybridSymmetric | InitialStateVariant::HybridDiagonal
        );
        if hybrid != (self.dim == 3) {
            return Err(Error::InvalidConfig(format!(
                "source variant {:?} is not defined for dimension {}",
                self.variant, self.dim
            )));
        }
        if self.ancilla != AncillaBasis::Plain && self.dim != 4 {
            return Err(Error::InvalidConfig(format!(
                "ancilla basis {:?} is only defined for dimension 4",
                self.ancilla
            )));
        }
        if !self.ancilla_phase.is_zero()
            && (self.dim != 4 || self.ancilla != AncillaBasis::Plain)
        {
            return Err(Error::InvalidConfig(
                "a nonzero ancilla phase requires the dimension-4 plain ancilla".into(),
            ));
        }
        Ok(())
    }

    /// Largest internal label the run can produce (4 below dimension 5,
    /// otherwise 6; the hybrid sources and the ancillas reach past the
    /// source dimension).
    pub fn label_count(&self) -> u8 {
        if self.dim <= 4 {
            4
        } else {
            6
        }
    }

    /// The kept rails carrying the heralded state, as (first, second).
    pub fn kept_pair(&self) -> (Mode, Mode) {
        (Mode::new("a"), Mode::new("d"))
    }

    /// The interferometer for this dimension.
    pub fn circuit(&self) -> Result<Circuit> {
        self.validate()?;
        build_circuit(self.dim)
    }

    /// Source pairs and ancillas on the circuit's input rails.
    pub fn input_state<S: Scalar>(&self) -> Result<PureState<S>> {
        self.validate()?;
        let pair1 = entangled_pair::<S>(self.dim, self.variant, "a", "b")?;
        let pair2 = entangled_pair::<S>(self.dim, self.variant, "c", "d")?;
        pair1.tensor(&pair2)?.tensor(&ancilla_state::<S>(self)?)
    }

    /// The state the successful heralds project the kept rails onto,
    /// unnormalized (its norm² is 1 only when 1/√d is exactly available).
    pub fn target<S: Scalar>(&self) -> Result<PureState<S>> {
        self.target_on(&self.kept_pair())
    }

    /// The same target transplanted onto an arbitrary rail pair, for
    /// flexible output-mode assignment.
    pub fn target_on<S: Scalar>(&self, pair: &(Mode, Mode)) -> Result<PureState<S>> {
        self.validate()?;
        let (m1, m2) = (pair.0.clone(), pair.1.clone());
        match (self.dim, self.variant, self.ancilla) {
            (4, _, AncillaBasis::Plain | AncillaBasis::Symmetric) => {
                // (ψ⁻_{1,2} + e^(-iφ)·ψ⁻_{3,4})/√2.
                let conj_phase = S::phase(&self.ancilla_phase.negated())?;
                let low = bell_singlet::<S>(&m1, &m2, 1, 2)?;
                let high = bell_singlet::<S>(&m1, &m2, 3, 4)?.scale(&conj_phase);
                Ok(low.add(&high)?.scale(&S::inv_sqrt2()))
            }
            (4, _, AncillaBasis::CrossPaired) => {
                let low = bell_singlet::<S>(&m1, &m2, 1, 4)?;
                let high = bell_singlet::<S>(&m1, &m2, 2, 3)?;
                Ok(low.add(&high)?.scale(&S::inv_sqrt2()))
            }
            (3, InitialStateVariant::HybridSymmetric, _) => {
                // (|1,2⟩ - |2,1⟩ + |3,4⟩)/√3, kept unnormalized.
                labeled_state::<S>(&m1, &m2, &[(1, 2, 0), (2, 1, 2), (3, 4, 0)])
            }
            (3, InitialStateVariant::HybridDiagonal, _) => {
                // (|1,2⟩ - |2,1⟩ - |3,4⟩)/√3, kept unnormalized.
                labeled_state::<S>(&m1, &m2, &[(1, 2, 0), (2, 1, 2), (3, 4, 2)])
            }
            (5, _, _) => labeled_state::<S>(&m1, &m2, FIVE_DIM_TARGET),
            (6, _, _) => labeled_state::<S>(&m1, &m2, SIX_DIM_TARGET),
            _ => Err(Error::InvalidConfig(format!(
                "no heralded target for dimension {} with {:?}",
                self.dim, self.variant
            ))),
        }
    }
}

/// Heralded-state table for the two-ancilla cascade, as
/// (label on a, label on d, quarter-turn phase) rows. The relative phases
/// come from the crossing pattern of the second splitter layer and are pinned
/// by the end-to-end fidelity checks.
const SIX_DIM_TARGET: &[(u8, u8, u8)] = &[
    (1, 2, 0),
    (2, 1, 2),
    (3, 4, 0),
    (4, 3, 2),
    (5, 6, 0),
    (6, 5, 2),
];

/// Five-dimensional runs use the same cascade with source labels 1..=5; the
/// |6⟩ source component is absent, which turns the third block diagonal.
/// This is a reference state only: with the label-restricted sources the
/// full-coincidence patterns can populate labels 5 and 6 on the kept rails
/// only through the second ancilla, so no coincidence event heralds it and
/// five-dimensional reports show zero successes.
const FIVE_DIM_TARGET: &[(u8, u8, u8)] = &[
    (1, 2, 0),
    (2, 1, 2),
    (3, 4, 0),
    (4, 3, 2),
    (5, 5, 0),
];

/// Builds Σ e^(i·q·π/2)|k⟩_{m1}|j⟩_{m2} from (k, j, q) rows, amplitude 1 per
/// row, monomial convention.
fn labeled_state<S: Scalar>(
    m1: &Mode,
    m2: &Mode,
    rows: &[(u8, u8, u8)],
) -> Result<PureState<S>> {
    let mut terms = Vec::with_capacity(rows.len());
    for &(k, j, quarter) in rows {
        let occ = OccupationVector::from_counts([
            (ModeCell::new(m1.clone(), k), 1),
            (ModeCell::new(m2.clone(), j), 1),
        ]);
        terms.push((occ, S::phase(&Phase::Quarter(quarter))?));
    }
    PureState::from_terms(Convention::Monomial, terms)
}

/// The two-photon singlet (|k⟩_{m1}|j⟩_{m2} - |j⟩_{m1}|k⟩_{m2})/√2 in the
/// monomial convention.
///
/// # Errors
///
/// [`Error::EqualSingletLabels`] when k = j (the antisymmetric combination
/// vanishes).
pub fn bell_singlet<S: Scalar>(m1: &Mode, m2: &Mode, k: u8, j: u8) -> Result<PureState<S>> {
    if k == j {
        return Err(Error::EqualSingletLabels(k));
    }
    let plus = OccupationVector::from_counts([
        (ModeCell::new(m1.clone(), k), 1),
        (ModeCell::new(m2.clone(), j), 1),
    ]);
    let minus = OccupationVector::from_counts([
        (ModeCell::new(m1.clone(), j), 1),
        (ModeCell::new(m2.clone(), k), 1),
    ]);
    let state = PureState::from_terms(
        Convention::Monomial,
        [
            (plus, S::inv_sqrt2()),
            (minus, S::inv_sqrt2().neg()),
        ],
    )?;
    Ok(state)
}

/// One source pair on rails (m1, m2).
///
/// Normalized exactly when 1/√d lives in the exact ring (d = 4); otherwise
/// the amplitudes are left at 1 and downstream probabilities divide by the
/// input norm², which keeps every reported number exact.
pub fn entangled_pair<S: Scalar>(
    dim: u8,
    variant: InitialStateVariant,
    m1: impl Into<Mode>,
    m2: impl Into<Mode>,
) -> Result<PureState<S>> {
    let (m1, m2) = (m1.into(), m2.into());
    match (dim, variant) {
        (4, InitialStateVariant::Uniform) => {
            let half = S::inv_sqrt2().mul(&S::inv_sqrt2());
            let state = labeled_state::<S>(&m1, &m2, &[(1, 1, 0), (2, 2, 0), (3, 3, 0), (4, 4, 0)])?;
            Ok(state.scale(&half))
        }
        (3..=6, InitialStateVariant::Uniform) => {
            let rows: Vec<(u8, u8, u8)> = (1..=dim).map(|k| (k, k, 0)).collect();
            labeled_state::<S>(&m1, &m2, &rows)
        }
        (3, InitialStateVariant::HybridSymmetric) => {
            labeled_state::<S>(&m1, &m2, &[(1, 2, 0), (2, 1, 0), (3, 4, 0)])
        }
        (3, InitialStateVariant::HybridDiagonal) => {
            labeled_state::<S>(&m1, &m2, &[(1, 1, 0), (2, 2, 0), (3, 4, 0)])
        }
        _ => Err(Error::InvalidConfig(format!(
            "source variant {variant:?} is not defined for dimension {dim}"
        ))),
    }
}

/// The ancilla resource on its canonical rails: one two-photon state on
/// (e, f) for dimensions 3 and 4, the product of two on (e1, f1) and
/// (e2, f2) for dimensions 5 and 6. Always exactly normalized.
pub fn ancilla_state<S: Scalar>(config: &ProtocolConfig) -> Result<PureState<S>> {
    config.validate()?;
    if config.dim >= 5 {
        let first = two_photon_plus::<S>("e1", "f1", (1, 2), (3, 4), &Phase::zero())?;
        let second = two_photon_plus::<S>("e2", "f2", (5, 6), (3, 4), &Phase::zero())?;
        return first.tensor(&second);
    }
    match config.ancilla {
        AncillaBasis::Plain => {
            two_photon_plus::<S>("e", "f", (1, 2), (3, 4), &config.ancilla_phase)
        }
        AncillaBasis::Symmetric => {
            let quarter = S::inv_sqrt2().mul(&S::inv_sqrt2());
            let state = labeled_state::<S>(
                &Mode::new("e"),
                &Mode::new("f"),
                &[(1, 2, 0), (2, 1, 0), (3, 4, 0), (4, 3, 0)],
            )?;
            Ok(state.scale(&quarter))
        }
        AncillaBasis::CrossPaired => {
            two_photon_plus::<S>("e", "f", (1, 4), (2, 3), &Phase::zero())
        }
    }
}

/// (|k1,j1⟩ + e^(iφ)|k2,j2⟩)/√2 on two rails.
fn two_photon_plus<S: Scalar>(
    m1: &str,
    m2: &str,
    first: (u8, u8),
    second: (u8, u8),
    phase: &Phase,
) -> Result<PureState<S>> {
    let (m1, m2) = (Mode::new(m1), Mode::new(m2));
    let low = labeled_state::<S>(&m1, &m2, &[(first.0, first.1, 0)])?;
    let high = labeled_state::<S>(&m1, &m2, &[(second.0, second.1, 0)])?
        .scale(&S::phase(phase)?);
    Ok(low.add(&high)?.scale(&S::inv_sqrt2()))
}

/// The splitter cascade for a dimension: rails (b, c) interfere first, then
/// each output meets one ancilla rail per layer. Kept rails are always
/// (a, d); detected rails are ordered splitter-side first.
///
/// # Errors
///
/// [`Error::InvalidConfig`] for dimensions outside 3..=6.
pub fn build_circuit(dim: u8) -> Result<Circuit> {
    let modes = |names: &[&str]| -> Vec<Mode> { names.iter().map(Mode::new).collect() };
    match dim {
        3 | 4 => Circuit::new(
            modes(&["a", "b", "c", "d", "e", "f"]),
            vec![
                BeamSplitter::new("b", "c", "b'", "c'")?,
                BeamSplitter::new("b'", "e", "b''", "e'")?,
                BeamSplitter::new("c'", "f", "c''", "f'")?,
            ],
            modes(&["b''", "e'", "f'", "c''"]),
            modes(&["a", "d"]),
        ),
        5 | 6 => Circuit::new(
            modes(&["a", "b", "c", "d", "e1", "f1", "e2", "f2"]),
            vec![
                BeamSplitter::new("b", "c", "b'", "c'")?,
                BeamSplitter::new("b'", "e1", "b''", "e1'")?,
                BeamSplitter::new("c'", "f1", "c''", "f1'")?,
                BeamSplitter::new("b''", "e2", "b'''", "e2'")?,
                BeamSplitter::new("c''", "f2", "c'''", "f2'")?,
            ],
            modes(&["b'''", "e1'", "e2'", "f1'", "f2'", "c'''"]),
            modes(&["a", "d"]),
        ),
        _ => Err(Error::InvalidConfig(format!(
            "dimension {dim} is not supported (3..=6)"
        ))),
    }
}

/// Time-bin half of the hyperentangled label reading.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeBin {
    Early,
    Late,
}

/// Polarization half of the hyperentangled label reading.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarization {
    H,
    V,
}

/// Packs (time bin, polarization) into the internal label 1..=4:
/// H(te) → 1, V(te) → 2, H(tl) → 3, V(tl) → 4.
pub fn hyper_label(bin: TimeBin, pol: Polarization) -> u8 {
    let bin_part = match bin {
        TimeBin::Early => 0,
        TimeBin::Late => 2,
    };
    let pol_part = match pol {
        Polarization::H => 1,
        Polarization::V => 2,
    };
    bin_part + pol_part
}

/// Inverse of [`hyper_label`].
///
/// # Errors
///
/// [`Error::HyperLabelOutOfRange`] outside 1..=4.
pub fn hyper_unlabel(label: u8) -> Result<(TimeBin, Polarization)> {
    let bin = match label {
        1 | 2 => TimeBin::Early,
        3 | 4 => TimeBin::Late,
        _ => return Err(Error::HyperLabelOutOfRange(label)),
    };
    let pol = if label % 2 == 1 { Polarization::H } else { Polarization::V };
    Ok((bin, pol))
}

/// Renders a two-rail, one-photon-per-rail state in hyperentangled notation,
/// e.g. "(|H(te),V(te)⟩-|V(te),H(te)⟩)/√2".
///
/// Amplitudes must all share one common value up to sign; the rendering shows
/// the normalized ray (overall scale and global phase drop out) with the
/// divisor √(term count).
///
/// # Errors
///
/// [`Error::HyperLabelOutOfRange`] for labels outside 1..=4 and
/// [`Error::NotRepresentable`] when the state is not of the renderable shape.
pub fn hyper_render(state: &PureState<crate::amplitude::Amplitude>) -> Result<String> {
    render_signed_kets(state, &mut |label| {
        let (bin, pol) = hyper_unlabel(label)?;
        let pol_token = match pol {
            Polarization::H => 'H',
            Polarization::V => 'V',
        };
        let bin_token = match bin {
            TimeBin::Early => "te",
            TimeBin::Late => "tl",
        };
        Ok(format!("{pol_token}({bin_token})"))
    })
}

/// Renders a two-rail, one-photon-per-rail state with numeric labels, e.g.
/// "(|1,2⟩-|2,1⟩)/√2"; same normalized-ray convention as [`hyper_render`].
///
/// # Errors
///
/// [`Error::NotRepresentable`] when the state is not of the renderable shape.
pub fn numeric_render(state: &PureState<crate::amplitude::Amplitude>) -> Result<String> {
    render_signed_kets(state, &mut |label| Ok(label.to_string()))
}

fn render_signed_kets(
    state: &PureState<crate::amplitude::Amplitude>,
    render_label: &mut dyn FnMut(u8) -> Result<String>,
) -> Result<String> {
    use crate::amplitude::Amplitude;
    if state.is_zero() {
        return Err(Error::ZeroState);
    }
    let mut rendered = String::from("(");
    let mut common: Option<Amplitude> = None;
    let mut count = 0usize;
    for (index, (occ, amp)) in state.terms().enumerate() {
        if !occ.one_photon_per_mode() || occ.cells().len() != 2 {
            return Err(Error::NotRepresentable(
                "ket rendering needs one photon in each of two rails".into(),
            ));
        }
        // Anchoring on the first amplitude drops any global phase: the first
        // ket always renders unsigned and later ones relative to it.
        let magnitude = common.get_or_insert_with(|| amp.clone());
        let sign = if amp == &*magnitude {
            if index == 0 { "" } else { "+" }
        } else if amp == &magnitude.neg() {
            "-"
        } else {
            return Err(Error::NotRepresentable(
                "ket rendering needs one common amplitude magnitude".into(),
            ));
        };
        rendered.push_str(sign);
        rendered.push('|');
        for (cell_index, (cell, _)) in occ.cells().iter().enumerate() {
            if cell_index > 0 {
                rendered.push(',');
            }
            rendered.push_str(&render_label(cell.internal)?);
        }
        rendered.push('⟩');
        count += 1;
    }
    rendered.push(')');
    rendered.push('/');
    rendered.push_str(&root_string(count as u64));
    Ok(rendered)
}

/// Renders √n in lowest surd form: "2" for n=4, "√2" for n=2, "2√2" for n=8.
fn root_string(n: u64) -> String {
    let mut square = 1u64;
    for s in 1..=n.isqrt() {
        if n % (s * s) == 0 {
            square = s;
        }
    }
    let rest = n / (square * square);
    match (square, rest) {
        (s, 1) => format!("{s}"),
        (1, r) => format!("√{r}"),
        (s, r) => format!("{s}√{r}"),
    }
}
