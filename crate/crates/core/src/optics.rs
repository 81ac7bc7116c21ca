//! Linear-optical elements and circuits.
//!
//! The only element is the balanced beam splitter. On creation operators it
//! acts internal-label-blind:
//!
//! - photon entering `in1` → (1/√2)·(out1 + i·out2)
//! - photon entering `in2` → (1/√2)·(out2 + i·out1)
//!
//! Output labels are always fresh, so spatial relabeling (b → b') is part of
//! the element rather than a separate step. Substitution happens on monomial
//! coefficients, where an n-photon cell expands by the binomial theorem and
//! bunching interference (the Hong-Ou-Mandel null) falls out as exact
//! cancellation of monomial coefficients.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{Convention, Mode, ModeCell, OccupationVector, PureState};
use crate::scalar::Scalar;

/// Balanced (50:50) beam splitter with fresh output labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BeamSplitterWire", into = "BeamSplitterWire")]
pub struct BeamSplitter {
    in1: Mode,
    in2: Mode,
    out1: Mode,
    out2: Mode,
}

#[derive(Serialize, Deserialize)]
struct BeamSplitterWire {
    in1: Mode,
    in2: Mode,
    out1: Mode,
    out2: Mode,
}

impl BeamSplitter {
    /// # Errors
    ///
    /// Rejects equal input labels, equal output labels, and an output label
    /// reusing one of this element's input labels.
    pub fn new(
        in1: impl Into<Mode>,
        in2: impl Into<Mode>,
        out1: impl Into<Mode>,
        out2: impl Into<Mode>,
    ) -> Result<Self> {
        let (in1, in2, out1, out2) = (in1.into(), in2.into(), out1.into(), out2.into());
        if in1 == in2 {
            return Err(Error::InvalidCircuit(format!(
                "beam splitter inputs must differ, got {in1} twice"
            )));
        }
        if out1 == out2 {
            return Err(Error::InvalidCircuit(format!(
                "beam splitter outputs must differ, got {out1} twice"
            )));
        }
        for out in [&out1, &out2] {
            if out == &in1 || out == &in2 {
                return Err(Error::InvalidCircuit(format!(
                    "beam splitter output {out} reuses an input label"
                )));
            }
        }
        Ok(BeamSplitter { in1, in2, out1, out2 })
    }

    pub fn in1(&self) -> &Mode {
        &self.in1
    }

    pub fn in2(&self) -> &Mode {
        &self.in2
    }

    pub fn out1(&self) -> &Mode {
        &self.out1
    }

    pub fn out2(&self) -> &Mode {
        &self.out2
    }
}

impl TryFrom<BeamSplitterWire> for BeamSplitter {
    type Error = Error;

    fn try_from(wire: BeamSplitterWire) -> Result<Self> {
        BeamSplitter::new(wire.in1, wire.in2, wire.out1, wire.out2)
    }
}

impl From<BeamSplitter> for BeamSplitterWire {
    fn from(bs: BeamSplitter) -> Self {
        BeamSplitterWire { in1: bs.in1, in2: bs.in2, out1: bs.out1, out2: bs.out2 }
    }
}

/// One output arm of the per-cell binomial expansion: put `count` photons in
/// `cell` and multiply the coefficient by `coeff`.
struct ArmChoice<S> {
    cell: ModeCell,
    count: u8,
    coeff: S,
}

/// Applies a beam splitter to a monomial-convention state.
///
/// Spatial modes other than the two inputs pass through as spectators; the
/// two input rails may be empty (the element then acts as the identity on
/// such terms). Output modes must not be occupied by spectator photons.
///
/// # Errors
///
/// Returns [`Error::ConventionMismatch`] for Fock-convention input (the
/// substitution rule is only linear on monomial coefficients) and
/// [`Error::InvalidCircuit`] when a spectator photon already sits on an
/// output mode.
pub fn apply_beam_splitter<S: Scalar>(
    state: &PureState<S>,
    bs: &BeamSplitter,
) -> Result<PureState<S>> {
    if state.convention() != Convention::Monomial {
        return Err(Error::ConventionMismatch {
            expected: Convention::Monomial,
            got: state.convention(),
        });
    }
    let mut out_terms: Vec<(OccupationVector, S)> = Vec::new();
    for (occ, amp) in state.terms() {
        let mut spectators: Vec<(ModeCell, u8)> = Vec::new();
        let mut involved: Vec<(&ModeCell, u8, bool)> = Vec::new();
        for (cell, count) in occ.cells() {
            if cell.spatial == bs.in1 {
                involved.push((cell, *count, true));
            } else if cell.spatial == bs.in2 {
                involved.push((cell, *count, false));
            } else {
                if cell.spatial == bs.out1 || cell.spatial == bs.out2 {
                    return Err(Error::InvalidCircuit(format!(
                        "output mode {} is already occupied",
                        cell.spatial
                    )));
                }
                spectators.push((cell.clone(), *count));
            }
        }
        // Expand each input cell, then take the cartesian product of the
        // per-cell choices. partial: (occupation delta, coefficient).
        let mut partial: Vec<(Vec<(ModeCell, u8)>, S)> = vec![(spectators, amp.clone())];
        for (cell, count, entered_first) in involved {
            let arms = expand_cell(bs, cell, count, entered_first);
            let mut next = Vec::with_capacity(partial.len() * arms.len());
            for (cells, coeff) in &partial {
                for arm_product in &arms {
                    let mut cells = cells.clone();
                    let mut coeff = coeff.clone();
                    for arm in arm_product {
                        if arm.count > 0 {
                            cells.push((arm.cell.clone(), arm.count));
                        }
                        coeff = coeff.mul(&arm.coeff);
                    }
                    next.push((cells, coeff));
                }
            }
            partial = next;
        }
        for (cells, coeff) in partial {
            out_terms.push((OccupationVector::from_counts(cells), coeff));
        }
    }
    PureState::from_terms(Convention::Monomial, out_terms)
}

/// Binomial expansion of one n-photon input cell over the two output arms.
fn expand_cell<S: Scalar>(
    bs: &BeamSplitter,
    cell: &ModeCell,
    count: u8,
    entered_first: bool,
) -> Vec<Vec<ArmChoice<S>>> {
    // in1 → (out1 + i·out2)/√2, in2 → (out2 + i·out1)/√2: the straight arm
    // carries coefficient 1, the crossed arm carries i.
    let (straight, crossed) = if entered_first {
        (&bs.out1, &bs.out2)
    } else {
        (&bs.out2, &bs.out1)
    };
    let mut arms = Vec::with_capacity(usize::from(count) + 1);
    for straight_count in 0..=count {
        let crossed_count = count - straight_count;
        let mut coeff = S::from_int(binomial(count, straight_count) as i64);
        for _ in 0..count {
            coeff = coeff.mul(&S::inv_sqrt2());
        }
        for _ in 0..crossed_count {
            coeff = coeff.mul(&S::i());
        }
        arms.push(vec![
            ArmChoice {
                cell: ModeCell::new(straight.clone(), cell.internal),
                count: straight_count,
                coeff,
            },
            ArmChoice {
                cell: ModeCell::new(crossed.clone(), cell.internal),
                count: crossed_count,
                coeff: S::one(),
            },
        ]);
    }
    arms
}

fn binomial(n: u8, k: u8) -> u64 {
    let mut value = 1u64;
    for step in 0..u64::from(k) {
        value = value * (u64::from(n) - step) / (step + 1);
    }
    value
}

/// A feed-forward cascade of beam splitters with a detected/kept split of the
/// final rails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CircuitWire", into = "CircuitWire")]
pub struct Circuit {
    inputs: Vec<Mode>,
    elements: Vec<BeamSplitter>,
    detected: Vec<Mode>,
    kept: Vec<Mode>,
}

#[derive(Serialize, Deserialize)]
struct CircuitWire {
    inputs: Vec<Mode>,
    elements: Vec<BeamSplitter>,
    detected: Vec<Mode>,
    kept: Vec<Mode>,
}

impl Circuit {
    /// Validates feed-forward structure:
    ///
    /// - input labels are distinct;
    /// - every element consumes two currently-live rails and produces two
    ///   globally fresh ones;
    /// - `detected` and `kept` are disjoint and together are exactly the
    ///   rails live after the last element.
    ///
    /// # Errors
    ///
    /// [`Error::InvalidCircuit`] describing the first violation found.
    pub fn new(
        inputs: Vec<Mode>,
        elements: Vec<BeamSplitter>,
        detected: Vec<Mode>,
        kept: Vec<Mode>,
    ) -> Result<Self> {
        let mut live: BTreeSet<Mode> = BTreeSet::new();
        let mut used: BTreeSet<Mode> = BTreeSet::new();
        for mode in &inputs {
            if !used.insert(mode.clone()) {
                return Err(Error::InvalidCircuit(format!(
                    "duplicate input mode {mode}"
                )));
            }
            live.insert(mode.clone());
        }
        for bs in &elements {
            for input in [bs.in1(), bs.in2()] {
                if !live.remove(input) {
                    return Err(Error::InvalidCircuit(format!(
                        "element input {input} is not a live rail"
                    )));
                }
            }
            for output in [bs.out1(), bs.out2()] {
                if !used.insert(output.clone()) {
                    return Err(Error::InvalidCircuit(format!(
                        "element output {output} reuses an earlier label"
                    )));
                }
                live.insert(output.clone());
            }
        }
        let mut assigned: BTreeSet<Mode> = BTreeSet::new();
        for mode in detected.iter().chain(kept.iter()) {
            if !live.contains(mode) {
                return Err(Error::InvalidCircuit(format!(
                    "terminal mode {mode} is not a final rail"
                )));
            }
            if !assigned.insert(mode.clone()) {
                return Err(Error::InvalidCircuit(format!(
                    "terminal mode {mode} listed twice"
                )));
            }
        }
        if assigned != live {
            let missing: Vec<String> = live
                .difference(&assigned)
                .map(|m| m.as_str().to_owned())
                .collect();
            return Err(Error::InvalidCircuit(format!(
                "final rails not assigned to detected or kept: {}",
                missing.join(", ")
            )));
        }
        Ok(Circuit { inputs, elements, detected, kept })
    }

    pub fn inputs(&self) -> &[Mode] {
        &self.inputs
    }

    pub fn elements(&self) -> &[BeamSplitter] {
        &self.elements
    }

    /// Final rails feeding detectors, in declaration order.
    pub fn detected(&self) -> &[Mode] {
        &self.detected
    }

    /// Final rails carried forward unmeasured, in declaration order.
    pub fn kept(&self) -> &[Mode] {
        &self.kept
    }

    pub fn detected_set(&self) -> BTreeSet<Mode> {
        self.detected.iter().cloned().collect()
    }

    pub fn kept_set(&self) -> BTreeSet<Mode> {
        self.kept.iter().cloned().collect()
    }

    /// Output pairs of splitters whose outputs are both final rails, in
    /// element order.
    ///
    /// These are the rail pairs that can replace the canonical kept pair
    /// under flexible output-mode assignment: the state heralded on them is
    /// produced by the last interference each pair undergoes.
    pub fn terminal_element_pairs(&self) -> Vec<(Mode, Mode)> {
        let terminal: BTreeSet<&Mode> = self.detected.iter().chain(self.kept.iter()).collect();
        self.elements
            .iter()
            .filter(|bs| terminal.contains(bs.out1()) && terminal.contains(bs.out2()))
            .map(|bs| (bs.out1().clone(), bs.out2().clone()))
            .collect()
    }
}

impl TryFrom<CircuitWire> for Circuit {
    type Error = Error;

    fn try_from(wire: CircuitWire) -> Result<Self> {
        Circuit::new(wire.inputs, wire.elements, wire.detected, wire.kept)
    }
}

impl From<Circuit> for CircuitWire {
    fn from(c: Circuit) -> Self {
        CircuitWire {
            inputs: c.inputs,
            elements: c.elements,
            detected: c.detected,
            kept: c.kept,
        }
    }
}

/// Pushes a monomial-convention state through every element in order.
///
/// # Errors
///
/// [`Error::UnknownMode`] when the state occupies a spatial mode the circuit
/// does not declare as an input, plus any per-element failure from
/// [`apply_beam_splitter`].
pub fn apply_circuit<S: Scalar>(state: &PureState<S>, circuit: &Circuit) -> Result<PureState<S>> {
    let declared: BTreeSet<&Mode> = circuit.inputs.iter().collect();
    for mode in state.spatial_support() {
        if !declared.contains(&mode) {
            return Err(Error::UnknownMode(mode.as_str().to_owned()));
        }
    }
    let mut current = state.clone();
    for bs in &circuit.elements {
        current = apply_beam_splitter(&current, bs)?;
    }
    Ok(current)
}
