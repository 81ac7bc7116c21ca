//! Detection, herald classification and exact probability bookkeeping.
//!
//! The post-circuit state is resolved against label-sensitive detectors on
//! the detected rails. A photon-number-resolving readout distinguishes every
//! occupation of the detected cells; a threshold readout only reports which
//! cells clicked, so several number signatures merge into one pattern and the
//! kept rails are left in a mixture of the per-signature components.
//!
//! All probabilities are conditional on nothing: they divide by the input
//! squared norm, so unnormalized integer-amplitude sources still produce
//! exact probabilities, and the probabilities over all patterns sum to one.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::amplitude::Rational;
use crate::error::{Error, Result};
use crate::fock::{Convention, Mode, ModeCell, OccupationVector, PureState};
use crate::protocol::{DetectorModel, ProtocolConfig};
use crate::scalar::{ProbValue, Scalar};

/// One detector readout: occupied (rail, label) cells with either exact
/// counts (number-resolving) or clicks (threshold, counts clamped to 1).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DetectionPattern {
    occupation: OccupationVector,
    model: DetectorModel,
}

impl DetectionPattern {
    /// Wraps a detected-cell occupation; threshold patterns forget counts.
    pub fn from_occupation(occupation: OccupationVector, model: DetectorModel) -> Self {
        let occupation = match model {
            DetectorModel::Pnr => occupation,
            DetectorModel::Threshold => OccupationVector::from_counts(
                occupation.cells().iter().map(|(cell, _)| (cell.clone(), 1)),
            ),
        };
        DetectionPattern { occupation, model }
    }

    pub fn occupation(&self) -> &OccupationVector {
        &self.occupation
    }

    pub fn model(&self) -> DetectorModel {
        self.model
    }

    /// True when every rail in `rails` saw at least one photon.
    pub fn covers(&self, rails: &BTreeSet<Mode>) -> bool {
        rails.iter().all(|rail| self.occupation.photons_in_mode(rail) > 0)
    }

    /// Parses "rail:label,rail:label,..."; repeated entries accumulate
    /// (threshold patterns clamp back to clicks).
    ///
    /// # Errors
    ///
    /// [`Error::Parse`] describing the offending fragment.
    pub fn parse(text: &str, model: DetectorModel) -> Result<Self> {
        let mut cells = Vec::new();
        for fragment in text.split(',') {
            let fragment = fragment.trim();
            if fragment.is_empty() {
                return Err(Error::Parse(format!(
                    "empty detector entry in pattern {text:?}"
                )));
            }
            let Some((rail, label)) = fragment.rsplit_once(':') else {
                return Err(Error::Parse(format!(
                    "detector entry {fragment:?} is not rail:label"
                )));
            };
            let label: u8 = label.trim().parse().map_err(|_| {
                Error::Parse(format!("label {label:?} is not a small integer"))
            })?;
            if !(1..=6).contains(&label) {
                return Err(Error::Parse(format!("label {label} is outside 1..=6")));
            }
            let rail = rail.trim();
            if rail.is_empty() {
                return Err(Error::Parse(format!(
                    "detector entry {fragment:?} has an empty rail"
                )));
            }
            cells.push((ModeCell::new(rail, label), 1));
        }
        Ok(Self::from_occupation(OccupationVector::from_counts(cells), model))
    }
}

impl fmt::Display for DetectionPattern {
    /// Sorted "rail:label" entries, one per photon (threshold: per click).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (cell, count) in self.occupation.cells() {
            for _ in 0..*count {
                if !first {
                    write!(f, ",")?;
                }
                write!(f, "{cell}")?;
                first = false;
            }
        }
        Ok(())
    }
}

impl Serialize for DetectionPattern {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// One detection pattern with its exact probability and the (unnormalized)
/// kept-rail components behind it.
#[derive(Clone, Debug)]
pub struct Outcome<S: Scalar> {
    pub pattern: DetectionPattern,
    /// Probability of this pattern, normalized by the input squared norm.
    pub probability: S::Prob,
    /// Per-number-signature kept components. Number-resolving readouts have
    /// exactly one branch; threshold readouts one per merged signature. The
    /// branch states are monomial, unnormalized, and carry only kept cells.
    pub branches: Vec<(OccupationVector, PureState<S>)>,
}

/// Resolves a monomial post-circuit state on the `detected` rails.
///
/// Patterns come back sorted, with exact probabilities that sum to 1.
///
/// # Errors
///
/// [`Error::EmptyDetectedSet`] when no rail is detected,
/// [`Error::ConventionMismatch`] for Fock-convention input (probability
/// weights assume monomial coefficients), and [`Error::ZeroState`] for the
/// zero state.
pub fn enumerate_outcomes<S: Scalar>(
    state: &PureState<S>,
    detected: &BTreeSet<Mode>,
    model: DetectorModel,
) -> Result<Vec<Outcome<S>>> {
    if detected.is_empty() {
        return Err(Error::EmptyDetectedSet);
    }
    if state.convention() != Convention::Monomial {
        return Err(Error::ConventionMismatch {
            expected: Convention::Monomial,
            got: state.convention(),
        });
    }
    let total = state.norm_squared();
    if total.is_zero() {
        return Err(Error::ZeroState);
    }

    // Group terms by their detected-cell signature.
    let mut groups: BTreeMap<OccupationVector, Vec<(OccupationVector, S)>> = BTreeMap::new();
    for (occ, amp) in state.terms() {
        let (signature, kept) = occ.split_by_spatial(detected);
        groups.entry(signature).or_default().push((kept, amp.clone()));
    }

    // Threshold readouts merge signatures that produce the same click set.
    let mut merged: BTreeMap<DetectionPattern, Vec<(OccupationVector, PureState<S>)>> =
        BTreeMap::new();
    for (signature, kept_terms) in groups {
        let kept_state = PureState::from_terms(Convention::Monomial, kept_terms)?;
        if kept_state.is_zero() {
            continue;
        }
        let pattern = DetectionPattern::from_occupation(signature.clone(), model);
        merged.entry(pattern).or_default().push((signature, kept_state));
    }

    let mut outcomes = Vec::with_capacity(merged.len());
    for (pattern, branches) in merged {
        let mut probability = S::Prob::zero();
        for (signature, kept_state) in &branches {
            probability = probability
                .add(&kept_state.norm_squared().mul_nat(signature.factorial_weight()));
        }
        probability = probability.div(&total);
        outcomes.push(Outcome { pattern, probability, branches });
    }
    Ok(outcomes)
}

/// What a detection pattern heralds on the kept rails.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum HeraldClass {
    /// The kept coincidence component is one pure maximally entangled state
    /// of the given Schmidt rank.
    Swap { dim: u8 },
    /// Anything else: no kept coincidence, a non-maximally-entangled
    /// component, or an incoherent mixture across merged signatures.
    Other,
}

impl HeraldClass {
    pub fn dim(&self) -> Option<u8> {
        match self {
            HeraldClass::Swap { dim } => Some(*dim),
            HeraldClass::Other => None,
        }
    }
}

impl fmt::Display for HeraldClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeraldClass::Swap { dim } => write!(f, "SWAP_{dim}D"),
            HeraldClass::Other => write!(f, "OTHER"),
        }
    }
}

impl Serialize for HeraldClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for HeraldClass {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        if text == "OTHER" {
            return Ok(HeraldClass::Other);
        }
        if let Some(dim) = text
            .strip_prefix("SWAP_")
            .and_then(|rest| rest.strip_suffix('D'))
            .and_then(|digits| digits.parse::<u8>().ok())
        {
            return Ok(HeraldClass::Swap { dim });
        }
        Err(D::Error::custom(format!("unknown herald class {text:?}")))
    }
}

/// Classification of one outcome against a protocol's target.
#[derive(Clone, Debug)]
pub struct Classified<S: Scalar> {
    pub class: HeraldClass,
    /// Fidelity of the kept coincidence mixture to the protocol target;
    /// zero when there is no coincidence component.
    pub fidelity: S::Prob,
    /// Fraction of this pattern's probability whose kept rails hold exactly
    /// one photon each.
    pub coincident_fraction: S::Prob,
    /// The pure coincidence state when all branches agree on one ray.
    pub herald: Option<PureState<S>>,
}

/// Classifies an outcome's kept coincidence component on the protocol's
/// canonical kept rails.
///
/// The component (exactly one photon on each kept rail) is extracted per
/// branch; the class is `Swap {dim}` when every nonzero branch component lies
/// on one common ray and that ray is maximally entangled of Schmidt rank
/// `dim` over the internal labels. The reported fidelity is the mixture
/// fidelity to the protocol's heralded target.
pub fn classify<S: Scalar>(
    outcome: &Outcome<S>,
    config: &ProtocolConfig,
) -> Result<Classified<S>> {
    classify_on(outcome, config, &config.kept_pair())
}

/// [`classify`] against an arbitrary undetected rail pair, for flexible
/// output-mode assignment; the fidelity compares against the protocol target
/// transplanted onto that pair.
pub fn classify_on<S: Scalar>(
    outcome: &Outcome<S>,
    config: &ProtocolConfig,
    kept_pair: &(Mode, Mode),
) -> Result<Classified<S>> {
    let target = config.target_on::<S>(kept_pair)?;
    let target_norm = target.norm_squared();

    let mut coincident_weight = S::Prob::zero();
    let mut total_weight = S::Prob::zero();
    let mut overlap_sum = S::Prob::zero();
    let mut components: Vec<PureState<S>> = Vec::new();
    for (signature, kept_state) in &outcome.branches {
        let detector_weight = signature.factorial_weight();
        total_weight = total_weight.add(&kept_state.norm_squared().mul_nat(detector_weight));
        let component = coincidence_component(kept_state, kept_pair);
        if component.is_zero() {
            continue;
        }
        coincident_weight =
            coincident_weight.add(&component.norm_squared().mul_nat(detector_weight));
        let overlap = target.inner_product(&component)?.abs_squared();
        overlap_sum = overlap_sum.add(&overlap.div(&target_norm).mul_nat(detector_weight));
        components.push(component);
    }

    if components.is_empty() || total_weight.is_zero() {
        return Ok(Classified {
            class: HeraldClass::Other,
            fidelity: S::Prob::zero(),
            coincident_fraction: S::Prob::zero(),
            herald: None,
        });
    }

    let fidelity = overlap_sum.div(&coincident_weight);
    let coincident_fraction = coincident_weight.div(&total_weight);

    // The mixture is a single pure state only if all branch components are
    // pairwise proportional.
    let pure = components
        .iter()
        .skip(1)
        .try_fold(true, |acc, c| -> Result<bool> {
            Ok(acc && proportional(&components[0], c)?)
        })?;
    let class = if pure {
        match schmidt_rank_if_maximally_entangled(&components[0], kept_pair) {
            Some(dim) => HeraldClass::Swap { dim },
            None => HeraldClass::Other,
        }
    } else {
        HeraldClass::Other
    };
    let herald = pure.then(|| components.swap_remove(0));
    Ok(Classified { class, fidelity, coincident_fraction, herald })
}

/// The part of a kept-rail state with exactly one photon on each kept rail.
pub fn coincidence_component<S: Scalar>(
    state: &PureState<S>,
    kept_pair: &(Mode, Mode),
) -> PureState<S> {
    state.filter_terms(|occ| {
        occ.photons_in_mode(&kept_pair.0) == 1 && occ.photons_in_mode(&kept_pair.1) == 1
    })
}

/// Whether two nonzero states lie on the same ray, via the Cauchy-Schwarz
/// equality |⟨u|v⟩|² = ⟨u|u⟩⟨v|v⟩.
fn proportional<S: Scalar>(u: &PureState<S>, v: &PureState<S>) -> Result<bool> {
    let cross = u.inner_product(v)?.abs_squared();
    let bound = u.norm_squared().mul(&v.norm_squared());
    Ok(cross.sub(&bound).is_zero())
}

/// For a two-rail, one-photon-per-rail state, the Schmidt rank r if the
/// state is maximally entangled (all nonzero Schmidt coefficients equal),
/// else `None`.
///
/// With M the label-by-label coefficient matrix and G = M·M†, the state is
/// maximally entangled of rank r iff G is proportional to a rank-r
/// projector, which the division-free identities G²·tr G = G·tr G² and
/// (tr G)² = r·tr G² detect exactly.
fn schmidt_rank_if_maximally_entangled<S: Scalar>(
    state: &PureState<S>,
    kept_pair: &(Mode, Mode),
) -> Option<u8> {
    const N: usize = 6;
    let mut m = vec![vec![S::zero(); N]; N];
    for (occ, amp) in state.terms() {
        let mut row = None;
        let mut col = None;
        for (cell, count) in occ.cells() {
            if *count != 1 || !(1..=6).contains(&cell.internal) {
                return None;
            }
            if cell.spatial == kept_pair.0 {
                row = Some(usize::from(cell.internal) - 1);
            } else if cell.spatial == kept_pair.1 {
                col = Some(usize::from(cell.internal) - 1);
            } else {
                return None;
            }
        }
        let (row, col) = (row?, col?);
        m[row][col] = amp.clone();
    }

    let mut g = vec![vec![S::zero(); N]; N];
    for r in 0..N {
        for s in 0..N {
            let mut sum = S::zero();
            for t in 0..N {
                sum = sum.add(&m[r][t].mul(&m[s][t].conj()));
            }
            g[r][s] = sum;
        }
    }
    let mut trace = S::zero();
    for (r, grow) in g.iter().enumerate() {
        trace = trace.add(&grow[r]);
    }
    let mut g2 = vec![vec![S::zero(); N]; N];
    for r in 0..N {
        for s in 0..N {
            let mut sum = S::zero();
            for t in 0..N {
                sum = sum.add(&g[r][t].mul(&g[t][s]));
            }
            g2[r][s] = sum;
        }
    }
    let mut trace2 = S::zero();
    for (r, g2row) in g2.iter().enumerate() {
        trace2 = trace2.add(&g2row[r]);
    }
    if trace2.is_zero() {
        return None;
    }
    for r in 0..N {
        for s in 0..N {
            let lhs = g2[r][s].mul(&trace);
            let rhs = g[r][s].mul(&trace2);
            if !lhs.sub(&rhs).is_zero() {
                return None;
            }
        }
    }
    (1..=N as u8).find(|rank| {
        let lhs = trace.mul(&trace);
        let rhs = S::from_int(i64::from(*rank)).mul(&trace2);
        lhs.sub(&rhs).is_zero()
    })
}

/// Fidelity |⟨t|s⟩|² / (⟨t|t⟩·⟨s|s⟩) between two pure states; invariant
/// under scaling of either side, so unnormalized integer-amplitude states
/// compare exactly.
///
/// # Errors
///
/// [`Error::ZeroState`] when either side has no terms and
/// [`Error::ConventionMismatch`] when the conventions differ.
pub fn fidelity<S: Scalar>(state: &PureState<S>, target: &PureState<S>) -> Result<S::Prob> {
    if state.is_zero() || target.is_zero() {
        return Err(Error::ZeroState);
    }
    let overlap = target.inner_product(state)?.abs_squared();
    Ok(overlap.div(&target.norm_squared().mul(&state.norm_squared())))
}

/// Exact fidelity of an n-photon interference signal under uniform
/// single-photon transmission η: η^n.
///
/// # Errors
///
/// [`Error::EtaOutOfRange`] unless 0 ≤ η ≤ 1.
pub fn fidelity_decay(eta: &Rational, photons: u32) -> Result<Rational> {
    if eta < &Rational::zero() || eta > &Rational::one() {
        return Err(Error::EtaOutOfRange(format!("{eta}")));
    }
    Ok(eta.pow(photons))
}

/// Aggregate probabilities and pattern tallies over all outcomes of one run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Aggregates<P> {
    /// Number of coincident patterns heralding the full-dimensional target
    /// at unit fidelity with a purely coincident kept side.
    pub success_events: usize,
    /// Total probability of those patterns.
    pub success: P,
    /// Total probability of patterns where every detected rail fired.
    pub coincidence: P,
    /// success / coincidence (zero when nothing is coincident).
    pub conditional_success: P,
    /// Number of patterns whose kept coincidence component is maximally
    /// entangled in the full dimension, regardless of rail coverage or
    /// phase agreement with the target.
    pub full_dim_events: usize,
    /// Total probability of those patterns.
    pub full_dim_probability: P,
    /// Number of patterns heralding two-dimensional maximal entanglement,
    /// regardless of rail coverage.
    pub two_dim_events: usize,
    /// Total probability of those patterns.
    pub two_dim_probability: P,
    /// Number of coincident patterns heralding two-dimensional maximal
    /// entanglement.
    pub two_dim_coincidence_events: usize,
    /// Total probability of those patterns.
    pub two_dim_coincidence: P,
}

/// Computes the aggregate herald statistics of a classified run.
///
/// A pattern counts as a success when every detected rail fired and the kept
/// coincidence component matches the target at fidelity one; its credited
/// probability is the pattern probability times the kept coincident
/// fraction, so rails that can bunch (flexible output pairs) are charged
/// only for the part that actually heralds. The dimension tallies are
/// looser, counting every pattern whose kept coincidence component is
/// maximally entangled in the stated dimension; the coincidence-restricted
/// two-dimensional tally additionally requires every detected rail to fire.
pub fn aggregate<S: Scalar>(
    rows: &[(Outcome<S>, Classified<S>)],
    config: &ProtocolConfig,
    detected: &BTreeSet<Mode>,
) -> Aggregates<S::Prob> {
    let mut success_events = 0;
    let mut success = S::Prob::zero();
    let mut coincidence = S::Prob::zero();
    let mut full_dim_events = 0;
    let mut full_dim_probability = S::Prob::zero();
    let mut two_dim_events = 0;
    let mut two_dim_probability = S::Prob::zero();
    let mut two_dim_coincidence_events = 0;
    let mut two_dim_coincidence = S::Prob::zero();
    for (outcome, classified) in rows {
        if outcome.probability.is_zero() {
            continue;
        }
        let covers = outcome.pattern.covers(detected);
        if covers {
            coincidence = coincidence.add(&outcome.probability);
        }
        if classified.class == (HeraldClass::Swap { dim: config.dim }) {
            full_dim_events += 1;
            full_dim_probability = full_dim_probability.add(&outcome.probability);
            if covers && classified.fidelity.is_one() {
                success_events += 1;
                let credited =
                    outcome.probability.mul(&classified.coincident_fraction);
                success = success.add(&credited);
            }
        }
        if classified.class == (HeraldClass::Swap { dim: 2 }) {
            two_dim_events += 1;
            two_dim_probability = two_dim_probability.add(&outcome.probability);
            if covers {
                two_dim_coincidence_events += 1;
                two_dim_coincidence = two_dim_coincidence.add(&outcome.probability);
            }
        }
    }
    let conditional_success = if coincidence.is_zero() {
        S::Prob::zero()
    } else {
        success.div(&coincidence)
    };
    Aggregates {
        success_events,
        success,
        coincidence,
        conditional_success,
        full_dim_events,
        full_dim_probability,
        two_dim_events,
        two_dim_probability,
        two_dim_coincidence_events,
        two_dim_coincidence,
    }
}

/// Herald statistics of one kept rail pair inside a flexible sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlexibleSlice<P> {
    /// The rail pair treated as the output; every other final rail is read
    /// out.
    pub kept: (Mode, Mode),
    /// Aggregates of the run with this pair kept.
    pub aggregates: Aggregates<P>,
}

/// Herald statistics summed over every candidate output pair.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlexibleAggregates<P> {
    /// Success events and credited probability summed over all kept pairs.
    pub success_events: usize,
    pub success: P,
    /// Two-dimensional events summed over all kept pairs, regardless of
    /// rail coverage.
    pub two_dim_events: usize,
    /// Per-pair breakdown: the canonical kept pair first, then the
    /// alternative pairs in circuit order.
    pub slices: Vec<FlexibleSlice<P>>,
}

/// Sweeps each candidate output pair, reading out all remaining rails and
/// classifying against the target carried on that pair.
///
/// The candidates are the canonical kept pair and every splitter output
/// pair that survives to the final rails; those are the assignments under
/// which a detection pattern can herald the full-dimensional target.
/// Patterns are enumerated separately per assignment, so the summed values
/// compare event classes across assignments rather than partitioning a
/// single sample space.
///
/// # Errors
///
/// Propagates configuration, enumeration, and classification errors.
pub fn flexible_sweep<S: Scalar>(
    post: &PureState<S>,
    config: &ProtocolConfig,
) -> Result<FlexibleAggregates<S::Prob>> {
    let circuit = config.circuit()?;
    let mut rails: Vec<Mode> = circuit.detected_set().into_iter().collect();
    rails.extend(circuit.kept_set());
    let mut pairs = vec![config.kept_pair()];
    pairs.extend(circuit.terminal_element_pairs());
    pairs.dedup();

    let mut success_events = 0;
    let mut success = S::Prob::zero();
    let mut two_dim_events = 0;
    let mut slices = Vec::new();
    for pair in pairs {
        let detected: BTreeSet<Mode> = rails
            .iter()
            .filter(|rail| **rail != pair.0 && **rail != pair.1)
            .cloned()
            .collect();
        let rows = enumerate_outcomes(post, &detected, config.detector)?
            .into_iter()
            .map(|outcome| {
                let classified = classify_on(&outcome, config, &pair)?;
                Ok((outcome, classified))
            })
            .collect::<Result<Vec<_>>>()?;
        let aggregates = aggregate(&rows, config, &detected);
        success_events += aggregates.success_events;
        success = success.add(&aggregates.success);
        two_dim_events += aggregates.two_dim_events;
        slices.push(FlexibleSlice { kept: pair, aggregates });
    }
    Ok(FlexibleAggregates {
        success_events,
        success,
        two_dim_events,
        slices,
    })
}

/// Which readout and which rails a counting statement refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountConvention {
    pub detector: DetectorModel,
    /// Count signatures over all rails (kept included) instead of detected
    /// rails only.
    pub include_kept: bool,
}

/// Pattern counts of one run under one counting convention.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EventCounts {
    /// Patterns with nonzero probability.
    pub total: usize,
    /// Patterns where every counted rail fired.
    pub coincidence: usize,
    /// Distinct detected-rail patterns heralding the target at unit fidelity
    /// with a purely coincident kept side.
    pub success: usize,
}

/// Counts distinct detection events of a post-circuit state.
///
/// `include_kept` extends the signature over the kept rails, which matches
/// statements about n-photon coincidence counts across every output arm.
/// Success always counts detected-rail patterns, so it does not multiply
/// with the kept-rail label combinations when the signature is extended.
pub fn count_events<S: Scalar>(
    post: &PureState<S>,
    config: &ProtocolConfig,
    convention: CountConvention,
) -> Result<EventCounts> {
    let circuit = config.circuit()?;
    let detected = circuit.detected_set();
    let mut counted: BTreeSet<Mode> = detected.clone();
    if convention.include_kept {
        counted.extend(circuit.kept_set());
    }

    let mut success_patterns: BTreeSet<DetectionPattern> = BTreeSet::new();
    for outcome in enumerate_outcomes(post, &detected, convention.detector)? {
        let classified = classify(&outcome, config)?;
        if classified.class == (HeraldClass::Swap { dim: config.dim })
            && classified.fidelity.is_one()
            && classified.coincident_fraction.is_one()
            && outcome.pattern.covers(&detected)
        {
            success_patterns.insert(outcome.pattern);
        }
    }

    let outcomes = enumerate_outcomes(post, &counted, convention.detector)?;
    let mut counts = EventCounts {
        total: 0,
        coincidence: 0,
        success: success_patterns.len(),
    };
    for outcome in &outcomes {
        if outcome.probability.is_zero() {
            continue;
        }
        counts.total += 1;
        if outcome.pattern.covers(&counted) {
            counts.coincidence += 1;
        }
    }
    Ok(counts)
}

/// Herald statistics under both readout models for one configuration.
#[derive(Clone, Debug, Serialize)]
pub struct GainReport<P> {
    pub threshold: Aggregates<P>,
    pub pnr: Aggregates<P>,
}

/// Runs the full pipeline under threshold and number-resolving readouts and
/// reports both aggregate tables; the number-resolving readout can only
/// gain, since it refines the threshold partition.
pub fn pnr_gains<S: Scalar>(config: &ProtocolConfig) -> Result<GainReport<S::Prob>> {
    let mut tables = Vec::with_capacity(2);
    for detector in [DetectorModel::Threshold, DetectorModel::Pnr] {
        let mut run = config.clone();
        run.detector = detector;
        let circuit = run.circuit()?;
        let input = run.input_state::<S>()?;
        let post = crate::optics::apply_circuit(&input, &circuit)?;
        let detected = circuit.detected_set();
        let outcomes = enumerate_outcomes(&post, &detected, detector)?;
        let rows = outcomes
            .into_iter()
            .map(|outcome| {
                let classified = classify(&outcome, &run)?;
                Ok((outcome, classified))
            })
            .collect::<Result<Vec<_>>>()?;
        tables.push(aggregate(&rows, &run, &detected));
    }
    let pnr = tables.pop().expect("two tables");
    let threshold = tables.pop().expect("two tables");
    Ok(GainReport { threshold, pnr })
}
