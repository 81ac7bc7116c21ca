//! Multi-photon state representation and algebra.
//!
//! A photon lives in a cell (spatial mode, internal mode). States are sparse
//! superpositions over occupation vectors (photon counts per cell) and carry
//! one of two amplitude conventions:
//!
//! - `Monomial`: the coefficient of the creation-operator monomial
//!   ∏ (a†_cell)^n_cell applied to vacuum. Linear mode transformations act by
//!   plain polynomial substitution, and bunching cancellations are algebraic
//!   identities. The monomial basis vector for an occupation has squared norm
//!   ∏ n_cell!, which all quadratic forms here weight in exactly.
//! - `Fock`: the amplitude of the normalized Fock ket. Conversion multiplies
//!   by √(∏ n_cell!), which stays inside the exact ring only while every
//!   occupancy is ≤ 2; higher occupancies (they do occur in the bunched
//!   sectors of the swapping pipelines) leave conversion unrepresentable,
//!   which is why norms, inner products and probabilities are computed with
//!   monomial weights instead of converting.

use std::collections::BTreeSet;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{ProbValue, Scalar};

/// Opaque spatial-mode label ("a", "b'", "e1").
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Mode(Arc<str>);

impl Mode {
    pub fn new(name: impl AsRef<str>) -> Self {
        Mode(Arc::from(name.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Mode {
    fn from(name: &str) -> Self {
        Mode::new(name)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

/// One bosonic cell: a spatial mode crossed with an internal label.
///
/// Internal labels are 1-based protocol labels (1..=6), not Fock counts; the
/// pair keeps |2⟩ in a spatial mode distinct from a two-photon occupation.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeCell {
    pub spatial: Mode,
    pub internal: u8,
}

impl ModeCell {
    pub fn new(spatial: impl Into<Mode>, internal: u8) -> Self {
        ModeCell { spatial: spatial.into(), internal }
    }
}

impl fmt::Debug for ModeCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{})", self.spatial, self.internal)
    }
}

impl fmt::Display for ModeCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.spatial, self.internal)
    }
}

/// Photon counts per cell; sorted, sparse, zero-count-free.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct OccupationVector {
    cells: Vec<(ModeCell, u8)>,
    total: u32,
}

impl OccupationVector {
    /// The vacuum occupation.
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds from (cell, count) pairs; duplicate cells merge, zero counts drop.
    pub fn from_counts(counts: impl IntoIterator<Item = (ModeCell, u8)>) -> Self {
        let mut merged: BTreeMap<ModeCell, u32> = BTreeMap::new();
        for (cell, count) in counts {
            if count > 0 {
                *merged.entry(cell).or_insert(0) += u32::from(count);
            }
        }
        let mut total = 0u32;
        let cells = merged
            .into_iter()
            .map(|(cell, count)| {
                total += count;
                debug_assert!(count <= u32::from(u8::MAX));
                (cell, count as u8)
            })
            .collect();
        OccupationVector { cells, total }
    }

    /// A single photon in one cell.
    pub fn single(cell: ModeCell) -> Self {
        OccupationVector { cells: vec![(cell, 1)], total: 1 }
    }

    pub fn total(&self) -> u32 {
        self.total
    }

    pub fn is_vacuum(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[(ModeCell, u8)] {
        &self.cells
    }

    pub fn count(&self, cell: &ModeCell) -> u8 {
        self.cells
            .binary_search_by(|(c, _)| c.cmp(cell))
            .map(|idx| self.cells[idx].1)
            .unwrap_or(0)
    }

    /// The set of spatial modes holding at least one photon.
    pub fn spatial_support(&self) -> BTreeSet<Mode> {
        self.cells.iter().map(|(cell, _)| cell.spatial.clone()).collect()
    }

    /// Photons in one spatial mode, summed over internal labels.
    pub fn photons_in_mode(&self, mode: &Mode) -> u32 {
        self.cells
            .iter()
            .filter(|(cell, _)| &cell.spatial == mode)
            .map(|(_, count)| u32::from(*count))
            .sum()
    }

    /// Componentwise sum (for tensor products of disjoint rails).
    pub fn merge(&self, other: &Self) -> Self {
        Self::from_counts(self.cells.iter().chain(other.cells.iter()).cloned())
    }

    /// Splits into (cells on `selected` spatial modes, remaining cells).
    pub fn split_by_spatial(&self, selected: &BTreeSet<Mode>) -> (Self, Self) {
        let (inside, outside): (Vec<_>, Vec<_>) = self
            .cells
            .iter()
            .cloned()
            .partition(|(cell, _)| selected.contains(&cell.spatial));
        (Self::from_counts(inside), Self::from_counts(outside))
    }

    /// ∏ n_cell! , the squared norm of this occupation's creation monomial.
    pub fn factorial_weight(&self) -> u64 {
        self.cells
            .iter()
            .map(|(_, count)| FACTORIALS[usize::from(*count)])
            .product()
    }

    /// True when every occupied spatial mode holds exactly one photon.
    pub fn one_photon_per_mode(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.cells
            .iter()
            .all(|(cell, count)| *count == 1 && seen.insert(cell.spatial.clone()))
    }
}

const FACTORIALS: [u64; 21] = {
    let mut table = [1u64; 21];
    let mut n = 1usize;
    while n <= 20 {
        table[n] = table[n - 1] * n as u64;
        n += 1;
    }
    table
};

impl fmt::Debug for OccupationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_vacuum() {
            return write!(f, "|vac⟩");
        }
        write!(f, "|")?;
        for (i, (cell, count)) in self.cells.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{cell}")?;
            if *count > 1 {
                write!(f, "^{count}")?;
            }
        }
        write!(f, "⟩")
    }
}

impl Serialize for OccupationVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.cells.len()))?;
        for (cell, count) in &self.cells {
            seq.serialize_element(&(cell.spatial.as_str(), cell.internal, count))?;
        }
        seq.end()
    }
}

/// Which quantity the stored scalars mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Convention {
    /// Coefficients of creation-operator monomials.
    Monomial,
    /// Amplitudes of normalized Fock kets.
    Fock,
}

/// Sparse superposition of occupation vectors with one total photon number.
#[derive(Clone, PartialEq)]
pub struct PureState<S: Scalar> {
    terms: BTreeMap<OccupationVector, S>,
    convention: Convention,
}

impl<S: Scalar> PureState<S> {
    /// The zero state (no terms) in the given convention.
    pub fn zero(convention: Convention) -> Self {
        PureState { terms: BTreeMap::new(), convention }
    }

    /// |occ⟩ as a normalized ket: single term, amplitude 1, Fock convention.
    pub fn basis(occ: OccupationVector) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(occ, S::one());
        PureState { terms, convention: Convention::Fock }
    }

    /// The single creation monomial for `occ` with the given coefficient.
    pub fn monomial(occ: OccupationVector, coeff: S) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(occ, coeff);
        }
        PureState { terms, convention: Convention::Monomial }
    }

    /// Builds a state from terms; zero amplitudes drop, photon numbers must
    /// agree across terms.
    pub fn from_terms(
        convention: Convention,
        terms: impl IntoIterator<Item = (OccupationVector, S)>,
    ) -> Result<Self> {
        let mut state = PureState::zero(convention);
        for (occ, amp) in terms {
            state.check_photon_number(&occ)?;
            accumulate(&mut state.terms, occ, amp);
        }
        Ok(state)
    }

    fn check_photon_number(&self, occ: &OccupationVector) -> Result<()> {
        match self.photon_number() {
            Some(n) if n != occ.total() => {
                Err(Error::PhotonNumberMixture { a: n, b: occ.total() })
            }
            _ => Ok(()),
        }
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    /// Number of stored terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// True for the zero state.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The common total photon number; `None` for the zero state.
    pub fn photon_number(&self) -> Option<u32> {
        self.terms.keys().next().map(OccupationVector::total)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OccupationVector, &S)> {
        self.terms.iter()
    }

    pub fn amplitude_of(&self, occ: &OccupationVector) -> Option<&S> {
        self.terms.get(occ)
    }

    /// Union of spatial modes over all terms.
    pub fn spatial_support(&self) -> BTreeSet<Mode> {
        let mut support = BTreeSet::new();
        for occ in self.terms.keys() {
            support.extend(occ.spatial_support());
        }
        support
    }

    /// Multiplies every amplitude by `factor`.
    pub fn scale(&self, factor: &S) -> Self {
        if factor.is_zero() {
            return PureState::zero(self.convention);
        }
        let terms = self
            .terms
            .iter()
            .map(|(occ, amp)| (occ.clone(), amp.mul(factor)))
            .filter(|(_, amp)| !amp.is_zero())
            .collect();
        PureState { terms, convention: self.convention }
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(occ, amp)| (occ.clone(), amp.neg())).collect();
        PureState { terms, convention: self.convention }
    }

    /// Exact superposition; conventions and photon numbers must agree.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.require_convention(other.convention)?;
        if let (Some(a), Some(b)) = (self.photon_number(), other.photon_number()) {
            if a != b {
                return Err(Error::PhotonNumberMixture { a, b });
            }
        }
        let mut terms = self.terms.clone();
        for (occ, amp) in &other.terms {
            accumulate(&mut terms, occ.clone(), amp.clone());
        }
        Ok(PureState { terms, convention: self.convention })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Product state on disjoint rails; norms multiply.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        self.require_convention(other.convention)?;
        if let Some(shared) = self
            .spatial_support()
            .intersection(&other.spatial_support())
            .next()
        {
            return Err(Error::OverlappingModes(shared.as_str().to_owned()));
        }
        let mut terms = BTreeMap::new();
        for (occ1, amp1) in &self.terms {
            for (occ2, amp2) in &other.terms {
                accumulate(&mut terms, occ1.merge(occ2), amp1.mul(amp2));
            }
        }
        Ok(PureState { terms, convention: self.convention })
    }

    /// ⟨self|other⟩, conjugating `self`. Conventions must match; monomial
    /// states weight each occupation by ∏ n_cell! (the monomial basis is
    /// orthogonal, not orthonormal), keeping the value exact at any occupancy.
    pub fn inner_product(&self, other: &Self) -> Result<S> {
        self.require_convention(other.convention)?;
        let mut sum = S::zero();
        for (occ, amp1) in &self.terms {
            let Some(amp2) = other.terms.get(occ) else { continue };
            let mut contribution = amp1.conj().mul(amp2);
            if self.convention == Convention::Monomial {
                contribution = contribution.mul(&S::from_int(occ.factorial_weight() as i64));
            }
            sum = sum.add(&contribution);
        }
        Ok(sum)
    }

    /// ⟨self|self⟩ as an exact probability value.
    pub fn norm_squared(&self) -> S::Prob {
        let mut sum = S::Prob::zero();
        for (occ, amp) in &self.terms {
            let mut term = amp.abs_squared();
            if self.convention == Convention::Monomial {
                term = term.mul_nat(occ.factorial_weight());
            }
            sum = sum.add(&term);
        }
        sum
    }

    /// Converts between conventions by the √(∏ n_cell!) factor per term.
    /// Errors when any occupancy exceeds 2 (√3! leaves the exact ring; both
    /// backends reject it so the backends stay interchangeable).
    pub fn convert_to(&self, convention: Convention) -> Result<Self> {
        if convention == self.convention {
            return Ok(self.clone());
        }
        let sqrt2 = S::from_int(2).mul(&S::inv_sqrt2());
        let mut terms = BTreeMap::new();
        for (occ, amp) in &self.terms {
            let mut doubles = 0u32;
            for (cell, count) in occ.cells() {
                match count {
                    0 | 1 => {}
                    2 => doubles += 1,
                    n => {
                        return Err(Error::NotRepresentable(format!(
                            "cell {cell} holds {n} photons; √{n}! is not exactly representable"
                        )))
                    }
                }
            }
            // √(∏ n!) = √2^doubles.
            let factor = match convention {
                Convention::Fock => sqrt2.clone(),
                Convention::Monomial => S::inv_sqrt2(),
            };
            let mut adjusted = amp.clone();
            for _ in 0..doubles {
                adjusted = adjusted.mul(&factor);
            }
            terms.insert(occ.clone(), adjusted);
        }
        Ok(PureState { terms, convention })
    }

    /// Keeps the terms whose occupation satisfies `pred`.
    pub fn filter_terms(&self, pred: impl Fn(&OccupationVector) -> bool) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(occ, _)| pred(occ))
            .map(|(occ, amp)| (occ.clone(), amp.clone()))
            .collect();
        PureState { terms, convention: self.convention }
    }

    /// Scales to unit norm when the factor exists in the backend; otherwise
    /// returns the state untouched with `exact: false` (fidelities then use
    /// the ratio form and never need the missing root).
    pub fn normalize(&self) -> Result<Normalized<S>> {
        let norm_squared = self.norm_squared();
        if norm_squared.is_zero() {
            return Err(Error::ZeroState);
        }
        match S::inv_sqrt_of(&norm_squared) {
            Some(scale) => Ok(Normalized {
                state: self.scale(&scale),
                norm_squared,
                exact: true,
            }),
            None => Ok(Normalized { state: self.clone(), norm_squared, exact: false }),
        }
    }

    fn require_convention(&self, got: Convention) -> Result<()> {
        if self.convention != got {
            return Err(Error::ConventionMismatch { expected: self.convention, got });
        }
        Ok(())
    }
}

/// Result of [`PureState::normalize`].
#[derive(Clone, Debug)]
pub struct Normalized<S: Scalar> {
    pub state: PureState<S>,
    /// Norm squared of the input state.
    pub norm_squared: S::Prob,
    /// Whether `state` was actually rescaled to unit norm.
    pub exact: bool,
}

fn accumulate<S: Scalar>(terms: &mut BTreeMap<OccupationVector, S>, occ: OccupationVector, amp: S) {
    if amp.is_zero() {
        return;
    }
    match terms.entry(occ) {
        std::collections::btree_map::Entry::Vacant(entry) => {
            entry.insert(amp);
        }
        std::collections::btree_map::Entry::Occupied(mut entry) => {
            let sum = entry.get().add(&amp);
            if sum.is_zero() {
                entry.remove();
            } else {
                *entry.get_mut() = sum;
            }
        }
    }
}

impl<S: Scalar + fmt::Display> fmt::Display for PureState<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (occ, amp)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({amp})·{occ:?}")?;
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for PureState<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PureState[{:?}]", self.convention)?;
        for (occ, amp) in &self.terms {
            write!(f, " {amp:?}·{occ:?}")?;
        }
        Ok(())
    }
}

impl<S: Scalar + Serialize> Serialize for PureState<S> {
    /// The dump format: a list of {occupation, amp} rows in sorted occupation
    /// order, byte-stable for golden files. The convention travels outside
    /// the list (report rows carry it alongside).
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        #[derive(Serialize)]
        struct Row<'a, S> {
            occupation: &'a OccupationVector,
            amp: &'a S,
        }
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (occ, amp) in &self.terms {
            seq.serialize_element(&Row { occupation: occ, amp })?;
        }
        seq.end()
    }
}
