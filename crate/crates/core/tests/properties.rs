//! Property tests over randomized inputs.
//!
//! Structural laws of the exact arithmetic, the state algebra and the
//! detection pipeline: ring axioms, unitarity, completeness, detector
//! refinement and cross-backend agreement. Deterministic protocol-level
//! identities live in the acceptance suite; here the inputs are generated.

use std::collections::BTreeSet;

use num_complex::Complex64;
use proptest::prelude::*;

use hdswap_core::{
    apply_beam_splitter, build_report, classify, enumerate_outcomes, fidelity, fidelity_decay,
    pnr_gains, Amplitude, AncillaBasis, BeamSplitter, Convention, DetectorModel, HeraldClass,
    Mode, ModeCell, OccupationVector, Phase, ProtocolConfig, PureState, Rational, Scalar,
};

type ExactState = PureState<Amplitude>;

/// (re + i·im) / √2^halves.
fn amp(re: i64, im: i64, halves: u32) -> Amplitude {
    let mut value = Amplitude::from_int(re).add(&Amplitude::i().mul(&Amplitude::from_int(im)));
    for _ in 0..halves {
        value = value.mul(&Amplitude::inv_sqrt2());
    }
    value
}

/// One two-photon term: two (rail index, label) cells plus a Gaussian
/// integer coefficient.
type TermSpec = ((u8, u8), (u8, u8), (i64, i64));

/// Random terms plus one shared √2-denominator exponent. A single exponent
/// per state keeps every merged coefficient inside the ring slice whose
/// squared modulus is rational, exactly as circuit evolution does.
type StateSpec = (Vec<TermSpec>, u32);

fn term_strategy() -> impl Strategy<Value = TermSpec> {
    ((0u8..2, 1u8..4), (0u8..2, 1u8..4), (-3i64..=3, -3i64..=3))
}

fn terms_strategy() -> impl Strategy<Value = StateSpec> {
    (proptest::collection::vec(term_strategy(), 1..4), 0u32..3)
}

/// Builds a two-photon state on the given rail pair; `None` when the random
/// terms cancel to zero.
fn two_photon_state(rails: [&str; 2], spec: &StateSpec) -> Option<ExactState> {
    let (specs, halves) = spec;
    let terms: Vec<(OccupationVector, Amplitude)> = specs
        .iter()
        .map(|((rail1, label1), (rail2, label2), (re, im))| {
            let occ = OccupationVector::from_counts([
                (ModeCell::new(rails[*rail1 as usize], *label1), 1),
                (ModeCell::new(rails[*rail2 as usize], *label2), 1),
            ]);
            (occ, amp(*re, *im, *halves))
        })
        .collect();
    let state = PureState::from_terms(Convention::Monomial, terms).ok()?;
    (!state.is_zero()).then_some(state)
}

fn assert_states_equal(actual: &ExactState, expected: &ExactState, context: &str) {
    let negated = expected.scale(&Amplitude::one().neg());
    let diff = actual.add(&negated).expect("comparable states");
    assert!(diff.is_zero(), "{context}: states differ");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn amplitude_ring_axioms(
        a in (-4i64..=4, -4i64..=4, 0u32..4),
        b in (-4i64..=4, -4i64..=4, 0u32..4),
        c in (-4i64..=4, -4i64..=4, 0u32..4),
    ) {
        let (a, b, c) = (amp(a.0, a.1, a.2), amp(b.0, b.1, b.2), amp(c.0, c.1, c.2));
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.add(&a.neg()).is_zero());
        prop_assert_eq!(a.mul(&Amplitude::one()), a.clone());
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!(a.mul(&b).conj(), a.conj().mul(&b.conj()));
        prop_assert_eq!(a.mul(&b).abs_squared(), &a.abs_squared() * &b.abs_squared());
        prop_assert_eq!(a.conj().abs_squared(), a.abs_squared());
        prop_assert_eq!(a.sub(&b), a.add(&b.neg()));
    }

    #[test]
    fn tensor_and_inner_products_factorize(
        left in terms_strategy(),
        left_other in terms_strategy(),
        right in terms_strategy(),
        right_other in terms_strategy(),
    ) {
        let (Some(a), Some(c)) = (
            two_photon_state(["p", "q"], &left),
            two_photon_state(["p", "q"], &left_other),
        ) else { return Ok(()); };
        let (Some(b), Some(d)) = (
            two_photon_state(["r", "s"], &right),
            two_photon_state(["r", "s"], &right_other),
        ) else { return Ok(()); };

        let ab = a.tensor(&b).expect("disjoint rails");
        let cd = c.tensor(&d).expect("disjoint rails");
        let joint = ab.inner_product(&cd).expect("same rails");
        let split = a.inner_product(&c).expect("same rails")
            .mul(&b.inner_product(&d).expect("same rails"));
        prop_assert_eq!(joint, split);

        // Norms factorize with the inner products.
        prop_assert_eq!(ab.norm_squared(), &a.norm_squared() * &b.norm_squared());
    }

    #[test]
    fn splitter_is_unitary_and_linear(
        first in terms_strategy(),
        second in terms_strategy(),
        scale in (-3i64..=3, -3i64..=3, 0u32..3),
    ) {
        let (Some(s1), Some(s2)) = (
            two_photon_state(["p", "q"], &first),
            two_photon_state(["p", "q"], &second),
        ) else { return Ok(()); };
        let bs = BeamSplitter::new("p", "q", "u", "v").expect("valid splitter");

        let u1 = apply_beam_splitter(&s1, &bs).expect("interference");
        let u2 = apply_beam_splitter(&s2, &bs).expect("interference");
        prop_assert_eq!(s1.norm_squared(), u1.norm_squared());
        prop_assert_eq!(
            u1.inner_product(&u2).expect("same rails"),
            s1.inner_product(&s2).expect("same rails")
        );

        let factor = amp(scale.0, scale.1, scale.2);
        let combined = s1.scale(&factor).add(&s2).expect("same photon number");
        let u_combined = apply_beam_splitter(&combined, &bs).expect("interference");
        let recombined = u1.scale(&factor).add(&u2).expect("same photon number");
        assert_states_equal(&u_combined, &recombined, "linearity");
    }

    #[test]
    fn detection_is_complete_and_threshold_merges_number_patterns(
        specs in terms_strategy(),
    ) {
        let Some(state) = two_photon_state(["p", "q"], &specs) else { return Ok(()); };
        let bs = BeamSplitter::new("p", "q", "u", "v").expect("valid splitter");
        let out = apply_beam_splitter(&state, &bs).expect("interference");
        let detected: BTreeSet<Mode> = [Mode::new("u"), Mode::new("v")].into();

        let resolved = enumerate_outcomes(&out, &detected, DetectorModel::Pnr).expect("outcomes");
        let clicks =
            enumerate_outcomes(&out, &detected, DetectorModel::Threshold).expect("outcomes");

        for outcomes in [&resolved, &clicks] {
            let mut sum = Rational::zero();
            for outcome in outcomes.iter() {
                sum = &sum + &outcome.probability;
            }
            prop_assert!(sum.is_one());
        }

        // Every threshold pattern carries the summed probability of the
        // number-resolved patterns that collapse onto it.
        for click in &clicks {
            let mut merged = Rational::zero();
            for fine in &resolved {
                let collapsed = hdswap_core::DetectionPattern::from_occupation(
                    fine.pattern.occupation().clone(),
                    DetectorModel::Threshold,
                );
                if collapsed == click.pattern {
                    merged = &merged + &fine.probability;
                }
            }
            prop_assert_eq!(&merged, &click.probability);
        }
        prop_assert!(resolved.len() >= clicks.len());
    }

    #[test]
    fn convention_round_trip_is_identity(specs in terms_strategy()) {
        let Some(state) = two_photon_state(["p", "q"], &specs) else { return Ok(()); };
        // Two photons per term keep every cell count at most 2, so √n! stays
        // in the ring and the occupation-amplitude form is exact.
        let round = state
            .convert_to(Convention::Fock)
            .expect("to occupation amplitudes")
            .convert_to(Convention::Monomial)
            .expect("back");
        assert_states_equal(&round, &state, "convention round trip");
    }

    #[test]
    fn rational_serialization_round_trips(num in -1000i64..1000, den in 1i64..1000) {
        let value = Rational::new(num, den);
        let json = serde_json::to_string(&value).expect("serialize");
        let back: Rational = serde_json::from_str(&json).expect("deserialize");
        prop_assert_eq!(back, value);
    }

    #[test]
    fn fidelity_decay_is_monotone(
        num in 0i64..=20,
        den in 20i64..=40,
        photons in 0u32..8,
        extra in 1u32..4,
    ) {
        let eta = Rational::new(num, den);
        let decayed = fidelity_decay(&eta, photons).expect("in range");
        let further = fidelity_decay(&eta, photons + extra).expect("in range");
        prop_assert!(further <= decayed);
        // (num+1)/(den+1) >= num/den for num <= den: transmission improved.
        let stronger = fidelity_decay(&Rational::new(num + 1, den + 1), photons)
            .expect("in range");
        prop_assert!(stronger >= decayed);
        prop_assert!(fidelity_decay(&Rational::one(), photons).expect("in range").is_one());
        prop_assert!(fidelity_decay(&eta, 0).expect("in range").is_one());
    }
}

#[test]
fn hom_interference_suppresses_split_outputs() {
    let bs = BeamSplitter::new("p", "q", "u", "v").expect("valid splitter");
    for label in 1..=6u8 {
        let occ = OccupationVector::from_counts([
            (ModeCell::new("p", label), 1),
            (ModeCell::new("q", label), 1),
        ]);
        let state =
            PureState::from_terms(Convention::Monomial, [(occ, Amplitude::one())]).expect("state");
        let out = apply_beam_splitter(&state, &bs).expect("interference");
        for (occ, _) in out.terms() {
            assert_ne!(
                (occ.photons_in_mode(&Mode::new("u")), occ.photons_in_mode(&Mode::new("v"))),
                (1, 1),
                "same-label photons must bunch"
            );
        }
    }
}

#[test]
fn number_resolution_never_loses_probability_per_class() {
    for dim in [3u8, 4] {
        let config = ProtocolConfig::new(dim).expect("dimension in range");
        let gains = pnr_gains::<Amplitude>(&config).expect("both tables");
        assert!(gains.pnr.success >= gains.threshold.success);
        assert!(gains.pnr.full_dim_probability >= gains.threshold.full_dim_probability);
        assert!(gains.pnr.two_dim_probability >= gains.threshold.two_dim_probability);
        assert_eq!(gains.pnr.coincidence, gains.threshold.coincidence);
        assert!(gains.pnr.two_dim_events >= gains.threshold.two_dim_events);
    }
}

#[test]
fn covered_heralds_are_bell_states() {
    for detector in [DetectorModel::Threshold, DetectorModel::Pnr] {
        let mut config = ProtocolConfig::new(4).expect("dimension in range");
        config.detector = detector;
        let circuit = config.circuit().expect("circuit");
        let detected = circuit.detected_set();
        let input = config.input_state::<Amplitude>().expect("input");
        let post = hdswap_core::apply_circuit(&input, &circuit).expect("pipeline");

        let mut covered_pairs = 0usize;
        let mut covered_full = 0usize;
        for outcome in enumerate_outcomes(&post, &detected, detector).expect("outcomes") {
            if !outcome.pattern.covers(&detected) {
                continue;
            }
            let classified = classify(&outcome, &config).expect("classification");
            match classified.class {
                HeraldClass::Swap { dim: 2 } => {
                    // Full-coverage two-dimensional heralds are exactly the
                    // antisymmetric label pairs.
                    let herald = classified.herald.as_ref().expect("pure herald");
                    let mut matched = false;
                    for k in 1..=4u8 {
                        for j in (k + 1)..=4 {
                            let singlet = hdswap_core::bell_singlet::<Amplitude>(
                                &Mode::new("a"),
                                &Mode::new("d"),
                                k,
                                j,
                            )
                            .expect("distinct labels");
                            if fidelity(herald, &singlet).expect("overlap").is_one() {
                                matched = true;
                            }
                        }
                    }
                    assert!(matched, "covered two-dimensional herald must be a singlet");
                    covered_pairs += 1;
                }
                HeraldClass::Swap { dim: 4 } => {
                    if classified.fidelity.is_one() {
                        covered_full += 1;
                    }
                }
                _ => {}
            }
        }
        assert_eq!(covered_pairs, 48, "covered two-dimensional events under {detector:?}");
        assert_eq!(covered_full, 4, "phase-matched full-dimensional events under {detector:?}");
    }
}

#[test]
fn float_backend_matches_exact_probabilities() {
    for detector in [DetectorModel::Threshold, DetectorModel::Pnr] {
        let mut config = ProtocolConfig::new(4).expect("dimension in range");
        config.detector = detector;
        let exact = build_report::<Amplitude>(&config, "exact").expect("report");
        let float = build_report::<Complex64>(&config, "float").expect("report");

        assert_eq!(exact.rows.len(), float.rows.len());
        for (exact_row, float_row) in exact.rows.iter().zip(&float.rows) {
            assert_eq!(exact_row.pattern, float_row.pattern);
            assert!(
                (exact_row.probability.to_f64() - float_row.probability).abs() < 1e-12,
                "pattern {} probability drift",
                exact_row.pattern
            );
            assert_eq!(exact_row.class, float_row.class);
        }
        assert!(
            (exact.aggregates.success.to_f64() - float.aggregates.success).abs() < 1e-12
        );
        assert!(
            (exact.aggregates.coincidence.to_f64() - float.aggregates.coincidence).abs() < 1e-12
        );
        assert_eq!(exact.aggregates.success_events, float.aggregates.success_events);
        assert_eq!(exact.aggregates.two_dim_events, float.aggregates.two_dim_events);
    }
}

#[test]
fn cross_pairing_is_a_label_permutation() {
    // Relabeling 2→4, 4→3, 3→2 maps the plain ancilla onto the cross-paired
    // one and fixes the diagonal sources, so every aggregate must agree.
    let plain = ProtocolConfig::new(4).expect("dimension in range");
    let mut cross = plain.clone();
    cross.ancilla = AncillaBasis::CrossPaired;

    for detector in [DetectorModel::Threshold, DetectorModel::Pnr] {
        let run = |config: &ProtocolConfig| {
            let mut config = config.clone();
            config.detector = detector;
            let circuit = config.circuit().expect("circuit");
            let detected = circuit.detected_set();
            let input = config.input_state::<Amplitude>().expect("input");
            let post = hdswap_core::apply_circuit(&input, &circuit).expect("pipeline");
            let rows: Vec<_> = enumerate_outcomes(&post, &detected, detector)
                .expect("outcomes")
                .into_iter()
                .map(|outcome| {
                    let classified = classify(&outcome, &config).expect("classification");
                    (outcome, classified)
                })
                .collect();
            hdswap_core::aggregate(&rows, &config, &detected)
        };
        assert_eq!(run(&plain), run(&cross), "aggregates under {detector:?}");
    }
}

#[test]
fn configurations_serialize_round_trip() {
    let mut configs = Vec::new();
    for dim in 3u8..=6 {
        let mut config = ProtocolConfig::new(dim).expect("dimension in range");
        config.detector = DetectorModel::Pnr;
        configs.push(config.clone());
        config.heralds = hdswap_core::HeraldAssignment::Flexible;
        configs.push(config);
    }
    let mut phased = ProtocolConfig::new(4).expect("dimension in range");
    phased.ancilla_phase = Phase::Quarter(2);
    configs.push(phased);
    let mut symmetric = ProtocolConfig::new(4).expect("dimension in range");
    symmetric.ancilla = AncillaBasis::Symmetric;
    configs.push(symmetric);

    for config in configs {
        let json = serde_json::to_string(&config).expect("serialize");
        let back: ProtocolConfig = serde_json::from_str(&json).expect("deserialize");
        assert_eq!(back, config);
    }
}
