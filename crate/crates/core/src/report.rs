//! Deterministic run reports.
//!
//! A report carries the full outcome table of one protocol run plus the
//! aggregate probabilities and event counts, prefixed by a manifest that
//! echoes the configuration and a content hash. Serialization is byte-stable
//! for a given crate version: rows are sorted, rationals reduced, and no
//! clocks or machine identifiers are included, so reruns diff cleanly.

use serde::Serialize;

use crate::error::Result;
use crate::fock::Convention;
use crate::measure::{
    aggregate, classify, count_events, enumerate_outcomes, flexible_sweep, Aggregates,
    CountConvention, EventCounts, FlexibleAggregates, HeraldClass,
};
use crate::optics::apply_circuit;
use crate::protocol::{DetectorModel, ProtocolConfig};
use crate::scalar::{ProbValue, Scalar};

/// Echo of what produced a report, plus a stable content hash.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    /// Crate version that produced the report.
    pub version: String,
    /// Amplitude backend name ("exact" or "float").
    pub backend: String,
    pub config: ProtocolConfig,
    /// Detected rails in canonical order.
    pub detected: Vec<String>,
    /// Kept rails in canonical order.
    pub kept: Vec<String>,
    /// FNV-1a 64 hash (hex) of the report serialized with this field empty.
    pub content_hash: String,
}

/// One outcome row of the report.
#[derive(Clone, Debug, Serialize)]
pub struct HeraldRow<P> {
    /// Canonical "rail:label,..." rendering of the pattern.
    pub pattern: String,
    /// Exact pattern probability.
    pub probability: P,
    /// The same probability as a float, for quick reading.
    pub probability_f64: f64,
    pub class: HeraldClass,
    /// Mixture fidelity of the kept coincidence component to the target.
    pub fidelity: P,
    /// Fraction of the pattern's probability with one photon per kept rail.
    pub coincident_fraction: P,
    /// Convention of `herald_state` when one pure herald exists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub herald_convention: Option<Convention>,
    /// Squared norm of the herald before normalization.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub herald_norm_squared: Option<P>,
    /// Whether the dumped herald was rescaled to unit norm (false when the
    /// inverse square root does not exist in the backend).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub herald_normalized: Option<bool>,
    /// State dump of the pure kept coincidence state, when there is one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub herald_state: Option<serde_json::Value>,
}

/// Full deterministic record of one run.
#[derive(Clone, Debug, Serialize)]
pub struct HeraldReport<P> {
    pub manifest: RunManifest,
    pub rows: Vec<HeraldRow<P>>,
    pub aggregates: Aggregates<P>,
    /// Per-output-pair sweep, present under flexible herald assignment.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flexible: Option<FlexibleAggregates<P>>,
    /// Event counts over the detected rails with the configured readout.
    pub counts_detected: EventCounts,
    /// Event counts with the signature extended over the kept rails.
    pub counts_all_rails: EventCounts,
    /// Number-resolved signature census over every output arm, independent of
    /// the configured readout model.
    pub counts_number_resolved: EventCounts,
}

impl<P: Serialize> HeraldReport<P> {
    /// Canonical single-line JSON rendering.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    /// Pretty JSON rendering, still byte-stable.
    pub fn to_json_pretty(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

impl<P: Serialize + std::fmt::Display> HeraldReport<P> {
    /// CSV table of the rows (pattern, probabilities, class, fidelity).
    pub fn to_csv(&self) -> String {
        let mut csv = String::from(
            "pattern,probability,probability_f64,class,fidelity,coincident_fraction\n",
        );
        for row in &self.rows {
            csv.push_str(&format!(
                "{},{},{},{},{},{}\n",
                csv_field(&row.pattern),
                csv_field(&row.probability.to_string()),
                row.probability_f64,
                row.class,
                csv_field(&row.fidelity.to_string()),
                csv_field(&row.coincident_fraction.to_string()),
            ));
        }
        csv
    }
}

/// Quotes a field when it holds a comma or a quote.
fn csv_field(raw: &str) -> String {
    if raw.contains(',') || raw.contains('"') {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw.to_owned()
    }
}

/// Runs the configured protocol end to end and assembles the report.
///
/// # Errors
///
/// Any validation or pipeline failure from the underlying stages.
pub fn build_report<S: Scalar + Serialize>(
    config: &ProtocolConfig,
    backend: &str,
) -> Result<HeraldReport<S::Prob>>
where
    S::Prob: Serialize,
{
    config.validate()?;
    let circuit = config.circuit()?;
    let input = config.input_state::<S>()?;
    let post = apply_circuit(&input, &circuit)?;
    let detected = circuit.detected_set();
    let outcomes = enumerate_outcomes(&post, &detected, config.detector)?;

    let mut pairs = Vec::with_capacity(outcomes.len());
    for outcome in outcomes {
        let classified = classify(&outcome, config)?;
        pairs.push((outcome, classified));
    }

    let mut rows = Vec::with_capacity(pairs.len());
    for (outcome, classified) in &pairs {
        let mut herald_convention = None;
        let mut herald_norm_squared = None;
        let mut herald_normalized = None;
        let mut herald_state = None;
        if let Some(herald) = &classified.herald {
            let normalized = herald.normalize()?;
            // One photon per cell, so the Fock relabeling is exact.
            let displayed = normalized.state.convert_to(Convention::Fock)?;
            herald_convention = Some(Convention::Fock);
            herald_norm_squared = Some(normalized.norm_squared.clone());
            herald_normalized = Some(normalized.exact);
            herald_state = Some(serde_json::to_value(&displayed)?);
        }
        rows.push(HeraldRow {
            pattern: outcome.pattern.to_string(),
            probability: outcome.probability.clone(),
            probability_f64: outcome.probability.to_f64(),
            class: classified.class,
            fidelity: classified.fidelity.clone(),
            coincident_fraction: classified.coincident_fraction.clone(),
            herald_convention,
            herald_norm_squared,
            herald_normalized,
            herald_state,
        });
    }

    let aggregates = aggregate(&pairs, config, &detected);
    let flexible = match config.heralds {
        crate::protocol::HeraldAssignment::Fixed => None,
        crate::protocol::HeraldAssignment::Flexible => {
            Some(flexible_sweep(&post, config)?)
        }
    };
    let counts_detected = count_events(
        &post,
        config,
        CountConvention { detector: config.detector, include_kept: false },
    )?;
    let counts_all_rails = count_events(
        &post,
        config,
        CountConvention { detector: config.detector, include_kept: true },
    )?;
    let counts_number_resolved = count_events(
        &post,
        config,
        CountConvention { detector: DetectorModel::Pnr, include_kept: true },
    )?;

    let mut report = HeraldReport {
        manifest: RunManifest {
            version: env!("CARGO_PKG_VERSION").to_owned(),
            backend: backend.to_owned(),
            config: config.clone(),
            detected: circuit.detected().iter().map(|m| m.as_str().to_owned()).collect(),
            kept: circuit.kept().iter().map(|m| m.as_str().to_owned()).collect(),
            content_hash: String::new(),
        },
        rows,
        aggregates,
        flexible,
        counts_detected,
        counts_all_rails,
        counts_number_resolved,
    };
    let unhashed = serde_json::to_string(&report)?;
    report.manifest.content_hash = format!("{:016x}", fnv1a(unhashed.as_bytes()));
    Ok(report)
}

/// FNV-1a 64-bit content hash.
fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for byte in bytes {
        hash ^= u64::from(*byte);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amplitude::Amplitude;
    use crate::protocol::DetectorModel;

    #[test]
    fn reports_are_reproducible() {
        let config = ProtocolConfig::new(4).unwrap();
        let first = build_report::<Amplitude>(&config, "exact").unwrap();
        let second = build_report::<Amplitude>(&config, "exact").unwrap();
        assert_eq!(first.to_json().unwrap(), second.to_json().unwrap());
        assert_eq!(first.manifest.content_hash.len(), 16);
    }

    #[test]
    fn hash_tracks_configuration() {
        let threshold = ProtocolConfig::new(4).unwrap();
        let mut pnr = threshold.clone();
        pnr.detector = DetectorModel::Pnr;
        let a = build_report::<Amplitude>(&threshold, "exact").unwrap();
        let b = build_report::<Amplitude>(&pnr, "exact").unwrap();
        assert_ne!(a.manifest.content_hash, b.manifest.content_hash);
    }

    #[test]
    fn csv_has_one_line_per_row() {
        let config = ProtocolConfig::new(4).unwrap();
        let report = build_report::<Amplitude>(&config, "exact").unwrap();
        let csv = report.to_csv();
        assert_eq!(csv.lines().count(), report.rows.len() + 1);
        assert!(csv.starts_with("pattern,probability,"));
        // Patterns contain commas, so the pattern column must be quoted.
        assert!(csv.lines().nth(1).unwrap().starts_with('"'));
    }

    #[test]
    fn fnv_reference_values() {
        // Published FNV-1a test vectors.
        assert_eq!(fnv1a(b""), 0xcbf2_9ce4_8422_2325);
        assert_eq!(fnv1a(b"a"), 0xaf63_dc4c_8601_ec8c);
        assert_eq!(fnv1a(b"foobar"), 0x8594_4171_f739_67e8);
    }
}
