//! Benchmarks of the simulation pipeline: circuit application on the exact
//! and float backends, outcome enumeration under both readout models, and
//! full report assembly.

use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;

use hdswap_core::{
    apply_circuit, build_report, enumerate_outcomes, Amplitude, DetectorModel, ProtocolConfig,
};

fn circuit_application(c: &mut Criterion) {
    let config = ProtocolConfig::new(4).expect("valid dimension");
    let circuit = config.circuit().expect("circuit");
    let exact_input = config.input_state::<Amplitude>().expect("input state");
    let float_input = config.input_state::<Complex64>().expect("input state");
    c.bench_function("apply_circuit/dim4/exact", |b| {
        b.iter(|| apply_circuit(&exact_input, &circuit).expect("apply"))
    });
    c.bench_function("apply_circuit/dim4/float", |b| {
        b.iter(|| apply_circuit(&float_input, &circuit).expect("apply"))
    });
}

fn outcome_enumeration(c: &mut Criterion) {
    let config = ProtocolConfig::new(4).expect("valid dimension");
    let circuit = config.circuit().expect("circuit");
    let detected = circuit.detected_set();
    let input = config.input_state::<Amplitude>().expect("input state");
    let post = apply_circuit(&input, &circuit).expect("apply");
    for model in [DetectorModel::Threshold, DetectorModel::Pnr] {
        let name = match model {
            DetectorModel::Threshold => "enumerate_outcomes/dim4/threshold",
            DetectorModel::Pnr => "enumerate_outcomes/dim4/pnr",
        };
        c.bench_function(name, |b| {
            b.iter(|| enumerate_outcomes(&post, &detected, model).expect("enumerate"))
        });
    }
}

fn report_assembly(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_report");
    group.sample_size(20);
    for dim in [3u8, 4] {
        let config = ProtocolConfig::new(dim).expect("valid dimension");
        group.bench_function(format!("dim{dim}/exact"), |b| {
            b.iter(|| build_report::<Amplitude>(&config, "exact").expect("report"))
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    circuit_application,
    outcome_enumeration,
    report_assembly
);
criterion_main!(benches);
