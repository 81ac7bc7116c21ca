//! Command-line runner for the entanglement-swapping simulator.
//!
//! `swap` runs the configured protocol end to end and writes byte-stable
//! JSON and CSV reports, `herald` shows the state heralded by one detection
//! pattern, and `decay` evaluates the fidelity decay under reduced
//! interference visibility. Exit codes: 0 success, 1 bad input, 2 internal
//! invariant violation.

mod text;

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_complex::Complex64;
use serde::Serialize;

use hdswap_core::{
    apply_circuit, build_report, classify, enumerate_outcomes, fidelity_decay, hyper_render,
    numeric_render, Amplitude, AncillaBasis, DetectionPattern, DetectorModel, HeraldAssignment,
    HeraldClass, HeraldReport, InitialStateVariant, OccupationVector, Phase, ProtocolConfig,
    PureState, Rational,
};

use text::{
    decimal_string, parse_phase, parse_rational_values, parse_u32_values, phase_token,
};

#[derive(Parser)]
#[command(
    name = "hdswap",
    version,
    about = "Exact simulator for linear-optical high-dimensional entanglement swapping"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured protocol and report every herald
    Swap(SwapArgs),
    /// Show the state heralded by one detection pattern
    Herald(HeraldArgs),
    /// Evaluate the fidelity decay eta^n for n interfering photons
    Decay(DecayArgs),
}

#[derive(Args)]
struct SwapArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Amplitude backend
    #[arg(long, value_enum, default_value_t = BackendArg::Exact)]
    backend: BackendArg,
    /// Directory for report.json and report.csv
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HeraldArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Detection pattern, one rail:label entry per photon, e.g. "b'':3,e':1,f':4,c'':2"
    #[arg(long, value_name = "PATTERN")]
    pattern: String,
}

#[derive(Args)]
struct DecayArgs {
    /// Transmission per photon: decimal or fraction, comma-separated for sweeps
    #[arg(long, value_name = "ETA")]
    eta: String,
    /// Photon count: single value, comma list, or inclusive range like 0..8
    #[arg(long, value_name = "N")]
    n: String,
    /// Directory for decay.csv
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

/// Protocol flags shared by `swap` and `herald`; unset flags fall back to the
/// preset (when given) and then to the per-dimension defaults.
#[derive(Args)]
struct ConfigArgs {
    /// Entanglement dimension of the source pairs
    #[arg(long, value_parser = clap::value_parser!(u8).range(3..=6))]
    dim: Option<u8>,
    /// Detector readout model
    #[arg(long, value_enum)]
    detector: Option<DetectorArg>,
    /// Output-pair reading: the canonical pair only, or swept over candidates
    #[arg(long, value_enum)]
    heralds: Option<HeraldsArg>,
    /// Source-pair state family
    #[arg(long, value_enum)]
    variant: Option<VariantArg>,
    /// Ancilla preparation basis
    #[arg(long, value_enum)]
    ancilla: Option<AncillaArg>,
    /// Relative phase on the ancilla's second branch: 0, pi/2, pi, 3pi/2 or radians
    #[arg(long, value_name = "PHASE")]
    ancilla_phase: Option<String>,
    /// Named full configuration; explicit flags override its fields
    #[arg(long, value_enum)]
    preset: Option<PresetArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DetectorArg {
    Threshold,
    Pnr,
}

#[derive(Clone, Copy, ValueEnum)]
enum HeraldsArg {
    Fixed,
    Flexible,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Uniform,
    /// Three-dimensional hybrid with a symmetric off-diagonal block
    #[value(alias = "a1")]
    HybridSymmetric,
    /// Three-dimensional hybrid extending the diagonal
    #[value(alias = "a2")]
    HybridDiagonal,
}

#[derive(Clone, Copy, ValueEnum)]
enum AncillaArg {
    Plain,
    Symmetric,
    CrossPaired,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum BackendArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum PresetArg {
    /// Four-dimensional run read as two-photon hyperentanglement, with the
    /// symmetric two-photon ancilla
    Hyper4d,
}

/// Failure carrying its exit code: bad input exits 1, internal errors 2.
enum Failure {
    BadInput(String),
    Internal(String),
}

impl From<hdswap_core::Error> for Failure {
    fn from(err: hdswap_core::Error) -> Self {
        match err {
            hdswap_core::Error::InvalidConfig(_)
            | hdswap_core::Error::Parse(_)
            | hdswap_core::Error::EtaOutOfRange(_) => Failure::BadInput(err.to_string()),
            other => Failure::Internal(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version print like successes; usage errors are bad input.
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Swap(args) => cmd_swap(args),
        Command::Herald(args) => cmd_herald(args),
        Command::Decay(args) => cmd_decay(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::BadInput(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(message)) => {
            eprintln!("internal error: {message}");
            ExitCode::from(2)
        }
    }
}

fn resolve_config(args: &ConfigArgs) -> Result<ProtocolConfig, Failure> {
    let preset_dim = match args.preset {
        Some(PresetArg::Hyper4d) => Some(4),
        None => None,
    };
    let dim = args.dim.or(preset_dim).unwrap_or(4);
    let mut config = ProtocolConfig::new(dim)?;
    if args.preset == Some(PresetArg::Hyper4d) {
        config.ancilla = AncillaBasis::Symmetric;
    }
    if let Some(variant) = args.variant {
        config.variant = match variant {
            VariantArg::Uniform => InitialStateVariant::Uniform,
            VariantArg::HybridSymmetric => InitialStateVariant::HybridSymmetric,
            VariantArg::HybridDiagonal => InitialStateVariant::HybridDiagonal,
        };
    }
    if let Some(ancilla) = args.ancilla {
        config.ancilla = match ancilla {
            AncillaArg::Plain => AncillaBasis::Plain,
            AncillaArg::Symmetric => AncillaBasis::Symmetric,
            AncillaArg::CrossPaired => AncillaBasis::CrossPaired,
        };
    }
    if let Some(detector) = args.detector {
        config.detector = match detector {
            DetectorArg::Threshold => DetectorModel::Threshold,
            DetectorArg::Pnr => DetectorModel::Pnr,
        };
    }
    if let Some(heralds) = args.heralds {
        config.heralds = match heralds {
            HeraldsArg::Fixed => HeraldAssignment::Fixed,
            HeraldsArg::Flexible => HeraldAssignment::Flexible,
        };
    }
    if let Some(phase) = &args.ancilla_phase {
        config.ancilla_phase = parse_phase(phase).map_err(Failure::BadInput)?;
    }
    config.validate()?;
    Ok(config)
}

fn cmd_swap(args: &SwapArgs) -> Result<(), Failure> {
    let config = resolve_config(&args.config)?;
    if args.backend == BackendArg::Exact {
        if let Phase::Radians(r) = config.ancilla_phase {
            if config.ancilla_phase.as_quarter().is_none() {
                return Err(Failure::BadInput(format!(
                    "--ancilla-phase {r} is not a quarter turn; use --backend float"
                )));
            }
        }
    }
    match args.backend {
        BackendArg::Exact => {
            let report = build_report::<Amplitude>(&config, "exact")?;
            print_config_line(&config, "exact");
            print_target_lines(&config)?;
            summarize_exact(&report);
            write_reports(&report, args.out.as_deref())
        }
        BackendArg::Float => {
            let report = build_report::<Complex64>(&config, "float")?;
            print_config_line(&config, "float");
            print_target_lines(&config)?;
            summarize_float(&report);
            write_reports(&report, args.out.as_deref())
        }
    }
}

fn print_config_line(config: &ProtocolConfig, backend: &str) {
    let variant = match config.variant {
        InitialStateVariant::Uniform => "uniform",
        InitialStateVariant::HybridSymmetric => "hybrid-symmetric",
        InitialStateVariant::HybridDiagonal => "hybrid-diagonal",
    };
    let ancilla = match config.ancilla {
        AncillaBasis::Plain => "plain",
        AncillaBasis::Symmetric => "symmetric",
        AncillaBasis::CrossPaired => "cross-paired",
    };
    println!(
        "config: dim={} variant={variant} ancilla={ancilla} ancilla-phase={} detector={} heralds={} backend={backend}",
        config.dim,
        phase_token(&config.ancilla_phase),
        detector_token(config.detector),
        match config.heralds {
            HeraldAssignment::Fixed => "fixed",
            HeraldAssignment::Flexible => "flexible",
        },
    );
}

fn detector_token(model: DetectorModel) -> &'static str {
    match model {
        DetectorModel::Threshold => "threshold",
        DetectorModel::Pnr => "pnr",
    }
}

fn print_target_lines(config: &ProtocolConfig) -> Result<(), Failure> {
    let target = config.target_on::<Amplitude>(&config.kept_pair())?;
    if let Ok(rendered) = numeric_render(&target) {
        println!("target: {rendered}");
    }
    if let Ok(rendered) = hyper_render(&target) {
        println!("target (hyper): {rendered}");
    }
    Ok(())
}

fn summarize_exact(report: &HeraldReport<Rational>) {
    let aggregates = &report.aggregates;
    let dim = report.manifest.config.dim;
    println!(
        "{} aggregate: {}",
        HeraldClass::Swap { dim },
        events_over_total(aggregates.success_events, &aggregates.success)
    );
    println!("coincidence: {}", aggregates.coincidence);
    println!("conditional success: {}", aggregates.conditional_success);
    println!(
        "full-dimension events: {} (probability {})",
        aggregates.full_dim_events, aggregates.full_dim_probability
    );
    println!(
        "two-dimension events: {} (probability {})",
        aggregates.two_dim_events, aggregates.two_dim_probability
    );
    if let Some(flexible) = &report.flexible {
        println!(
            "flexible aggregate: {} over {} output pairs",
            events_over_total(flexible.success_events, &flexible.success),
            flexible.slices.len()
        );
    }
    let counts = &report.counts_number_resolved;
    println!(
        "signatures (number-resolved, all arms): {} total, {} coincident, {} successful",
        counts.total, counts.coincidence, counts.success
    );
}

fn summarize_float(report: &HeraldReport<f64>) {
    let aggregates = &report.aggregates;
    let dim = report.manifest.config.dim;
    println!(
        "{} aggregate: {} events, probability {}",
        HeraldClass::Swap { dim },
        aggregates.success_events,
        aggregates.success
    );
    println!("coincidence: {}", aggregates.coincidence);
    println!("conditional success: {}", aggregates.conditional_success);
    println!(
        "full-dimension events: {} (probability {})",
        aggregates.full_dim_events, aggregates.full_dim_probability
    );
    println!(
        "two-dimension events: {} (probability {})",
        aggregates.two_dim_events, aggregates.two_dim_probability
    );
    if let Some(flexible) = &report.flexible {
        println!(
            "flexible aggregate: {} events, probability {} over {} output pairs",
            flexible.success_events,
            flexible.success,
            flexible.slices.len()
        );
    }
    let counts = &report.counts_number_resolved;
    println!(
        "signatures (number-resolved, all arms): {} total, {} coincident, {} successful",
        counts.total, counts.coincidence, counts.success
    );
}

/// Renders an aggregate as "events/denominator" when every counted event
/// carries the same probability, falling back to the reduced fraction.
fn events_over_total(events: usize, probability: &Rational) -> String {
    if events == 0 || probability.is_zero() {
        return "0".to_string();
    }
    let per = Rational::new(events as u64, 1u64).div(probability);
    if per.denom() == &BigInt::from(1) {
        format!("{events}/{}", per.numer())
    } else {
        probability.to_string()
    }
}

fn write_reports<P: Serialize + Display>(
    report: &HeraldReport<P>,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let Some(dir) = out else {
        return Ok(());
    };
    fs::create_dir_all(dir)
        .map_err(|err| Failure::BadInput(format!("cannot create {}: {err}", dir.display())))?;
    let json_path = dir.join("report.json");
    let mut json = report.to_json_pretty()?;
    json.push('\n');
    fs::write(&json_path, json)
        .map_err(|err| Failure::BadInput(format!("cannot write {}: {err}", json_path.display())))?;
    let csv_path = dir.join("report.csv");
    fs::write(&csv_path, report.to_csv())
        .map_err(|err| Failure::BadInput(format!("cannot write {}: {err}", csv_path.display())))?;
    println!("wrote: {}", json_path.display());
    println!("wrote: {}", csv_path.display());
    Ok(())
}

fn cmd_herald(args: &HeraldArgs) -> Result<(), Failure> {
    let config = resolve_config(&args.config)?;
    let pattern = DetectionPattern::parse(&args.pattern, config.detector)?;
    let circuit = config.circuit()?;
    let detected = circuit.detected_set();
    let input = config.input_state::<Amplitude>()?;
    let post = apply_circuit(&input, &circuit)?;
    println!("pattern: {pattern}");
    println!("model: {}", detector_token(config.detector));
    let outcomes = enumerate_outcomes(&post, &detected, config.detector)?;
    let Some(outcome) = outcomes.into_iter().find(|o| o.pattern == pattern) else {
        println!("probability: 0");
        println!("zero probability: no surviving amplitude produces this pattern");
        return Ok(());
    };
    let classified = classify(&outcome, &config)?;
    println!(
        "probability: {} ({})",
        outcome.probability,
        outcome.probability.to_f64()
    );
    println!("class: {}", classified.class);
    println!("coincident fraction: {}", classified.coincident_fraction);
    println!("fidelity to target: {}", classified.fidelity);
    match &classified.herald {
        Some(herald) => {
            match numeric_render(herald) {
                Ok(rendered) => println!("heralded state: {rendered}"),
                Err(_) => println!("heralded state: {}", term_listing(herald)),
            }
            if let Ok(rendered) = hyper_render(herald) {
                println!("hyper notation: {rendered}");
            }
        }
        None => println!("heralded state: incoherent mixture across detector signatures"),
    }
    Ok(())
}

/// Plain term-by-term rendering for states outside the signed-ket shape.
fn term_listing(state: &PureState<Amplitude>) -> String {
    let terms: Vec<String> = state
        .terms()
        .map(|(occ, amp)| format!("({amp})·{}", occ_text(occ)))
        .collect();
    terms.join(" + ")
}

fn occ_text(occ: &OccupationVector) -> String {
    let mut parts = Vec::new();
    for (cell, count) in occ.cells() {
        for _ in 0..*count {
            parts.push(cell.to_string());
        }
    }
    format!("|{}⟩", parts.join(","))
}

fn cmd_decay(args: &DecayArgs) -> Result<(), Failure> {
    let etas = parse_rational_values(&args.eta).map_err(Failure::BadInput)?;
    let counts = parse_u32_values(&args.n).map_err(Failure::BadInput)?;
    let mut csv = String::from("eta,n,fidelity\n");
    let mut last = Rational::one();
    for eta in &etas {
        for n in &counts {
            last = fidelity_decay(eta, *n)?;
            csv.push_str(&format!(
                "{},{},{}\n",
                decimal_string(eta),
                n,
                decimal_string(&last)
            ));
        }
    }
    if etas.len() == 1 && counts.len() == 1 {
        println!("{}", decimal_string(&last));
    } else {
        print!("{csv}");
    }
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir)
            .map_err(|err| Failure::BadInput(format!("cannot create {}: {err}", dir.display())))?;
        let path = dir.join("decay.csv");
        fs::write(&path, &csv)
            .map_err(|err| Failure::BadInput(format!("cannot write {}: {err}", path.display())))?;
        println!("wrote: {}", path.display());
    }
    Ok(())
}
