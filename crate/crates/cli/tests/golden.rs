//! End-to-end tests of the command-line tool: documented outputs, exit
//! codes, byte determinism and schema conformance.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn hdswap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hdswap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf8 stdout")
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf8 stderr")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("exit code")
}

/// Fresh per-test output directory under the cargo-managed temp root.
fn out_dir(tag: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(tag);
    if dir.exists() {
        fs::remove_dir_all(&dir).expect("clear stale directory");
    }
    dir
}

fn report_json(dir: &PathBuf) -> Value {
    let raw = fs::read_to_string(dir.join("report.json")).expect("report.json");
    serde_json::from_str(&raw).expect("valid json")
}

#[test]
fn swap_reports_the_four_target_heralds() {
    let output = hdswap(&["swap", "--dim", "4", "--detector", "threshold"]);
    assert_eq!(exit_code(&output), 0, "stderr: {}", stderr_of(&output));
    let text = stdout_of(&output);
    assert!(text.contains("SWAP_4D aggregate: 4/512"), "stdout: {text}");
    assert!(text.contains("conditional success: 1/7"), "stdout: {text}");
    assert!(text.contains("coincidence: 7/128"), "stdout: {text}");
    assert!(
        text.contains("target: (|1,2⟩-|2,1⟩+|3,4⟩-|4,3⟩)/2"),
        "stdout: {text}"
    );
}

#[test]
fn swap_reports_the_three_dimensional_census() {
    let output = hdswap(&["swap", "--dim", "3", "--variant", "a1"]);
    assert_eq!(exit_code(&output), 0, "stderr: {}", stderr_of(&output));
    let text = stdout_of(&output);
    assert!(
        text.contains("772 total, 68 coincident, 4 successful"),
        "stdout: {text}"
    );
    // The alias names the same state family as the spelled-out value.
    let spelled = hdswap(&["swap", "--dim", "3", "--variant", "hybrid-symmetric"]);
    assert_eq!(stdout_of(&spelled), text);
}

#[test]
fn float_backend_matches_exact_within_tolerance() {
    let exact_dir = out_dir("float-exact");
    let float_dir = out_dir("float-float");
    let exact = hdswap(&[
        "swap", "--dim", "4", "--out", exact_dir.to_str().unwrap(),
    ]);
    let float = hdswap(&[
        "swap", "--dim", "4", "--backend", "float", "--ancilla-phase", "0",
        "--out", float_dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&exact), 0, "stderr: {}", stderr_of(&exact));
    assert_eq!(exit_code(&float), 0, "stderr: {}", stderr_of(&float));

    let exact_report = report_json(&exact_dir);
    let float_report = report_json(&float_dir);
    let probabilities = |report: &Value| -> Vec<(String, f64)> {
        report["rows"]
            .as_array()
            .expect("rows")
            .iter()
            .map(|row| {
                (
                    row["pattern"].as_str().expect("pattern").to_owned(),
                    row["probability_f64"].as_f64().expect("probability"),
                )
            })
            .collect()
    };
    let exact_rows = probabilities(&exact_report);
    let float_rows = probabilities(&float_report);
    assert_eq!(exact_rows.len(), float_rows.len());
    for ((pattern, exact_p), (float_pattern, float_p)) in
        exact_rows.iter().zip(&float_rows)
    {
        assert_eq!(pattern, float_pattern);
        assert!(
            (exact_p - float_p).abs() < 1e-12,
            "pattern {pattern}: {exact_p} vs {float_p}"
        );
    }
    let success = |report: &Value| -> f64 {
        let value = &report["aggregates"]["success"];
        match value {
            Value::Number(number) => number.as_f64().expect("number"),
            Value::Object(wire) => {
                let num: f64 = wire["num"].as_str().expect("num").parse().expect("int");
                let den: f64 = wire["den"].as_str().expect("den").parse().expect("int");
                num / den
            }
            other => panic!("unexpected probability shape {other:?}"),
        }
    };
    assert!((success(&exact_report) - success(&float_report)).abs() < 1e-12);
}

#[test]
fn herald_shows_the_four_dimensional_state() {
    let output = hdswap(&["herald", "--pattern", "b'':3,e':1,f':4,c'':2"]);
    assert_eq!(exit_code(&output), 0, "stderr: {}", stderr_of(&output));
    let text = stdout_of(&output);
    assert!(text.contains("probability: 1/512"), "stdout: {text}");
    assert!(text.contains("class: SWAP_4D"), "stdout: {text}");
    assert!(
        text.contains("heralded state: (|1,2⟩-|2,1⟩+|3,4⟩-|4,3⟩)/2"),
        "stdout: {text}"
    );
    assert!(
        text.contains(
            "hyper notation: (|H(te),V(te)⟩-|V(te),H(te)⟩+|H(tl),V(tl)⟩-|V(tl),H(tl)⟩)/2"
        ),
        "stdout: {text}"
    );
}

#[test]
fn herald_shows_a_two_dimensional_residual() {
    let output = hdswap(&["herald", "--pattern", "b'':2,e':1,f':1,c'':2"]);
    assert_eq!(exit_code(&output), 0, "stderr: {}", stderr_of(&output));
    let text = stdout_of(&output);
    assert!(text.contains("class: SWAP_2D"), "stdout: {text}");
    assert!(
        text.contains("heralded state: (|1,2⟩-|2,1⟩)/√2"),
        "stdout: {text}"
    );
}

#[test]
fn herald_reports_forbidden_patterns_quietly() {
    let output = hdswap(&["herald", "--pattern", "b'':1,e':1,f':1,c'':1"]);
    assert_eq!(exit_code(&output), 0, "stderr: {}", stderr_of(&output));
    let text = stdout_of(&output);
    assert!(text.contains("probability: 0"), "stdout: {text}");
    assert!(text.contains("zero probability"), "stdout: {text}");
}

#[test]
fn decay_prints_documented_values() {
    for (eta, n, expected) in [
        ("1", "3", "1\n"),
        ("0.95", "5", "0.7737809375\n"),
        ("0.9", "3", "0.729\n"),
    ] {
        let output = hdswap(&["decay", "--eta", eta, "--n", n]);
        assert_eq!(exit_code(&output), 0, "stderr: {}", stderr_of(&output));
        assert_eq!(stdout_of(&output), expected, "eta={eta} n={n}");
    }
}

#[test]
fn decay_sweeps_emit_csv() {
    let output = hdswap(&["decay", "--eta", "0.9,0.95", "--n", "0..3"]);
    assert_eq!(exit_code(&output), 0, "stderr: {}", stderr_of(&output));
    let text = stdout_of(&output);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "eta,n,fidelity");
    assert_eq!(lines.len(), 9, "stdout: {text}");
    assert!(lines.contains(&"0.9,3,0.729"), "stdout: {text}");
    assert!(lines.contains(&"0.95,0,1"), "stdout: {text}");
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let first_dir = out_dir("determinism-first");
    let second_dir = out_dir("determinism-second");
    let args = ["swap", "--dim", "4", "--detector", "pnr"];
    let first = hdswap(&[&args[..], &["--out", first_dir.to_str().unwrap()]].concat());
    let second = hdswap(&[&args[..], &["--out", second_dir.to_str().unwrap()]].concat());
    assert_eq!(exit_code(&first), 0);
    assert_eq!(exit_code(&second), 0);
    for name in ["report.json", "report.csv"] {
        let first_bytes = fs::read(first_dir.join(name)).expect("first report");
        let second_bytes = fs::read(second_dir.join(name)).expect("second report");
        assert_eq!(first_bytes, second_bytes, "{name} differs between runs");
    }
}

#[test]
fn bad_input_exits_one() {
    for args in [
        &["swap", "--dim", "7"][..],
        &["swap", "--dim", "3", "--ancilla", "symmetric"],
        &["swap", "--dim", "4", "--ancilla-phase", "0.3"],
        &["herald", "--pattern", "garbage"],
        &["decay", "--eta", "1.5", "--n", "3"],
        &["decay", "--eta", "x", "--n", "3"],
        &["swap", "--no-such-flag"],
    ] {
        let output = hdswap(args);
        assert_eq!(exit_code(&output), 1, "args: {args:?}");
        assert!(!stderr_of(&output).is_empty(), "args: {args:?}");
    }
}

#[test]
fn help_and_version_exit_zero() {
    for args in [&["--help"][..], &["--version"], &["swap", "--help"]] {
        let output = hdswap(args);
        assert_eq!(exit_code(&output), 0, "args: {args:?}");
    }
}

#[test]
fn preset_runs_the_symmetric_ancilla() {
    let output = hdswap(&["swap", "--preset", "hyper4d"]);
    assert_eq!(exit_code(&output), 0, "stderr: {}", stderr_of(&output));
    let text = stdout_of(&output);
    assert!(text.contains("ancilla=symmetric"), "stdout: {text}");
    assert!(text.contains("SWAP_4D aggregate: 8/1024"), "stdout: {text}");
    assert!(text.contains("target (hyper):"), "stdout: {text}");
}

#[test]
fn flexible_sweep_triples_the_rate() {
    let output = hdswap(&["swap", "--dim", "4", "--heralds", "flexible"]);
    assert_eq!(exit_code(&output), 0, "stderr: {}", stderr_of(&output));
    let text = stdout_of(&output);
    assert!(
        text.contains("flexible aggregate: 12/512 over 3 output pairs"),
        "stdout: {text}"
    );
}

#[test]
fn reports_validate_against_the_shipped_schema() {
    let schema_path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../schema/report.schema.json");
    let schema: Value =
        serde_json::from_str(&fs::read_to_string(schema_path).expect("schema file"))
            .expect("schema parses");
    let compiled = jsonschema::JSONSchema::compile(&schema).expect("schema compiles");

    let cases: &[(&str, &[&str])] = &[
        ("schema-exact", &["swap", "--dim", "4"]),
        (
            "schema-flexible",
            &["swap", "--dim", "4", "--detector", "pnr", "--heralds", "flexible"],
        ),
        ("schema-float", &["swap", "--dim", "4", "--backend", "float"]),
        ("schema-hybrid", &["swap", "--dim", "3", "--variant", "a2"]),
        ("schema-preset", &["swap", "--preset", "hyper4d"]),
    ];
    for (tag, args) in cases {
        let dir = out_dir(tag);
        let output = hdswap(&[args, &["--out", dir.to_str().unwrap()][..]].concat());
        assert_eq!(exit_code(&output), 0, "stderr: {}", stderr_of(&output));
        let report = report_json(&dir);
        let messages: Vec<String> = match compiled.validate(&report) {
            Ok(()) => Vec::new(),
            Err(errors) => errors.map(|e| e.to_string()).collect(),
        };
        assert!(messages.is_empty(), "{tag}: schema violations: {messages:?}");
    }
}
