use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

/// Runs the binary from the crate directory so fixture paths in the config
/// echo stay relative and golden files stay stable.
fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_landauer"))
        .args(args)
        .current_dir(crate_dir())
        .env_remove("LANDAUER_MAX_WIDTH")
        .output()
        .expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_landauer"))
        .args(args)
        .current_dir(crate_dir())
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn ok_json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    json_of(&out)
}

/// Compares against `tests/golden/<name>.json` with `tool_version` removed.
/// Set `UPDATE_GOLDEN=1` to rewrite the file.
fn golden(name: &str, mut v: Value) {
    assert!(v["tool_version"].is_string());
    v.as_object_mut().unwrap().remove("tool_version");
    let path = crate_dir().join("tests/golden").join(format!("{name}.json"));
    let rendered = serde_json::to_string_pretty(&v).unwrap() + "\n";
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, &rendered).unwrap();
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(rendered, expected, "golden mismatch for {name}");
}

#[test]
fn golden_bounds() {
    golden(
        "bounds",
        ok_json(&["bounds", "--s-file", "tests/fixtures/s64.txt", "--x-file", "tests/fixtures/x64.txt", "--codec", "xor"]),
    );
}

#[test]
fn golden_bounds_zeros() {
    golden("bounds_zeros", ok_json(&["bounds", "--s-file", "tests/fixtures/zeros64.txt"]));
}

#[test]
fn golden_clausius() {
    golden(
        "clausius",
        ok_json(&["clausius", "--n", "6", "--w", "1/2", "--delta", "1/3", "--circuits", "20", "--seed", "42"]),
    );
}

#[test]
fn golden_prbox() {
    golden("prbox", ok_json(&["prbox", "--n", "256", "--seed", "7"]));
}

#[test]
fn golden_demon() {
    golden(
        "demon_extract_erase",
        ok_json(&[
            "demon", "--scenario", "extract-erase", "--s-file", "tests/fixtures/s64.txt", "--x-file",
            "tests/fixtures/x64.txt", "--codec", "xor",
        ]),
    );
    golden(
        "demon_xor_copy",
        ok_json(&["demon", "--scenario", "xor-copy", "--s-file", "tests/fixtures/s8.txt", "--x-file", "tests/fixtures/x8.txt"]),
    );
}

#[test]
fn golden_compile_netlist() {
    golden("compile_full_adder", ok_json(&["compile", "--netlist", "tests/fixtures/full_adder.json", "--verify"]));
}

#[test]
fn report_envelope() {
    let v = ok_json(&["--seed", "5", "--temperature", "310", "prbox", "--n", "256"]);
    assert_eq!(v["tool_version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["seed"], 5);
    assert_eq!(v["command"], "prbox");
    assert_eq!(v["config_echo"]["temperature"], 310.0);
    assert_eq!(v["config_echo"]["command"]["prbox"]["n"], 256);
    // global flags are also accepted after the subcommand
    let w = ok_json(&["prbox", "--n", "256", "--seed", "5"]);
    assert_eq!(v["report"], w["report"]);
    let other = ok_json(&["prbox", "--n", "256", "--seed", "6"]);
    assert_ne!(v["report"], other["report"]);
}

#[test]
fn temperature_scales_joules() {
    let args = ["bounds", "--s-file", "tests/fixtures/zeros64.txt"];
    let cold = ok_json(&[&["--temperature", "150"], &args[..]].concat());
    let warm = ok_json(&args);
    let lower = |v: &Value| v["report"]["intervals"][0]["joules"]["lower"].as_f64().unwrap();
    let ratio = lower(&warm) / lower(&cold);
    assert!((ratio - 2.0).abs() < 1e-12);
    assert_eq!(warm["report"]["intervals"][0]["joules"]["T"], 300.0);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["clausius", "--bogus"][..],
        &["compress", "--codec", "gzip"],
        &["--temperature", "-3", "prbox"],
        &["--report", "yaml", "prbox"],
        &["clausius", "--w", "half"],
        &["frobnicate"],
        &["compile"],
        &["demon", "--s-file", "tests/fixtures/s8.txt"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn domain_errors_exit_1_with_kind() {
    let cases: [(&[&str], &str); 6] = [
        (&["clausius", "--n", "6", "--w", "3/4", "--delta", "1/2"], "NonIntegralWeights"),
        (&["prbox", "--n", "100"], "StringTooShort"),
        (&["bounds", "--s-file", "tests/fixtures/missing.txt"], "Io"),
        (&["bounds", "--s-file", "tests/fixtures/full_adder.json"], "ParseBits"),
        (
            &["demon", "--scenario", "extract", "--s-file", "tests/fixtures/s8.txt", "--codec", "lz78", "--mode", "strict"],
            "CompressorOverflow",
        ),
        (&["compile", "--fig1", "--block", "13", "--helper", "1"], "InvalidParameter"),
    ];
    for (args, kind) in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        let v = json_of(&out);
        assert_eq!(v["error"], kind, "{args:?}");
        assert!(v["message"].as_str().is_some_and(|m| !m.is_empty()));
        assert!(v["tool_version"].is_string() && v["config_echo"].is_object());
    }
}

#[test]
fn text_errors_go_to_stderr() {
    let out = run(&["--report", "text", "prbox", "--n", "100"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error[StringTooShort]"));
}

#[test]
fn compress_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let data = "0110".repeat(40);
    let helper = "0110".repeat(30);
    let (data_path, helper_path, code_path) = (dir.path().join("d"), dir.path().join("h"), dir.path().join("c"));
    fs::write(&data_path, &data).unwrap();
    fs::write(&helper_path, &helper).unwrap();
    for codec in ["identity", "lz78", "xor"] {
        let out = run(&[
            "--report", "text", "compress", "--codec", codec, "--helper-file", s(&helper_path), "--in", s(&data_path),
        ]);
        assert_eq!(out.status.code(), Some(0));
        fs::write(&code_path, &out.stdout).unwrap();
        let back = run(&[
            "--report", "text", "decompress", "--codec", codec, "--helper-file", s(&helper_path), "--in", s(&code_path),
        ]);
        assert_eq!(back.status.code(), Some(0));
        assert_eq!(String::from_utf8_lossy(&back.stdout).trim(), data, "{codec}");
    }
}

#[test]
fn compress_reads_stdin() {
    let out = run_stdin(&["compress", "--codec", "xor"], &"0".repeat(1024));
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["report"]["code_bits"], 23);
    assert_eq!(v["report"]["input_bits"], 1024);
    let bad = run_stdin(&["decompress", "--codec", "lz78"], "10");
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(json_of(&bad)["error"], "MalformedCode");
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn compile_then_simulate() {
    let dir = tempfile::tempdir().unwrap();
    let circuit = dir.path().join("adder.json");
    let v = ok_json(&["compile", "--netlist", "tests/fixtures/full_adder.json", "--out", s(&circuit), "--toffoli-only"]);
    let report = &v["report"];
    assert_eq!(report["toffoli_only"], true);
    let width = report["width"].as_u64().unwrap() as usize;
    let inputs: Vec<usize> = serde_json::from_value(report["input_lines"].clone()).unwrap();
    let outputs: Vec<usize> = serde_json::from_value(report["output_lines"].clone()).unwrap();
    let ones: Vec<usize> = serde_json::from_value(report["const_one_lines"].clone()).unwrap();
    for x in 0..8u32 {
        let mut state = vec!['0'; width];
        for (k, &l) in inputs.iter().enumerate() {
            if (x >> (2 - k)) & 1 == 1 {
                state[l] = '1';
            }
        }
        for &l in &ones {
            state[l] = '1';
        }
        let state: String = state.into_iter().collect();
        let sim = ok_json(&["simulate", "--circuit", s(&circuit), "--input", &state]);
        let out: Vec<char> = sim["report"]["output"].as_str().unwrap().chars().collect();
        let count = x.count_ones();
        assert_eq!(out[outputs[0]] == '1', count % 2 == 1, "sum for {x:03b}");
        assert_eq!(out[outputs[1]] == '1', count >= 2, "carry for {x:03b}");
    }
    // a nonzero ancilla violates its role
    let bad = run(&["simulate", "--circuit", s(&circuit), "--input", &"1".repeat(width)]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(json_of(&bad)["error"], "BadConstantLine");
}

#[test]
fn compile_fig1_verifies() {
    let v = ok_json(&["compile", "--fig1", "--codec", "xor", "--block", "6", "--helper", "101100", "--verify"]);
    assert_eq!(v["report"]["verify"]["clean"], true);
    assert_eq!(v["report"]["verify"]["inputs_checked"], 64);
    assert_eq!(v["report"]["source"], "fig1");
    assert!(v["report"]["circuit"]["gates"].is_array());
}

#[test]
fn simulate_trajectory_and_drift() {
    let dir = tempfile::tempdir().unwrap();
    let circuit = dir.path().join("c.json");
    fs::write(
        &circuit,
        r#"{"version":1,"width":3,"line_roles":["input","input","input"],"gates":[{"kind":"toffoli","controls":[0,1],"target":2},{"kind":"fredkin","control":2,"targets":[0,1]}]}"#,
    )
    .unwrap();
    let v = ok_json(&["simulate", "--circuit", s(&circuit), "--input", "110", "--trajectory", "--drift"]);
    assert_eq!(v["report"]["output"], "111");
    assert_eq!(v["report"]["trajectory"], serde_json::json!(["110", "111", "111"]));
    assert_eq!(v["report"]["drift"]["entries"].as_array().unwrap().len(), 3);
}

#[test]
fn demon_text_report() {
    let out = run(&["--report", "text", "demon", "--scenario", "erase-extract", "--s-file", "tests/fixtures/zeros64.txt"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("command: demon"));
    assert!(text.contains("replay_restores_initial: true"));
    // lz78 codes 0^64 in 50 bits once delimited
    assert!(text.lines().any(|l| l.trim() == "ec_bits: 50"), "{text}");
    assert!(text.lines().any(|l| l.trim() == "wv_bits: 14"), "{text}");
}
