use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bellgauge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bellgauge"))
        .args(args)
        .env_remove("BELLGAUGE_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn state_json(rows: [[f64; 4]; 4]) -> String {
    let matrix: Vec<Vec<[f64; 2]>> = rows.iter().map(|r| r.iter().map(|&x| [x, 0.0]).collect()).collect();
    serde_json::json!({ "matrix": matrix }).to_string()
}

const RHO1: [[f64; 4]; 4] = [
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 0.549027, 0.125, 0.0],
    [0.0, 0.125, 0.449798, 0.0],
    [0.0, 0.0, 0.0, 0.001175],
];

const SINGLET: [[f64; 4]; 4] = [
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 0.5, -0.5, 0.0],
    [0.0, -0.5, 0.5, 0.0],
    [0.0, 0.0, 0.0, 0.0],
];

const MIXED: [[f64; 4]; 4] = [
    [0.25, 0.0, 0.0, 0.0],
    [0.0, 0.25, 0.0, 0.0],
    [0.0, 0.0, 0.25, 0.0],
    [0.0, 0.0, 0.0, 0.25],
];

fn field(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}:")))
        .unwrap_or_else(|| panic!("no `{key}` in\n{text}"))
        .trim()
        .to_string()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn verify_paper_passes() {
    let out = bellgauge(&["verify-paper"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 6);
    assert!(text.ends_with("Santos Theorem 1 refuted: true\n"));
}

#[test]
fn verify_paper_help_documents_trace_anomaly() {
    let out = bellgauge(&["verify-paper", "--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("1.000003"));
}

#[test]
fn perturbed_verification_fails() {
    let out = bellgauge(&["verify-paper", "--perturb", "1e-2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("Santos Theorem 1 refuted: false"));
    assert!(stderr(&out).contains("chsh_max(rho1) (delta"));
}

#[test]
fn verify_paper_json_round_trips() {
    let out = bellgauge(&["verify-paper", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let checks: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(checks.as_array().unwrap().len(), 6);
    for c in checks.as_array().unwrap() {
        assert_eq!(c["pass"], true);
        assert!(c.get("check").is_some() && c.get("expected").is_some() && c.get("actual").is_some());
    }
    assert_eq!(serde_json::to_string_pretty(&checks).unwrap() + "\n", text);
}

#[test]
fn analyze_reports_rho1() {
    let dir = TempDir::new().unwrap();
    let path = write(dir.path(), "rho1.json", &state_json(RHO1));
    let out = bellgauge(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let s12: f64 = field(&text, "s12").parse().unwrap();
    let chsh: f64 = field(&text, "chsh_max").parse().unwrap();
    assert!((s12 - 0.465).abs() < 5e-4);
    assert!((chsh - 2.05699).abs() < 1e-4);
    assert_eq!(field(&text, "violates_chsh"), "true");
    assert_eq!(field(&text, "eigenvalues").split(' ').count(), 4);
}

#[test]
fn analyze_maximally_mixed() {
    let dir = TempDir::new().unwrap();
    let path = write(dir.path(), "mixed.json", &state_json(MIXED));
    let out = bellgauge(&["analyze", path.to_str().unwrap()]);
    let text = stdout(&out);
    assert_eq!(field(&text, "s12"), "0.75");
    assert_eq!(field(&text, "chsh_max"), "0");
}

#[test]
fn analyze_json_round_trips() {
    let dir = TempDir::new().unwrap();
    let path = write(dir.path(), "rho1.json", &state_json(RHO1));
    let out = bellgauge(&["analyze", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["violates_chsh"], true);
    assert_eq!(value["eigenvalues"].as_array().unwrap().len(), 4);
    assert_eq!(serde_json::to_string_pretty(&value).unwrap() + "\n", text);
}

#[test]
fn malformed_json_is_a_parse_error() {
    let dir = TempDir::new().unwrap();
    let path = write(dir.path(), "bad.json", "{\"matrix\": [[");
    let out = bellgauge(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
}

#[test]
fn invalid_states_exit_2() {
    let dir = TempDir::new().unwrap();
    let mut skew = MIXED;
    skew[0][1] = 0.1;
    let path = write(dir.path(), "skew.json", &state_json(skew));
    let out = bellgauge(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("Hermitian"));
    assert!(out.stdout.is_empty());

    let mut heavy = MIXED;
    heavy[0][0] = 0.5;
    let path = write(dir.path(), "heavy.json", &state_json(heavy));
    let out = bellgauge(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("trace"));
}

#[test]
fn renormalize_policy_accepts_small_trace_error() {
    let dir = TempDir::new().unwrap();
    let mut rows = RHO1;
    rows[3][3] += 3e-6;
    let path = write(dir.path(), "off.json", &state_json(rows));
    let p = path.to_str().unwrap();
    assert_eq!(bellgauge(&["analyze", p]).status.code(), Some(2));
    assert_eq!(bellgauge(&["analyze", p, "--trace-policy", "renormalize"]).status.code(), Some(0));
}

#[test]
fn missing_file_is_an_io_error() {
    let out = bellgauge(&["analyze", "/nonexistent/state.json"]);
    assert_eq!(out.status.code(), Some(6));
}

#[test]
fn chsh_singlet_tsirelson() {
    let dir = TempDir::new().unwrap();
    let state = write(dir.path(), "singlet.json", &state_json(SINGLET));
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let settings = serde_json::json!({
        "a": [0.0, 0.0, 1.0], "a_prime": [1.0, 0.0, 0.0],
        "b": [s, 0.0, s], "b_prime": [-s, 0.0, s],
    });
    let settings = write(dir.path(), "settings.json", &settings.to_string());
    let out = bellgauge(&["chsh", state.to_str().unwrap(), settings.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let value: f64 = field(&stdout(&out), "value").parse().unwrap();
    assert!((value + 2.0 * 2f64.sqrt()).abs() < 1e-8);

    let mixed = write(dir.path(), "mixed.json", &state_json(MIXED));
    let out = bellgauge(&["chsh", mixed.to_str().unwrap(), settings.to_str().unwrap()]);
    assert_eq!(field(&stdout(&out), "value"), "0");
}

#[test]
fn non_unit_settings_are_rejected() {
    let dir = TempDir::new().unwrap();
    let state = write(dir.path(), "singlet.json", &state_json(SINGLET));
    let settings = r#"{"a":[0,0,1.1],"a_prime":[1,0,0],"b":[1,0,0],"b_prime":[1,0,0]}"#;
    let settings = write(dir.path(), "settings.json", settings);
    let out = bellgauge(&["chsh", state.to_str().unwrap(), settings.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("`a`"));
}

#[test]
fn optimized_settings_feed_back_into_chsh() {
    let dir = TempDir::new().unwrap();
    let state = write(dir.path(), "rho1.json", &state_json(RHO1));
    let out = bellgauge(&["optimize", state.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["abs_value"].as_f64().unwrap() >= 2.056);
    let settings = write(dir.path(), "settings.json", &report["settings"].to_string());
    let out = bellgauge(&["chsh", state.to_str().unwrap(), settings.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let value: f64 = field(&stdout(&out), "abs_value").parse().unwrap();
    assert!(value >= 2.056);
}

#[test]
fn scan_around_rho1_finds_violation() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("scan.csv");
    let out = bellgauge(&[
        "scan", "--c", "0.12:0.13:3", "--p22", "0.54:0.56:3", "--p44", "0:0.002:3", "-o",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stderr(&out).contains("27 states"));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with(
        "label,p11,p22,p33,p44,c,s12,s_norm,concurrence,chsh_max,satisfies_santos,violates_chsh\n"
    ));
    assert!(!text.contains('\r'));
    assert!(csv_rows(&text)
        .iter()
        .any(|r| r[9].parse::<f64>().unwrap() >= 2.05 && r[10] == "true"));
}

#[test]
fn empty_grid_exits_4() {
    let out = bellgauge(&["scan", "--c", "0.9", "--p22", "0.9", "--p44", "0.9"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn sample_count_zero_is_usage_error() {
    assert_eq!(bellgauge(&["sample", "--count", "0"]).status.code(), Some(64));
}

#[test]
fn sample_seed_from_flag_or_environment() {
    let by_flag = bellgauge(&["sample", "--count", "5", "--seed", "17"]);
    assert_eq!(by_flag.status.code(), Some(0));
    let by_env = Command::new(env!("CARGO_BIN_EXE_bellgauge"))
        .args(["sample", "--count", "5"])
        .env("BELLGAUGE_SEED", "17")
        .output()
        .unwrap();
    assert_eq!(by_flag.stdout, by_env.stdout);
    let other = bellgauge(&["sample", "--count", "5", "--seed", "18"]);
    assert_ne!(by_flag.stdout, other.stdout);
    assert_eq!(csv_rows(&stdout(&by_flag)).len(), 5);
}

#[test]
fn sample_output_is_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = bellgauge(&["sample", "--count", "50", "--seed", "3", "-o", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn family_has_constant_entropy_and_starts_at_rho1() {
    let out = bellgauge(&["family", "--points", "11"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 11);
    for r in &rows {
        assert!((r[6].parse::<f64>().unwrap() - 0.465).abs() < 5e-4);
    }
    let s12: Vec<&str> = rows.iter().map(|r| r[6].as_str()).collect();
    assert!(s12.iter().all(|s| *s == s12[0]));
    assert_eq!(rows[0][1..6], ["0", "0.549027", "0.449798", "0.001175", "0.125"]);
    assert_eq!(rows[0][11], "true");
}

#[test]
fn unreachable_family_entropy_is_usage_error() {
    assert_eq!(bellgauge(&["family", "--entropy", "0.74"]).status.code(), Some(64));
}

#[test]
fn search_exhaustion_exits_5() {
    let out = bellgauge(&["search", "--threshold", "0.75", "--count", "1"]);
    assert_eq!(out.status.code(), Some(5));
    assert!(stderr(&out).contains("best candidate"));
}

#[test]
fn search_finds_counterexamples() {
    let out = bellgauge(&["search", "--count", "3", "--seed", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r[10] == "true" && r[11] == "true"));
}

#[test]
fn unwritable_output_exits_6() {
    let out = bellgauge(&["family", "--points", "2", "-o", "/nonexistent/dir/out.csv"]);
    assert_eq!(out.status.code(), Some(6));
}

#[test]
fn format_misuse_is_usage_error() {
    assert_eq!(bellgauge(&["verify-paper", "--format", "csv"]).status.code(), Some(64));
    assert_eq!(bellgauge(&["sample", "--count", "1", "--format", "text"]).status.code(), Some(64));
    assert_eq!(bellgauge(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(bellgauge(&["--version"]).status.code(), Some(0));
}
