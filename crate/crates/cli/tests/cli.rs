use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use plap_core::io::{
    read_field_csv, read_profile_csv, read_scan_csv, write_field_csv, write_profile_csv,
    write_scan_csv,
};
use serde_json::Value;
use tempfile::TempDir;

const LOGISTIC: &str = "[nonlinearity]\nbreakpoints = [0.0, 2.0]\npieces = [[0.0, 1.0, -1.0]]\n";
const CUBIC: &str = "[nonlinearity]\nbreakpoints = [0.0, 2.0]\npieces = [[0.0, 1.0, 0.0, -1.0]]\n";

fn plap(dir: &TempDir, config: &str, extra: &[&str]) -> (Output, PathBuf) {
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, config).unwrap();
    let out = dir.path().join("out");
    let output = Command::new(env!("CARGO_BIN_EXE_plap"))
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .args(extra)
        .output()
        .unwrap();
    (output, out)
}

fn run_ok(config: &str) -> (TempDir, PathBuf) {
    let dir = TempDir::new().unwrap();
    let (output, out) = plap(&dir, config, &[]);
    assert!(
        output.status.success(),
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
    (dir, out)
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

#[test]
fn classify_finds_the_periodic_level_of_t_minus_one() {
    let (_dir, out) = run_ok(
        "command = \"classify\"\np = 2.0\n[nonlinearity]\nbreakpoints = [0.0, 4.0]\npieces = [[-1.0, 1.0]]\n",
    );
    let report = json(&out.join("classify.json"));
    assert_eq!(report["zero_sets"]["pf"], 2.0);
    let periodic = report["entries"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["kind"] == "periodic")
        .unwrap();
    let t_star = periodic["half_period"].as_f64().unwrap();
    assert!((t_star - std::f64::consts::PI).abs() <= 1e-6, "{t_star}");
    assert_eq!(report["outside_hypotheses"], false);
}

#[test]
fn profile_of_the_cubic_starts_at_the_boundary_slope() {
    let (_dir, out) = run_ok(&format!(
        "command = \"profile\"\np = 2.0\nt_max = 8.0\nn = 257\n{CUBIC}"
    ));
    let csv = fs::read(out.join("profile_1.csv")).unwrap();
    let rows = read_profile_csv(csv.as_slice()).unwrap();
    assert_eq!(rows.len(), 257);
    assert_eq!((rows[0].t, rows[0].u), (0.0, 0.0));
    assert!(
        (rows[0].du - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-8,
        "{}",
        rows[0].du
    );
    let tanh_gap = rows
        .iter()
        .map(|r| (r.u - (r.t / 2f64.sqrt()).tanh()).abs())
        .fold(0.0, f64::max);
    assert!(tanh_gap <= 1e-6, "{tanh_gap}");

    let mut again = Vec::new();
    write_profile_csv(&mut again, &rows).unwrap();
    assert_eq!(again, csv);

    let meta = json(&out.join("profile.json"));
    let entry = &meta["profiles"][0];
    assert_eq!(entry["file"], "profile_1.csv");
    assert!(entry["max_first_integral_residual"].as_f64().unwrap() <= 1e-9);
    let svg = fs::read_to_string(out.join("profile.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("<polyline"));
}

#[test]
fn audit_reports_the_failed_growth_condition() {
    let dir = TempDir::new().unwrap();
    let config = "command = \"audit\"\np = 2.0\nN = 5\n[nonlinearity]\nbreakpoints = [0.0, 2.0]\npieces = [[0.0, 0.0, 0.0, 1.0, -1.0]]\n";
    let (output, out) = plap(&dir, config, &[]);
    assert_eq!(output.status.code(), Some(0));
    let report = json(&out.join("audit.json"));
    assert_eq!(report["conditions"]["(iii)"]["status"], "fails");
    assert_eq!(report["conditions"]["(i)"]["status"], "holds");
    assert_eq!(report["gamma"], 2.0);
    assert_eq!(report["all_hold"], false);
}

#[test]
fn ball_scan_writes_a_round_tripping_table() {
    let (_dir, out) = run_ok(&format!(
        "command = \"ball\"\np = 2.0\nN = 2\nr_list = [2.0, 10.0]\neps = 0.5\nJ = 128\n{LOGISTIC}"
    ));
    let csv = fs::read(out.join("scan.csv")).unwrap();
    let rows = read_scan_csv(csv.as_slice()).unwrap();
    assert_eq!(rows.len(), 2);
    let mut again = Vec::new();
    write_scan_csv(&mut again, &rows).unwrap();
    assert_eq!(again, csv);
    let summary = json(&out.join("ball.json"));
    assert_eq!(summary["R0"], 10.0);
    assert_eq!(summary["rho"], 1.0);
    assert_eq!(
        summary["hypotheses"]["conditions"]["(i)"]["status"],
        "holds"
    );
}

#[test]
fn strip_outputs_are_byte_identical_across_runs() {
    let config = format!(
        "command = \"strip\"\np = 2.0\nW = 4.0\nH = 3.0\nnx = 33\nny = 33\ninit = \"random\"\nseed = 3\n{CUBIC}"
    );
    let (_a, out_a) = run_ok(&config);
    let (_b, out_b) = run_ok(&config);
    let (first, second) = (snapshot(&out_a), snapshot(&out_b));
    let names: Vec<&str> = first.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names, ["field.csv", "strip.json", "strip.svg"]);
    assert_eq!(first, second);

    let csv = fs::read(out_a.join("field.csv")).unwrap();
    let rows = read_field_csv(csv.as_slice()).unwrap();
    assert_eq!(rows.len(), 33 * 33);
    let mut again = Vec::new();
    write_field_csv(&mut again, &rows).unwrap();
    assert_eq!(again, csv);

    let summary = json(&out_a.join("strip.json"));
    assert_eq!(summary["init"]["seed"], 3);
    assert!(summary["symmetry_deviation"].as_f64().unwrap() <= 1e-4);
}

#[test]
fn seed_flag_overrides_the_config() {
    let dir = TempDir::new().unwrap();
    let config = format!(
        "command = \"strip\"\np = 2.0\nW = 4.0\nH = 3.0\nnx = 33\nny = 33\ninit = \"random\"\nseed = 3\n{CUBIC}"
    );
    let (output, out) = plap(&dir, &config, &["--seed", "11"]);
    assert!(output.status.success());
    assert_eq!(json(&out.join("strip.json"))["init"]["seed"], 11);
}

#[test]
fn exit_codes_follow_the_failure_kind() {
    let cases = [
        // f(0) < 0 cannot be truncated for the ball problem.
        ("command = \"ball\"\np = 2.0\nN = 2\nr_list = [2.0]\n[nonlinearity]\nbreakpoints = [0.0, 2.0]\npieces = [[-1.0, 1.0]]\n".to_string(), 2, "f(0)"),
        (format!("command = \"classify\"\np = 0.5\n{LOGISTIC}"), 1, "p must exceed 1, got 0.5"),
        (format!("command = \"strip\"\np = 2.0\nW = 4.0\nH = 3.0\nnx = 9\nny = 9\nrho = 3.0\n{CUBIC}"), 1, "below rho = 3"),
        (format!("command = \"ball\"\np = 2.0\nN = 2\nr_list = [1.0, 2.0]\neps = 0.001\nJ = 128\n{LOGISTIC}"), 3, "no radius"),
        ("command = \"classify\"\np = 2.0\n".to_string(), 1, "nonlinearity"),
    ];
    for (config, code, needle) in cases {
        let dir = TempDir::new().unwrap();
        let (output, _) = plap(&dir, &config, &[]);
        let stderr = String::from_utf8_lossy(&output.stderr);
        assert_eq!(output.status.code(), Some(code), "{config}\n{stderr}");
        assert!(stderr.contains(needle), "{stderr}");
    }
}

#[test]
fn output_directory_is_required() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, format!("command = \"classify\"\np = 2.0\n{LOGISTIC}")).unwrap();
    let output = Command::new(env!("CARGO_BIN_EXE_plap"))
        .arg("--config")
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));

    fs::write(
        &cfg,
        format!(
            "command = \"classify\"\np = 2.0\noutput_dir = {:?}\n{LOGISTIC}",
            dir.path().join("o")
        ),
    )
    .unwrap();
    let output = Command::new(env!("CARGO_BIN_EXE_plap"))
        .arg("--config")
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(output.status.success());
    assert!(dir.path().join("o/classify.json").exists());
}
