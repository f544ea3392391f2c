use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn mirror_zeta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mirror-zeta"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_lines(bytes: &[u8]) -> Vec<Value> {
    String::from_utf8_lossy(bytes)
        .lines()
        .filter(|l| l.starts_with('{'))
        .map(|l| serde_json::from_str(l).expect("JSON line"))
        .collect()
}

fn read_lines(path: &Path) -> Vec<Value> {
    json_lines(&fs::read(path).expect("output file"))
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn count_elliptic_family() {
    let out = mirror_zeta(&[
        "count", "--n", "2", "--p", "7", "--lambda", "all", "--method", "both",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let rows = json_lines(&out.stdout);
    assert_eq!(rows.len(), 7);
    for row in &rows {
        assert_eq!(row["schema"], "count/1");
        assert_eq!(row["method"], "both");
    }
    assert_eq!(rows[0]["lambda_dlog"], Value::Null);
}

#[test]
fn count_over_extensions() {
    let out = mirror_zeta(&[
        "count", "--n", "3", "--p", "2", "--k", "1,2,3", "--lambda", "zero",
    ]);
    assert_eq!(code(&out), 0);
    let ks: Vec<String> = json_lines(&out.stdout)
        .iter()
        .map(|r| r["k"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(ks, ["1", "2", "3"]);
}

#[test]
fn missing_dimension_is_a_usage_error() {
    let out = mirror_zeta(&["count", "--p", "5"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn bad_lambda_is_a_configuration_error() {
    let out = mirror_zeta(&["count", "--n", "2", "--p", "5", "--lambda", "4"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn congruences_pass_and_are_summarised() {
    let dir = TempDir::new().unwrap();
    let out_dir = dir.path().to_str().unwrap();
    let out = mirror_zeta(&[
        "--out",
        out_dir,
        "congruence",
        "--n",
        "2",
        "--p",
        "7",
        "--k",
        "1,2",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let rows = read_lines(&dir.path().join("congruence.jsonl"));
    assert_eq!(rows.len(), 14);
    assert!(rows.iter().all(|r| r["pass"] == true));
}

#[test]
fn smooth_elliptic_zeta() {
    let dir = TempDir::new().unwrap();
    let out_dir = dir.path().to_str().unwrap();
    let out = mirror_zeta(&[
        "--out", out_dir, "zeta", "--n", "2", "--p", "5", "--lambda", "3",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stderr);
    assert!(text.contains("P = 1 - 3T + 5T^2"), "{text}");
    assert!(text.contains("R_2 = 1"));
    let x: Value =
        serde_json::from_slice(&fs::read(dir.path().join("zeta_X.json")).unwrap()).unwrap();
    let y: Value =
        serde_json::from_slice(&fs::read(dir.path().join("zeta_Y.json")).unwrap()).unwrap();
    assert_eq!(x["numerator_coeffs"], y["numerator_coeffs"]);
}

#[test]
fn singular_member_keeps_q_and_counts() {
    let out = mirror_zeta(&["zeta", "--n", "2", "--p", "5", "--lambda", "1"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stderr);
    assert!(text.contains("singular member"), "{text}");
    assert!(text.contains("Q = "));
    assert!(text.contains("#X: 7, 75"));
}

#[test]
fn quartic_beyond_tier_exits_with_cap_code() {
    let out = mirror_zeta(&["zeta", "--n", "4", "--p", "3", "--lambda", "1"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn slope_of_the_fermat_quartic_and_its_mirror() {
    let dir = TempDir::new().unwrap();
    let out_dir = dir.path().to_str().unwrap();
    let zeta = mirror_zeta(&[
        "--out", out_dir, "zeta", "--n", "3", "--p", "5", "--lambda", "zero",
    ]);
    assert_eq!(code(&zeta), 0);
    let input = dir.path().join("zeta_run.json");
    let slope_dir = dir.path().join("slope");
    let out = mirror_zeta(&[
        "--out",
        slope_dir.to_str().unwrap(),
        "slope",
        "--input",
        input.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let rows = read_lines(&slope_dir.join("slope.jsonl"));
    let x = rows.iter().find(|r| r["variety"] == "X").unwrap();
    assert_eq!(x["rendered"], "1/((1 - T)^2(1 - uT)^20(1 - u^2T)^2)");
    assert_eq!(x["euler"], 24);
    assert!(rows.iter().all(|r| r["functional_equation"] == true));
    let mirror = read_lines(&slope_dir.join("slope_mirror.jsonl"));
    assert_eq!(mirror.len(), 1);
}

#[test]
fn missing_slope_input_is_a_configuration_error() {
    let out = mirror_zeta(&["slope", "--input", "no/such/file.jsonl"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn gauss_table_has_a_header_and_one_row_per_index() {
    let out = mirror_zeta(&["gauss", "--p", "5", "--precision", "8"]);
    assert_eq!(code(&out), 0);
    let lines = json_lines(&out.stdout);
    assert_eq!(lines[0]["schema"], "gauss-table/1");
    assert_eq!(lines.len(), 1 + 5);
    assert_eq!(lines[1]["coords"][0], "4");
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("config.json");
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn sweep_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        dir.path(),
        r#"{"n_list": [2, 3], "prime_list": [2, 3], "r_list": [1, 2]}"#,
    );
    let run = |name: &str| {
        let out_dir = dir.path().join(name);
        let out = mirror_zeta(&[
            "--config",
            &config,
            "--out",
            out_dir.to_str().unwrap(),
            "sweep",
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        out_dir
    };
    let (a, b) = (run("a"), run("b"));
    for file in [
        "counts.jsonl",
        "congruence.jsonl",
        "zeta.jsonl",
        "slope.jsonl",
        "summary.json",
        "manifest.json",
    ] {
        assert_eq!(
            fs::read(a.join(file)).unwrap(),
            fs::read(b.join(file)).unwrap(),
            "{file}"
        );
    }
    assert!(a.join("timing.json").exists());
    let summary: Value =
        serde_json::from_slice(&fs::read(a.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["congruence_failures"], 0);
}

#[test]
fn empty_grid_succeeds() {
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), r#"{"n_list": []}"#);
    let out_dir = dir.path().join("out");
    let out = mirror_zeta(&[
        "--config",
        &config,
        "--out",
        out_dir.to_str().unwrap(),
        "sweep",
    ]);
    assert_eq!(code(&out), 0);
    let summary: Value =
        serde_json::from_slice(&fs::read(out_dir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["instances"], 0);
}

#[test]
fn grid_beyond_the_tier_is_refused() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        dir.path(),
        r#"{"n_list": [2], "prime_list": [5], "r_list": [1], "k_max": 9}"#,
    );
    let out_dir = dir.path().join("out");
    let out = mirror_zeta(&[
        "--config",
        &config,
        "--out",
        out_dir.to_str().unwrap(),
        "sweep",
    ]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("n=2 q=5 k=9"));
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), r#"{"dimensions": [2]}"#);
    let out = mirror_zeta(&["--config", &config, "sweep"]);
    assert_eq!(code(&out), 2);
}
