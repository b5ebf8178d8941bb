//! Exit-status contract and report-shape checks for the batch driver.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_simalg")
}

fn tmp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("simalg-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_config(dir: &PathBuf, text: &str) -> PathBuf {
    let path = dir.join("config.json");
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn passing_config_exits_zero_and_writes_report() {
    let dir = tmp_dir("pass");
    let config = write_config(
        &dir,
        r#"{
            "seed": 7,
            "tasks": [
                {
                    "type": "morphism",
                    "name": "id",
                    "source": { "kind": "modular-add", "modulus": 6 },
                    "map": "identity",
                    "eps": 0.0
                }
            ]
        }"#,
    );
    let out = dir.join("out");
    let status = Command::new(bin())
        .args(["run"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["overall_pass"], true);
    assert_eq!(report["tasks"][0]["status"], "pass");
    assert!(report["config_digest"].as_str().unwrap().starts_with("fnv1a64:"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn failed_verdict_exits_one() {
    let dir = tmp_dir("fail");
    // Squaring mod 6 is not a homomorphism; expect_pass defaults to true,
    // so the task fails.
    let config = write_config(
        &dir,
        r#"{
            "seed": 7,
            "tasks": [
                {
                    "type": "morphism",
                    "name": "squaring",
                    "source": { "kind": "modular-add", "modulus": 6 },
                    "map": { "tabulated": [[0,0],[1,1],[2,4],[3,3],[4,4],[5,1]] },
                    "eps": 0.0
                }
            ]
        }"#,
    );
    let out = dir.join("out");
    let status = Command::new(bin())
        .args(["run"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["tasks"][0]["status"], "fail");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn malformed_config_exits_two_with_diagnostic() {
    let dir = tmp_dir("malformed");
    let config = write_config(
        &dir,
        r#"{ "seed": 1, "tasks": [ { "type": "audit", "name": "x",
             "structure": { "kind": "no-such-kind" } } ] }"#,
    );
    let output = Command::new(bin())
        .args(["run"])
        .arg(&config)
        .arg("--out")
        .arg(dir.join("out"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("no-such-kind"), "diagnostic names the field: {stderr}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn missing_seed_is_an_error() {
    let dir = tmp_dir("seedless");
    let config = write_config(
        &dir,
        r#"{ "tasks": [ { "type": "bracket", "name": "b", "n": 2, "eps": 0.0, "t": 0.001 } ] }"#,
    );
    let status = Command::new(bin())
        .args(["run"])
        .arg(&config)
        .arg("--out")
        .arg(dir.join("out"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
    // A --seed override supplies the missing seed.
    let status = Command::new(bin())
        .args(["run"])
        .arg(&config)
        .args(["--seed", "9"])
        .arg("--out")
        .arg(dir.join("out2"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn list_kinds_prints_catalogs() {
    let output = Command::new(bin()).arg("--list-kinds").output().unwrap();
    assert!(output.status.success());
    let text = String::from_utf8_lossy(&output.stdout);
    for needle in [
        "semigroup:",
        "field:",
        "lie-algebra:",
        "multiplicative-associativity",
        "jacobi-identity",
    ] {
        assert!(text.contains(needle), "missing {needle}");
    }
}

#[test]
fn collapse_task_writes_curve_csvs() {
    let dir = tmp_dir("csv");
    let config = write_config(
        &dir,
        r#"{
            "seed": 5,
            "tasks": [
                {
                    "type": "collapse",
                    "name": "field",
                    "family": { "kind": "perturbed-field", "box": [-1.0, 1.0] },
                    "samples": 512,
                    "output": "field"
                }
            ]
        }"#,
    );
    let out = dir.join("out");
    let status = Command::new(bin())
        .args(["run"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let csv = std::fs::read_to_string(out.join("field_multiplicative-associativity.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("epsilon,max_defect,mean_defect"));
    assert_eq!(lines.count(), 8);
    std::fs::remove_dir_all(&dir).ok();
}
