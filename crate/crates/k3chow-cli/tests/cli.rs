//! End-to-end driver tests: subcommands, exit codes, report files.

use std::path::Path;
use std::process::{Command, Output};

fn k3chow(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3chow"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, content: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path.to_string_lossy().into_owned()
}

const N1_INSTANCE: &str = r#"{
  "schema_version": 1,
  "n": 1, "k": 0, "l": 3,
  "alpha": {"product": []},
  "omega": [1, 2, 3],
  "theta": [],
  "assignment": {},
  "indices": [2, 2, 2]
}"#;

#[test]
fn verify_identity_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = k3chow(&["verify-identity", "bv0"], dir.path());
    assert!(out.status.success(), "{out:?}");
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("vanishes"));

    let bad = k3chow(&["verify-identity", "no-such-identity"], dir.path());
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn verify_instance_writes_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "inst.json", N1_INSTANCE);
    let report = dir.path().join("out.json");
    let out = k3chow(
        &[
            "verify-instance",
            &file,
            "--json-out",
            report.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = std::fs::read_to_string(&report).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed["verdict"]["status"], "certified_zero");
    assert_eq!(parsed["instance"]["n"], 1);
}

#[test]
fn hypothesis_violations_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    // omega and theta overlap.
    let bad = r#"{
      "n": 1, "k": 1, "l": 2,
      "alpha": {"product": []},
      "omega": [1, 2],
      "theta": [2],
      "assignment": {"2": 1},
      "indices": [2, 2]
    }"#;
    let file = write(dir.path(), "bad.json", bad);
    let out = k3chow(&["verify-instance", &file], dir.path());
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn malformed_json_exits_2_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "broken.json", "{\n  \"n\": oops\n}");
    let out = k3chow(&["verify-instance", &file], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 2"), "{stderr}");
}

#[test]
fn term_ceiling_makes_instances_inconclusive() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "inst.json", N1_INSTANCE);
    let out = k3chow(
        &["verify-instance", &file, "--term-ceiling", "1"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1), "{out:?}");
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("inconclusive"));
}

#[test]
fn filtration_scan_reports_indices() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "cycles.json",
        r#"{
          "cycles": [
            {"name": "pt", "points": {"1": "1"}, "cx": "-1", "max_index": 3}
          ]
        }"#,
    );
    let out = k3chow(&["filtration", &file], dir.path());
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("filtration index 1"));
}

#[test]
fn config_overrides_apply() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "cfg.toml",
        "[surface]\nns_rank = 1\ngram = [[\"4\"]]\n",
    );
    let file = write(dir.path(), "inst.json", N1_INSTANCE);
    let out = k3chow(
        &["verify-instance", &file, "--config", &cfg],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    // An unreadable config is an input error.
    let out2 = k3chow(
        &["verify-instance", &file, "--config", "missing.toml"],
        dir.path(),
    );
    assert_eq!(out2.status.code(), Some(2), "{out2:?}");
}

#[test]
fn heisenberg_check_runs() {
    let dir = tempfile::tempdir().unwrap();
    let out = k3chow(&["heisenberg-check", "--n", "1"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("full"));
    assert!(stdout.contains("closure"));
}
