use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn ergoflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ergoflow"))
        .args(args)
        .env_remove("ERGOFLOW_PRECISION")
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

#[test]
fn sample_recurrence_config_passes_and_writes_csv() {
    let out = tempfile::tempdir().unwrap();
    let config = configs_dir().join("recurrence_k2.json");
    let run = ergoflow(&[
        "recurrence",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.path().to_str().unwrap(),
    ]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stdout));
    let written: Vec<_> = std::fs::read_dir(out.path()).unwrap().map(|e| e.unwrap().path()).collect();
    assert!(written.iter().any(|p| p.extension().is_some_and(|x| x == "csv")));
}

#[test]
fn json_output_carries_config_hash() {
    let out = tempfile::tempdir().unwrap();
    let run = ergoflow(&["odometer", "--out", out.path().to_str().unwrap(), "--format", "json"]);
    assert_eq!(run.status.code(), Some(0));
    let text = std::fs::read_to_string(out.path().join("odometer.json")).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    let hash = value["config_hash"].as_str().unwrap();
    assert_eq!(hash.len(), 64);
    assert!(hash.chars().all(|c| c.is_ascii_hexdigit()));
}

#[test]
fn unreachable_hit_threshold_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "strict.json",
        r#"{"command": "recurrence", "params": {"samples": 50, "horizon": 20, "min_hits": 1000000}}"#,
    );
    let out = dir.path().join("out");
    let run = ergoflow(&[
        "recurrence",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(run.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&run.stdout).contains("FAILED"));
}

#[test]
fn unknown_field_exits_two_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "bad.json", "{\n  \"command\": \"flow\",\n  \"colour\": 3\n}");
    let run = ergoflow(&["flow", "--config", config.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(2));
    let err = String::from_utf8_lossy(&run.stderr);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn inverted_range_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "range.json",
        r#"{"command": "defects",
            "spec": {"kind": "constant", "l": 1, "lambda": "1/2", "length": 10},
            "params": {"n": 5, "m": 2}}"#,
    );
    let run = ergoflow(&[
        "defects",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(run.status.code(), Some(2));
}

#[test]
fn missing_config_file_exits_two() {
    let run = ergoflow(&["certify", "--config", "/nonexistent/ergoflow.json"]);
    assert_eq!(run.status.code(), Some(2));
}

#[test]
fn seed_flag_changes_recurrence_output() {
    let out = tempfile::tempdir().unwrap();
    let dir = |s: &str| out.path().join(s);
    let args = |seed: &'static str, d: &Path| {
        ergoflow(&["recurrence", "--seed", seed, "--format", "json", "--out", d.to_str().unwrap()])
    };
    assert_eq!(args("1", &dir("a")).status.code(), Some(0));
    assert_eq!(args("1", &dir("b")).status.code(), Some(0));
    assert_eq!(args("2", &dir("c")).status.code(), Some(0));
    let read = |d: &str| std::fs::read(dir(d).join("recurrence.json")).unwrap();
    assert_eq!(read("a"), read("b"));
    assert_ne!(read("a"), read("c"));
}
