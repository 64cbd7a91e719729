use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semiheat"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("spawn semiheat")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn quadratic_leading_term() {
    let dir = TempDir::new().unwrap();
    let o = run(
        &["expand", "--potential", "quadratic", "--order", "0"],
        dir.path(),
    );
    assert!(o.status.success());
    let j = read_json(&dir.path().join("upsilon_0.json"));
    let terms = j["upsilon"]["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0]["s_exp"], 1);
    let mono = &terms[0]["poly"]["terms"][0];
    assert_eq!(
        (mono["alpha"][0].as_u64(), mono["num"].as_i64()),
        (Some(2), Some(2))
    );
    assert_eq!(j["manifest"]["config"]["potential"], "quadratic");
}

#[test]
fn zero_potential_has_no_terms() {
    let dir = TempDir::new().unwrap();
    assert!(run(
        &["expand", "--potential", "zero", "--order", "2"],
        dir.path()
    )
    .status
    .success());
    for k in 0..=2 {
        let j = read_json(&dir.path().join(format!("upsilon_{k}.json")));
        assert!(j["upsilon"]["terms"].as_array().unwrap().is_empty());
    }
}

#[test]
fn linear_matches_golden() {
    let dir = TempDir::new().unwrap();
    assert!(run(
        &["expand", "--potential", "linear", "--order", "1"],
        dir.path()
    )
    .status
    .success());
    let text = std::fs::read_to_string(dir.path().join("upsilon.txt")).unwrap();
    let (manifest, body) = text.split_once('\n').unwrap();
    assert!(manifest.starts_with("# manifest: "));
    let golden = include_str!("golden/linear_k1.txt");
    assert_eq!(body, golden);
}

#[test]
fn validate_passes_by_default() {
    let dir = TempDir::new().unwrap();
    let o = run(&["validate"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let j = read_json(&dir.path().join("report.json"));
    assert_eq!(j["passed"], true);
    assert!(j["checks"].as_array().unwrap().len() >= 7);
}

#[test]
fn injected_fault_is_caught() {
    let dir = TempDir::new().unwrap();
    let o = run(&["validate", "--inject-fault", "c-table"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("rho-vs-diagonal"));
    assert_eq!(
        read_json(&dir.path().join("report.json"))["first_failure"],
        "rho-vs-diagonal"
    );
}

#[test]
fn single_hbar_is_rejected() {
    let dir = TempDir::new().unwrap();
    assert_eq!(
        run(&["oracle", "--hbar", "0.1"], dir.path()).status.code(),
        Some(1)
    );
}

#[test]
fn order_beyond_limit_is_a_resource_error() {
    let dir = TempDir::new().unwrap();
    assert_eq!(
        run(&["expand", "--order", "4"], dir.path()).status.code(),
        Some(3)
    );
}

#[test]
fn unknown_config_field_is_rejected() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("job.json");
    std::fs::write(&cfg, r#"{"command": "expand", "ordr": 2}"#).unwrap();
    let o = run(
        &["--config", cfg.to_str().unwrap()],
        &dir.path().join("out"),
    );
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn config_file_and_flag_override() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("job.json");
    std::fs::write(
        &cfg,
        r#"{"command": "expand", "potential": "zero", "order": 0}"#,
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = run(
        &["--config", cfg.to_str().unwrap(), "--potential", "linear"],
        &out,
    );
    assert!(o.status.success());
    let j = read_json(&out.join("upsilon_0.json"));
    assert_eq!(j["manifest"]["config"]["potential"], "linear");
    assert!(!out.join("upsilon_1.json").exists());
}

#[test]
fn reruns_are_identical() {
    let dir = TempDir::new().unwrap();
    for cmd in ["symbols", "invariants", "detect"] {
        let out = dir.path().join(cmd);
        assert!(run(&[cmd], &out).status.success());
        let first: Vec<_> = std::fs::read_dir(&out)
            .unwrap()
            .map(|e| {
                let p = e.unwrap().path();
                (p.clone(), std::fs::read(&p).unwrap())
            })
            .collect();
        assert!(run(&[cmd], &out).status.success());
        for (p, bytes) in first {
            assert_eq!(std::fs::read(&p).unwrap(), bytes, "{}", p.display());
        }
    }
}

#[test]
fn command_flag_matches_positional() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert!(run(&["--command", "expand", "--order", "0"], &a)
        .status
        .success());
    assert!(run(&["expand", "--order", "0"], &b).status.success());
    let body = |d: &Path| {
        let t = std::fs::read_to_string(d.join("upsilon.txt")).unwrap();
        t.split_once('\n').unwrap().1.to_string()
    };
    assert_eq!(body(&a), body(&b));
    assert_eq!(
        run(&["expand", "--command", "symbols"], &a).status.code(),
        Some(1)
    );
    assert_eq!(run(&["expand", "--dim", "two"], &a).status.code(), Some(1));
}
