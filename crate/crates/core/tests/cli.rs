use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pantsgraph")).args(args).current_dir(cwd).output().unwrap()
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn farey_suite_passes_with_the_default_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["verify", "farey"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("verify farey: all checks passed"));
    let table = fixture("associations.json");
    let o = run(&["verify", "farey", "--association-table", table.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn corrupted_association_table_fails_with_counterexamples() {
    let dir = tempfile::tempdir().unwrap();
    let table = fixture("corrupted_associations.json");
    let o = run(&["verify", "farey", "--association-table", table.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("FAIL associations"));
    let file = dir.path().join("counterexamples-farey.json");
    let v: Value = serde_json::from_slice(&std::fs::read(&file).unwrap()).unwrap();
    assert!(!v.to_string().is_empty());
    assert!(v.to_string().contains("associations"));

    let explicit = dir.path().join("ce.json");
    let o = run(
        &[
            "verify",
            "farey",
            "--association-table",
            table.to_str().unwrap(),
            "--counterexamples",
            explicit.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(explicit.exists());
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["verify", "bogus"][..],
        &["frobnicate"],
        &["ball", "--surface", "0,5", "--weight-bound", "50"],
        &["ball", "--surface", "0,5", "--radius", "9"],
        &["ball", "--surface", "2,0"],
        &["ball", "--surface", "five"],
        &["ball", "--surface", "0,5", "--seed", "1,2;3"],
    ] {
        let o = run(args, dir.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = run(&["--help"], dir.path());
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn caps_can_be_overridden() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["curves", "--surface", "1,1", "--weight-bound", "41", "--override-caps"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["curves"].as_array().unwrap().len() > 100);
}

#[test]
fn ball_writes_identical_json_and_dot() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &str| -> Vec<String> {
        ["ball", "--surface", "1,2", "--weight-bound", "4", "--radius", "2", "--jobs", "2", "--out", out]
            .map(String::from)
            .to_vec()
    };
    for out in ["a.json", "b.json"] {
        let a = args(out);
        let o = run(&a.iter().map(String::as_str).collect::<Vec<_>>(), dir.path());
        assert_eq!(o.status.code(), Some(0));
    }
    let a = std::fs::read(dir.path().join("a.json")).unwrap();
    assert_eq!(a, std::fs::read(dir.path().join("b.json")).unwrap());
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert!(v.is_object());
    let dot = std::fs::read_to_string(dir.path().join("a.dot")).unwrap();
    assert!(dot.starts_with("graph pants {"));
    assert_eq!(dot, std::fs::read_to_string(dir.path().join("b.dot")).unwrap());

    let stdout_a = run(&["cells", "--surface", "0,5", "--weight-bound", "3", "--radius", "2"], dir.path());
    let stdout_b =
        run(&["cells", "--surface", "0,5", "--weight-bound", "3", "--radius", "2", "--jobs", "1"], dir.path());
    assert_eq!(stdout_a.stdout, stdout_b.stdout);
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"surface": "0,5", "weight_bound": 3, "radius": 1}"#).unwrap();
    let from_file = run(&["ball", "--config", "run.json"], dir.path());
    assert_eq!(from_file.status.code(), Some(0));
    let flagged = run(&["ball", "--config", "run.json", "--radius", "2"], dir.path());
    let direct = run(&["ball", "--surface", "0,5", "--weight-bound", "3", "--radius", "2"], dir.path());
    assert_eq!(flagged.stdout, direct.stdout);
    assert_ne!(flagged.stdout, from_file.stdout);

    std::fs::write(&cfg, r#"{"surface": "0,5", "colour": "blue"}"#).unwrap();
    assert_eq!(run(&["ball", "--config", "run.json"], dir.path()).status.code(), Some(2));
}

#[test]
fn verify_report_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["verify", "charts", "--chart-bound", "8", "--out", "charts.json"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: Value = serde_json::from_slice(&std::fs::read(dir.path().join("charts.json")).unwrap()).unwrap();
    assert_eq!(v["report"]["passed"], Value::Bool(true));
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn twice_punctured_torus_has_no_pentagons() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["verify", "pentagons", "--surface", "1,2", "--weight-bound", "12", "--radius", "3"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("0 pentagons found"));
}
