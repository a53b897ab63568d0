use std::path::Path;
use std::process::{Command, Output};

fn bianchi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bianchi"))
        .args(args)
        .output()
        .unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("run.cfg");
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn error_json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stderr).unwrap()
}

#[test]
fn success_writes_csv_to_stdout() {
    let o = bianchi(&["eval-eisenstein"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,y,r,t,re,im,abs,norm_cutoff,terms"));
    assert_eq!(lines.count(), 1);
    assert!(o.stderr.is_empty());
}

#[test]
fn out_directory_receives_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = bianchi(&["sweep", "aggregate", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let names: Vec<_> = std::fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    assert!(names.len() >= 2, "{names:?}");
}

#[test]
fn usage_errors_exit_two() {
    let o = bianchi(&["verify", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_json(&o)["error"], "usage");

    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[field]\nD = -1\nbogus = 3\n");
    let o = bianchi(&["eval-eisenstein", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    let e = error_json(&o);
    assert_eq!(e["exit_code"], 2);
    assert!(e["message"].as_str().unwrap().contains("line 3"), "{e}");

    let cfg = write_config(dir.path(), "[field]\nD = -5\n");
    assert_eq!(
        bianchi(&["eval-eisenstein", "--config", &cfg])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn missing_config_exits_one() {
    let o = bianchi(&["verify", "q1", "--config", "/nonexistent/run.cfg"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(error_json(&o)["error"], "io");
}

#[test]
fn out_of_window_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[eisenstein]\npoints = 0 0 500\n");
    let o = bianchi(&["eval-eisenstein", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(error_json(&o)["error"], "window");
    assert!(o.stdout.is_empty());
}

#[test]
fn failed_verification_exits_five_with_report() {
    let o = bianchi(&["verify", "mellin", "--format", "json"]);
    assert_eq!(o.status.code(), Some(5));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["passed"], false);
    assert_eq!(error_json(&o)["error"], "verification-failure");
}

#[test]
fn ingest_requires_a_path() {
    let o = bianchi(&["ingest-coefficients"]);
    assert_eq!(o.status.code(), Some(2));
}
