//! The `gwtower` binary: caching, report files and exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn gwtower(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gwtower"))
        .args(args)
        .env("GW_CACHE", cache)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn warm_cache_does_no_matrix_work() {
    let dir = tempfile::tempdir().unwrap();
    let cold = gwtower(dir.path(), &["e2", "--m", "2..5", "--stats"]);
    assert_eq!(cold.status.code(), Some(0), "{}", stderr(&cold));
    assert!(!stderr(&cold).contains("eliminations: 0"));
    let warm = gwtower(dir.path(), &["e2", "--m", "2..5", "--stats"]);
    assert_eq!(warm.status.code(), Some(0));
    assert!(stderr(&warm).contains("eliminations: 0"), "{}", stderr(&warm));
    assert_eq!(cold.stdout, warm.stdout);
    let lines: Vec<serde_json::Value> = String::from_utf8(warm.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 4);
    assert!(lines.iter().all(|r| r["match"] == "integral" && r["experimental"] == false));
}

#[test]
fn corrupt_entries_are_recomputed_with_a_warning() {
    let dir = tempfile::tempdir().unwrap();
    let first = gwtower(dir.path(), &["chord", "--m", "4"]);
    for entry in std::fs::read_dir(dir.path()).unwrap() {
        std::fs::write(entry.unwrap().path(), b"garbage").unwrap();
    }
    let second = gwtower(dir.path(), &["chord", "--m", "4", "--stats"]);
    assert_eq!(second.status.code(), Some(0));
    assert!(stderr(&second).contains("corrupt entry"), "{}", stderr(&second));
    assert!(!stderr(&second).contains("eliminations: 0"));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn out_directory_gets_one_file_per_column() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("reports");
    let o = gwtower(&dir.path().join("cache"), &["e2", "--m", "2..5", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let mut names: Vec<String> = std::fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    assert_eq!(names, ["e2-m2.json", "e2-m3.json", "e2-m4.json", "e2-m5.json"]);
}

#[test]
fn csv_reports() {
    let dir = tempfile::tempdir().unwrap();
    let o = gwtower(dir.path(), &["e2", "--m", "3", "--format", "csv"]);
    let text = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("m,convention,"));
    assert!(rows[1].starts_with("3,graded-symmetric,false,") && rows[1].ends_with(",integral"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| gwtower(dir.path(), args).status.code();
    assert_eq!(code(&["e2", "--m", "3"]), Some(0));
    assert_eq!(code(&["e2", "--m", "5", "--convention", "classical"]), Some(0));
    assert_eq!(code(&["config-check", "--samples", "20", "--tol", "1e-15"]), Some(2));
    assert_eq!(code(&["e2", "--m", "9"]), Some(4));
    assert_eq!(code(&["config-check", "--knot", "/does/not/exist.json"]), Some(4));
    assert_eq!(code(&["frobnicate"]), Some(4));
    assert_eq!(code(&["--time-limit", "0.001", "chord", "--m", "6", "--sparse", "--no-cache"]), Some(3));
}

#[test]
fn config_check_with_a_knot() {
    let dir = tempfile::tempdir().unwrap();
    let knot = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/trefoil.json");
    let o = gwtower(dir.path(), &["config-check", "--knot", knot, "--samples", "100"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("check,seed,samples,max_error,tolerance,status\n"));
    assert!(text.contains("\naction.equivariance,42,100,"));
    assert!(text.contains("\nknot.validation,"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn reports_ignore_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let a = gwtower(dir.path(), &["--no-cache", "--threads", "1", "e2", "--m", "2..5"]);
    let b = gwtower(dir.path(), &["--no-cache", "--threads", "4", "e2", "--m", "2..5"]);
    assert_eq!(a.stdout, b.stdout);
    let a = gwtower(dir.path(), &["--threads", "1", "config-check", "--samples", "100"]);
    let b = gwtower(dir.path(), &["--threads", "3", "config-check", "--samples", "100"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn gc_removes_foreign_entries() {
    let dir = tempfile::tempdir().unwrap();
    gwtower(dir.path(), &["chord", "--m", "3"]);
    std::fs::write(
        dir.path().join("chord-old.json"),
        br#"{"version":"0000","kind":"chord","params":{},"value":null}"#,
    )
    .unwrap();
    let o = gwtower(dir.path(), &["cache", "gc"]);
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "{\"removed\":1,\"kept\":1}\n");
    assert!(!dir.path().join("chord-old.json").exists());
}
