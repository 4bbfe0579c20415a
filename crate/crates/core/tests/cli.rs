use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect()
}

fn alphak(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_alphak"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let seven = data("seven.txt");
    let ok = alphak(dir.path(), &["verify", "--k", "3", "--file", seven.to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout(&ok).trim(), "no zero 3x3 minor; ones=16");
    let bad = alphak(dir.path(), &["verify", "--k", "2", "--file", seven.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
    let usage = alphak(dir.path(), &["verify", "--k", "2"]);
    assert_eq!(usage.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&usage.stderr).contains("Usage"));
}

#[test]
fn solve2d_prints_value_and_caches() {
    let dir = tempfile::tempdir().unwrap();
    let o = alphak(dir.path(), &["solve2d", "--k", "2", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("alpha(2,4) = 7\n4 4\n"), "{text}");
    let cache = fs::read_to_string(dir.path().join("results.jsonl")).unwrap();
    let rec: serde_json::Value = serde_json::from_str(cache.lines().next().unwrap()).unwrap();
    assert_eq!(rec["schema"], 1);
    assert_eq!(rec["kind"], "alpha2d");
    assert_eq!(rec["value"], 7);
    assert_eq!(rec["proof_status"], "exact");

    fs::write(
        dir.path().join("results.jsonl"),
        format!("garbage line\n{cache}"),
    )
    .unwrap();
    let again = alphak(dir.path(), &["solve2d", "--k", "2", "--n", "4"]);
    assert_eq!(again.status.code(), Some(0));
    assert!(stdout(&again).starts_with("alpha(2,4) = 7 (cached)"));
    let listed = alphak(dir.path(), &["cache", "verify"]);
    assert_eq!(listed.status.code(), Some(0));
    assert!(stdout(&listed).contains("1 records, 0 failed"));
}

#[test]
fn budget_exhaustion_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let o = alphak(dir.path(), &["--budget", "0", "solve2d", "--k", "4", "--n", "9", "--no-cache"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("budget exhausted"));
}

#[test]
fn construct_writes_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let o = alphak(dir.path(), &["construct", "--family", "seven-halves", "--k", "3", "--out", "m.txt"]);
    assert_eq!(o.status.code(), Some(0));
    let m: alpha_core::BinaryMatrix = fs::read_to_string(dir.path().join("m.txt")).unwrap().parse().unwrap();
    assert_eq!(m.ones_count(), 16);
    let side: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("m.txt.json")).unwrap()).unwrap();
    assert_eq!(side["family"], "seven_halves");
    assert_eq!(side["k"], 3);
    assert_eq!(side["ones"], 16);
    assert_eq!(side["verified"], true);
    let bad = alphak(dir.path(), &["construct", "--family", "ten-thirds", "--k", "2"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn table_and_solve3d() {
    let dir = tempfile::tempdir().unwrap();
    let t = alphak(dir.path(), &["table", "--max-n", "5"]);
    assert_eq!(t.status.code(), Some(0));
    assert!(stdout(&t).contains("0 mismatch, 0 timeout"));
    let s = alphak(dir.path(), &["solve3d", "--n", "3", "--no-cache"]);
    assert_eq!(s.status.code(), Some(0));
    assert!(stdout(&s).starts_with("marks(3) = 5, order = 22\n3\n"));
    let c = alphak(dir.path(), &["canon", "--file", data("five_left.txt").to_str().unwrap(), "--other", data("five_right.txt").to_str().unwrap()]);
    assert_eq!(c.status.code(), Some(0));
    assert!(stdout(&c).contains("not equivalent"));
}
