//! End-to-end runs of the `genera` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

fn genera(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genera")).args(args).output().expect("spawn genera")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Path 0-1-2 plus a triangle 3-4-5.
const PATH_AND_TRIANGLE: &str = "structure g\nvertices 6\nedge 0 1\nedge 1 2\nedge 3 4\nedge 4 5\nedge 3 5\nend\n";

#[test]
fn strong_reports_true_and_false() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", PATH_AND_TRIANGLE);
    let yes = genera(&["strong", "--ambient", s(&g), "--a", "0", "--b", "0,2", "--spec", "K+:1"]);
    assert_eq!(code(&yes), 0, "{}", stdout(&yes));
    assert!(stdout(&yes).contains("strong: yes"));
    let no = genera(&["--kv", "strong", "--ambient", s(&g), "--a", "0,2", "--b", "0,1,2", "--spec", "K+:1"]);
    assert_eq!(code(&no), 1);
    assert!(stdout(&no).contains("strong=no"));
    assert!(stdout(&no).contains("witness={0,1,2}"));
}

#[test]
fn membership_and_delta() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", PATH_AND_TRIANGLE);
    // The triangle has δ_1 = 0, so it is in K_1 but not K_1^+.
    assert_eq!(code(&genera(&["member", "--ambient", s(&g), "--spec", "K:1"])), 0);
    assert_eq!(code(&genera(&["member", "--ambient", s(&g), "--spec", "K+:1"])), 1);
    let d = genera(&["--kv", "delta", "--ambient", s(&g), "--a", "3,4,5", "--alpha", "1/2"]);
    assert_eq!(code(&d), 0);
    assert!(stdout(&d).contains("delta=3/2"), "{}", stdout(&d));
}

#[test]
fn input_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", PATH_AND_TRIANGLE);
    let bad = write(&dir, "bad.txt", "structure g\nvertices 2\nedge 0 5\nend\n");
    assert_eq!(code(&genera(&["member", "--ambient", s(&bad), "--spec", "K:1"])), 2);
    assert_eq!(code(&genera(&["member", "--ambient", s(&g), "--spec", "K:banana"])), 2);
    assert_eq!(code(&genera(&["closure", "--ambient", s(&g), "--set", "9", "--spec", "K:1"])), 2);
    let missing = dir.path().join("nope.txt");
    let out = genera(&["--kv", "member", "--ambient", s(&missing), "--spec", "K:1"]);
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).starts_with("error="));
}

#[test]
fn subset_cap_exits_three() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", PATH_AND_TRIANGLE);
    let out = Command::new(env!("CARGO_BIN_EXE_genera"))
        .env("GENERA_MAX_SUBSET_BITS", "2")
        .args(["strong", "--ambient", s(&g), "--a", "", "--b", "0,1,2,3,4,5", "--spec", "K:1"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn generic_writes_stages_and_provenance() {
    let dir = TempDir::new().unwrap();
    let out_dir = dir.path().join("stages");
    let out = genera(&[
        "generic", "--spec", "K+:1", "--stages", "2", "--max-base", "1", "--max-ext", "2", "--out", s(&out_dir), "--audit",
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    for i in 0..=2 {
        assert!(out_dir.join(format!("stage_{i:02}.txt")).exists());
    }
    let log = std::fs::read_to_string(out_dir.join("provenance.log")).unwrap();
    assert!(log.starts_with("# spec=K+:1"));
    assert!(log.lines().any(|l| l.starts_with("stage 1 base")));
    // A vertex budget that cannot hold two stages halts with a resource error.
    let small = dir.path().join("small");
    let halted = genera(&[
        "generic", "--spec", "K+:1", "--stages", "4", "--max-base", "2", "--max-ext", "2", "--out", s(&small),
        "--max-vertices", "3",
    ]);
    assert_eq!(code(&halted), 3);
    assert!(std::fs::read_to_string(small.join("provenance.log")).unwrap().contains("# halted"));
}

#[test]
fn fuzz_failure_replays_the_same_trial() {
    let out = genera(&["--kv", "fuzz", "--suite", "broken-oracle", "--spec", "K+:1", "--trials", "50", "--seed", "3"]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    let field = |k: &str| text.lines().find_map(|l| l.strip_prefix(&format!("{k}="))).unwrap().to_string();
    let replay = field("replay");
    let trial = field("trial");
    assert!(replay.contains(&format!("--trial {trial}")));
    let args: Vec<&str> = replay.split_whitespace().skip(1).collect();
    let again = genera(&[&["--kv"], args.as_slice()].concat());
    assert_eq!(code(&again), 1);
    let again = stdout(&again);
    assert!(again.contains(&format!("trial={trial}")));
    assert!(again.contains(&format!("minimized_message={}", field("minimized_message"))));

    let ok = genera(&["fuzz", "--suite", "closure-oracle", "--spec", "K:1/2", "--trials", "30"]);
    assert_eq!(code(&ok), 0);
}

#[test]
fn arith_witness_config_file() {
    let dir = TempDir::new().unwrap();
    let cfg = "spec K+:1/2\na 0,1\nu 2\nv\nn_max 0\n\
               structure B\nvertices 3\nedge 0 2\nedge 1 2\nend\n\
               structure X\nvertices 3\nedge 0 2\nedge 1 2\nend\n";
    let p = write(&dir, "w.txt", cfg);
    let out = genera(&["--kv", "arith-witness", s(&p)]);
    assert!(matches!(code(&out), 0 | 1), "{}", stdout(&out));
    assert!(stdout(&out).contains("n_max=0"));
    let over = genera(&["--kv", "arith-witness", s(&p), "--n-max", "1"]);
    assert!(stdout(&over).contains("n_max=1"));
    let broken = write(&dir, "broken.txt", &format!("{cfg}mystery 4\n"));
    assert_eq!(code(&genera(&["arith-witness", s(&broken)])), 2);
}

#[test]
fn gamma_verification() {
    let out = genera(&["--kv", "gamma", "--r", "2/3", "--verify", "4"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("gamma=1/3"));
    assert!(text.contains("attained=yes"));
}
