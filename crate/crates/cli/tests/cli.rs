use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn ordproof(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ordproof")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).to_string()
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ordproof-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

/// Embeds a skeleton fixture into a proof file and returns its path.
fn embedded(skel: &str) -> PathBuf {
    let out = tmp(&format!("{skel}.proof"));
    let o = ordproof(&["embed", fixture(skel).to_str().unwrap(), "-o", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    out
}

#[test]
fn ord_queries() {
    let o = ordproof(&["ord", "cmp", "w1", "r0"]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "LT"));
    assert_eq!(stdout(&ordproof(&["ord", "g", "(w^ 0)", "(D1 w1)"])), "{w1}");
    assert_eq!(stdout(&ordproof(&["ord", "nsum", "0", "(w^ 0)"])), "(w^ 0)");
    assert_eq!(stdout(&ordproof(&["ord", "nprod", "2", "3"])), "(+ (w^ 0) (w^ 0) (w^ 0) (w^ 0) (w^ 0) (w^ 0))");
    assert_eq!(stdout(&ordproof(&["ord", "region", "r0"])), "r0");
}

#[test]
fn ord_exit_codes() {
    assert_eq!(ordproof(&["ord", "cmp", "(w^", "0"]).status.code(), Some(2));
    assert_eq!(ordproof(&["ord", "cmp", "(mu m 0)", "(w^ 0)"]).status.code(), Some(3));
}

#[test]
fn printed_ordinals_reparse() {
    let t = stdout(&ordproof(&["ord", "nsum", "(D1 w1)", "(+ r0 3)"]));
    let o = ordproof(&["ord", "cmp", &t, &t]);
    assert_eq!(stdout(&o), "EQ");
}

#[test]
fn embed_prints_k_and_stock() {
    let o = ordproof(&["embed", fixture("shift3.skel").to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("; k = 10\n"));
    let root = text.lines().find(|l| l.contains(" D0 ")).unwrap();
    assert!(root.contains(":stock (+ (w^ "), "{root}");
    assert!(root.contains(" (w^ 0))"), "{root}");
}

#[test]
fn check_accepts_embedded_proofs() {
    let p = embedded("bounded_cut.skel");
    let o = ordproof(&["check", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("(D0 "));
}

#[test]
fn check_reports_h4_and_h7() {
    let o = ordproof(&["check", fixture("nested_ind.proof").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("[h4]"));
    let o = ordproof(&["check", fixture("ends_in_h.proof").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("[h7]"));
}

#[test]
fn check_parse_error_is_exit_2() {
    let bad = tmp("bad.proof");
    std::fs::write(&bad, "(proof a)\n(node a ax :concl (seq (< 0 1)\n").unwrap();
    assert_eq!(ordproof(&["check", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn reduce_extracts_witness_with_descending_trace() {
    let p = embedded("shift3.skel");
    let trace = tmp("shift3.jsonl");
    let o = ordproof(&["reduce", p.to_str().unwrap(), "--trace", trace.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().last(), Some("WITNESS x=0"));

    let text = std::fs::read_to_string(&trace).unwrap();
    assert!(!text.is_empty());
    for line in text.lines() {
        let rec: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(rec["v"], 1);
        let (before, after) = (rec["o_before"].as_str().unwrap(), rec["o_after"].as_str().unwrap());
        assert_eq!(stdout(&ordproof(&["ord", "cmp", after, before])), "LT", "step {}", rec["step"]);
    }
}

#[test]
fn reduce_bounded_cut_finds_three() {
    let p = embedded("bounded_cut.skel");
    let o = ordproof(&["reduce", p.to_str().unwrap()]);
    assert_eq!(stdout(&o).lines().last(), Some("WITNESS x=3"));
}

#[test]
fn reduce_step_limit_is_exit_5() {
    let p = embedded("shift3.skel");
    assert_eq!(ordproof(&["reduce", p.to_str().unwrap(), "--max-steps", "0"]).status.code(), Some(5));
}

#[test]
fn reduce_refuses_invalid_input() {
    assert_eq!(ordproof(&["reduce", fixture("nested_ind.proof").to_str().unwrap()]).status.code(), Some(1));
}
