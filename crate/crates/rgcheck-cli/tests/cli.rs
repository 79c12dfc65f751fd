//! End-to-end tests of the command-line front end: exit codes, report
//! records, replay fidelity, parsing and scenarios.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rgcheck"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn rgcheck")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn repo_file(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

#[test]
fn list_prints_the_registry() {
    let out = run(&["--list"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for name in [
        "law-rely-with",
        "law-guar-with",
        "derivation-write-rely",
        "derivation-write-guar",
        "fig2-equiv-fig3",
        "fig4-equiv-fig5",
        "stability-read-pre",
    ] {
        assert!(text.contains(name), "missing {name} in --list");
    }
}

#[test]
fn passing_check_exits_zero() {
    let out = run(&["--check", "stability-read-pre"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("PASS"));
}

#[test]
fn unknown_check_exits_two_and_lists_registry() {
    let out = run(&["--check", "no-such-check"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("unknown check"));
    assert!(err.contains("law-rely-with"));
}

#[test]
fn no_arguments_is_a_usage_error() {
    let out = run(&[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_overrides_are_applied() {
    let dir = std::env::temp_dir().join(format!("rgcheck-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("small.cfg");
    std::fs::write(&cfg, "max_len = 3\nseq_cap = 1\n").unwrap();
    let out = run(&["--check", "law-rely-with", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("max_len=3"));
    assert!(stdout(&out).contains("seq_cap=1"));
}

#[test]
fn report_file_gets_one_json_record_per_run() {
    let dir = std::env::temp_dir().join(format!("rgcheck-report-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.jsonl");
    let _ = std::fs::remove_file(&path);
    let p = path.to_str().unwrap();
    assert_eq!(
        run(&["--check", "stability-read-pre", "--report", p]).status.code(),
        Some(0)
    );
    assert_eq!(
        run(&["--check", "stability-negative-control", "--report", p])
            .status
            .code(),
        Some(0)
    );
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    for line in lines {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["status"], "pass");
        assert!(v["check"].is_string());
        assert!(v["traces_checked"].is_number());
    }
}

#[test]
fn parse_prints_canonical_form_of_the_corpus() {
    let path = repo_file("corpus/fig1_write.rg");
    let out = run(&["--parse", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out).trim(),
        "rely(qu' suffixof qu) /\\ guar(qu prefixof qu') /\\ with qu { spec {qu} : [qu' = qu ++ [v]] }"
    );
}

#[test]
fn parse_error_exits_two() {
    let dir = std::env::temp_dir().join(format!("rgcheck-parse-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.rg");
    std::fs::write(&path, "with {").unwrap();
    let out = run(&["--parse", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("syntax error"));
}

#[test]
fn scenario_exploration_summarizes_runs() {
    let dir = std::env::temp_dir().join(format!("rgcheck-scn-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("blocked.scn");
    std::fs::write(
        &path,
        "model = lockqueue\nn = 1\nvalues = 1\nseq_cap = 2\nmax_len = 24\nthread: write 1; write 1\n",
    )
    .unwrap();
    let out = run(&["--scenario", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("non-progressing cycle"), "{text}");
    assert!(text.contains("invariant holds"));
}

#[test]
fn replay_reproduces_verdicts_bit_identically() {
    // A lasso on which Fig.5 pop accepts infinitely and Fig.4 pop rejects
    // under an open environment; under the check's own (res-preserving)
    // environment both are well-defined verdicts. Replaying twice must give
    // byte-identical output.
    let dir = std::env::temp_dir().join(format!("rgcheck-replay-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("trace.txt");
    std::fs::write(
        &path,
        "init res=null,s=[],v=1\n\
         env res=null,s=[],v=1 -> res=null,s=[1],v=1\n\
         env res=null,s=[1],v=1 -> res=null,s=[],v=1\n\
         loop@0\n",
    )
    .unwrap();
    let args = ["--check", "fig4-equiv-fig5", "--replay", path.to_str().unwrap()];
    let first = run(&args);
    assert_eq!(first.status.code(), Some(0), "{:?}", first);
    let second = run(&args);
    assert_eq!(stdout(&first), stdout(&second), "replay must be deterministic");
    let text = stdout(&first);
    // the churning lasso spins both stacks forever
    assert!(text.contains("pop: abstract accepted-infinite; concrete accepted-infinite"), "{text}");
}

#[test]
fn failing_check_exits_one_and_its_counterexample_replays_identically() {
    let dir = std::env::temp_dir().join(format!("rgcheck-fail-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let report_path = dir.join("fail.jsonl");
    let _ = std::fs::remove_file(&report_path);

    let out = run(&[
        "--check",
        "term-vs-retry-loop",
        "--report",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("FAIL"));

    // Extract the counterexample and verdicts from the machine report.
    let record: serde_json::Value =
        serde_json::from_str(std::fs::read_to_string(&report_path).unwrap().trim()).unwrap();
    assert_eq!(record["status"], "fail");
    assert_eq!(record["exit_code"], 1);
    let cex = record["counterexample"].as_str().unwrap();
    let detail = record["detail"].as_str().unwrap().to_string();

    // Feed the counterexample back through --replay: the verdicts must be
    // reproduced bit-identically.
    let trace_path = dir.join("cex.trace");
    std::fs::write(&trace_path, cex).unwrap();
    let replayed = run(&[
        "--check",
        "term-vs-retry-loop",
        "--replay",
        trace_path.to_str().unwrap(),
    ]);
    assert_eq!(replayed.status.code(), Some(0));
    let text = stdout(&replayed);
    let line = text.trim();
    let (abs_verdict, conc_verdict) = line
        .strip_prefix("term-vs-spin: abstract ")
        .and_then(|r| r.split_once("; concrete "))
        .unwrap_or_else(|| panic!("unexpected replay output `{line}`"));
    assert!(
        detail.contains(&format!("abstract: {abs_verdict}")),
        "report `{detail}` vs replay `{abs_verdict}`"
    );
    assert!(
        detail.contains(&format!("concrete: {conc_verdict}")),
        "report `{detail}` vs replay `{conc_verdict}`"
    );
}
