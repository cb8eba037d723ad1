//! End-to-end checks of the binary: exit codes, determinism, and the
//! subcommand surfaces.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_abc-gains"))
}

fn run_with_stdin(args: &[&str], stdin: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn abc-gains");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

#[test]
fn gains_reads_stdin_and_reports() {
    let out = run_with_stdin(&["gains"], "2 6436341 6436343\n");
    assert!(out.status.success());
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("a,b,c,quality,rag"));
    let row = lines.next().unwrap();
    assert!(row.starts_with("2,6436341,6436343,1.629911684,"));
}

#[test]
fn gains_is_byte_identical_across_parallelism() {
    let input = "\
1 8 9
5 27 32
1 48 49
1 63 64
1 80 81
32 49 81
3 125 128
";
    let one = run_with_stdin(&["gains", "--parallelism", "1"], input);
    let eight = run_with_stdin(&["gains", "--parallelism", "8"], input);
    assert!(one.status.success() && eight.status.success());
    assert_eq!(one.stdout, eight.stdout);
}

#[test]
fn strict_mode_exits_1_on_bad_input() {
    let out = run_with_stdin(&["gains"], "2 3 7\n");
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 1"), "stderr: {err}");
}

#[test]
fn lenient_mode_skips_and_warns() {
    let out = run_with_stdin(&["gains", "--lenient"], "2 3 7\n1 8 9\n");
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert_eq!(text.lines().count(), 2); // header + one row
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("skipped 1"), "stderr: {err}");
}

#[test]
fn enumerate_emits_triple_lines() {
    let out = run_with_stdin(&["enumerate", "--limit", "100"], "");
    assert!(out.status.success());
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[0], "1 8 9");
    assert_eq!(lines[1], "5 27 32");
}

#[test]
fn enumerate_pipes_into_gains() {
    let out = run_with_stdin(&["enumerate", "--limit", "50"], "");
    let triples = stdout_of(&out);
    let gains = run_with_stdin(&["gains"], &triples);
    assert!(gains.status.success());
    assert_eq!(
        stdout_of(&gains).lines().count(),
        triples.lines().count() + 1
    );
}

#[test]
fn explain_prints_surd_and_approximation() {
    let out = run_with_stdin(
        &[
            "explain",
            "--triple",
            "2 6436341 6436343",
            "--metric",
            "sag",
        ],
        "",
    );
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("2^(-1/5)"));
    assert!(text.contains("1/23"));
    assert!(text.contains("(p = 3, d = 5)"));

    let out = run_with_stdin(
        &[
            "explain",
            "--triple",
            "2 6436341 6436343",
            "--metric",
            "rag",
        ],
        "",
    );
    let text = stdout_of(&out);
    assert!(text.contains("109^(1/5)"));
    assert!(text.contains("23/9"));
}

#[test]
fn explain_rejects_unknown_metric() {
    let out = run_with_stdin(&["explain", "--triple", "1 8 9", "--metric", "bogus"], "");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn padic_approx_recovers_golden_fraction() {
    let out = run_with_stdin(
        &["padic-approx", "--alpha", "3431", "--modulus", "8000"],
        "",
    );
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("fraction:   17/7"));
    assert!(text.contains("[0, 2, 3, 66, 1, 16]"));
}

#[test]
fn cf_subcommand_handles_both_forms() {
    let out = run_with_stdin(&["cf", "--num", "149797", "--den", "524288"], "");
    assert!(out.status.success());
    assert!(stdout_of(&out).contains("[0, 3, 2, 24965, 1, 2]"));

    let out = run_with_stdin(&["cf", "--surd", "109", "5", "--count", "6"], "");
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("[2, 1, 1, 4, 77733, 2]"));
    assert!(text.contains("23/9"));

    let out = run_with_stdin(&["cf", "--surd", "8", "3"], "");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn surd_search_lists_reyssat() {
    let out = run_with_stdin(
        &[
            "surd-search",
            "--k",
            "109",
            "--s",
            "5",
            "--max-q",
            "1000000",
            "--min-quality",
            "1.4",
        ],
        "",
    );
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("23/9"));
    assert!(text.contains("6436343"));
}

#[test]
fn report_histogram_and_scatter() {
    let out = run_with_stdin(
        &["report", "--histogram", "rag", "--bin", "0.01"],
        "2 6436341 6436343\n",
    );
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "bin_start,count\n1.46,1\n");

    let out = run_with_stdin(
        &["report", "--scatter", "quality", "rag"],
        "1 8 9\n5 27 32\n",
    );
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.starts_with("quality,rag\n"));
    assert_eq!(text.lines().count(), 3);

    let out = run_with_stdin(&["report", "--histogram", "bogus"], "1 8 9\n");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn criteria_filter_applies() {
    let dir = std::env::temp_dir().join(format!("abc-gains-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bands.txt");
    std::fs::write(
        &path,
        "3 1000000000000000000 1.10 2.66 1.37 1.57 1.31 1.90\n\
         1000000000000000000 inf none none none none none none\n",
    )
    .unwrap();
    // Reyssat clears the rag threshold; (7, 19, 26) clears nothing.
    let out = run_with_stdin(
        &["gains", "--criteria", path.to_str().unwrap()],
        "2 6436341 6436343\n7 19 26\n",
    );
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert_eq!(text.lines().count(), 2);
    assert!(text.contains("6436343"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn missing_file_exits_1() {
    let out = bin()
        .args(["gains", "/nonexistent/path/triples.txt"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
