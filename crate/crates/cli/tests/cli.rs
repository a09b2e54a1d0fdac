use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use tempfile::TempDir;

const EXAMPLE: &str = "\
k = 1
alphabet = a b c
S -> A & C
A -> a A | D
D -> b D c | eps
C -> a C c | B
B -> b B | eps
";

const AMBIGUOUS: &str = "alphabet = a\nS -> a A | a B\nA -> eps\nB -> eps\n";

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn finish(out: Output) -> Run {
    Run {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn conjll(dir: &Path, args: &[&str]) -> Run {
    finish(
        Command::new(env!("CARGO_BIN_EXE_conjll"))
            .current_dir(dir)
            .args(args)
            .output()
            .unwrap(),
    )
}

fn conjll_stdin(dir: &Path, args: &[&str], input: &str) -> Run {
    let mut child = Command::new(env!("CARGO_BIN_EXE_conjll"))
        .current_dir(dir)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    finish(child.wait_with_output().unwrap())
}

fn workspace() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("ex.g"), EXAMPLE).unwrap();
    std::fs::write(dir.path().join("amb.g"), AMBIGUOUS).unwrap();
    std::fs::write(dir.path().join("eps.g"), "start = S\nS -> eps\n").unwrap();
    dir
}

/// Transforms the example fully and returns the grammar path.
fn pipelined(dir: &Path) -> PathBuf {
    let r = conjll(
        dir,
        &[
            "transform",
            "ex.g",
            "--stage",
            "full",
            "--infer-bound",
            "9",
            "-o",
            "full.g",
        ],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    dir.join("full.g")
}

#[test]
fn check_reports() {
    let d = workspace();
    let r = conjll(d.path(), &["check", "ex.g"]);
    assert_eq!(r.code, 0);
    assert_eq!(
        r.stdout.lines().next(),
        Some("aligned: no; left-recursive rules: 3")
    );

    std::fs::write(d.path().join("al.g"), "alphabet = a\nS -> a S | eps\n").unwrap();
    let r = conjll(d.path(), &["check", "al.g"]);
    assert!(r.stdout.starts_with("aligned: yes"), "{}", r.stdout);

    let r = conjll(d.path(), &["check", "ex.g", "--k", "2", "--max-len", "6"]);
    assert!(
        r.stdout.contains("short rules (k = 2, max-len 6): 2"),
        "{}",
        r.stdout
    );

    assert_eq!(conjll(d.path(), &["check", "missing.g"]).code, 2);
    std::fs::write(d.path().join("broken.g"), "S -> -> a\n").unwrap();
    assert_eq!(conjll(d.path(), &["check", "broken.g"]).code, 2);
}

#[test]
fn infer_table_outputs() {
    let d = workspace();
    let r = conjll(
        d.path(),
        &[
            "infer-table",
            "ex.g",
            "--k",
            "1",
            "--max-len",
            "9",
            "-o",
            "ex.table",
        ],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    let text = std::fs::read_to_string(d.path().join("ex.table")).unwrap();
    assert_eq!(text.lines().next(), Some("k = 1"));
    assert_eq!(text.lines().count(), 15);
    assert!(text.contains("S | a | S -> A & C\n"));

    let r = conjll(d.path(), &["infer-table", "ex.g", "--max-len", "0"]);
    assert_eq!(r.stdout.lines().count(), 6);

    let r = conjll(d.path(), &["infer-table", "amb.g"]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("conflict at (S, a)"), "{}", r.stderr);
}

#[test]
fn transform_writes_artifacts() {
    let d = workspace();
    let g = pipelined(d.path());
    let grammar = std::fs::read_to_string(&g).unwrap();
    assert!(grammar.starts_with("k = 1\n"));
    let manifest = std::fs::read_to_string(d.path().join("full.g.manifest")).unwrap();
    assert!(manifest.contains("infer-bound = 9"));
    assert!(d.path().join("full.g.table").exists());
    let r = conjll(d.path(), &["check", "full.g"]);
    assert!(
        r.stdout
            .starts_with("aligned: yes; left-recursive rules: 0"),
        "{}",
        r.stdout
    );

    // the pipeline runs left-recursion elimination before alignment
    let r = conjll(
        d.path(),
        &[
            "transform",
            "ex.g",
            "--stage",
            "aligned",
            "--infer-bound",
            "9",
        ],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("# manifest"));
    assert!(!r.stdout.contains("# table"));

    let r = conjll(d.path(), &["transform", "amb.g", "--stage", "ll1"]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("stage infer"), "{}", r.stderr);
}

#[test]
fn transform_is_deterministic() {
    let d = workspace();
    let a = conjll(d.path(), &["transform", "ex.g", "--infer-bound", "9"]);
    let b = conjll(d.path(), &["transform", "ex.g", "--infer-bound", "9"]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn parse_verdicts() {
    let d = workspace();
    pipelined(d.path());
    let parse = |w: &str| conjll(d.path(), &["parse", "full.g", "--table", "full.g.table", w]);
    assert_eq!(parse("aabbcc").code, 0);
    assert_eq!(parse("abcabc").code, 1);
    assert_eq!(parse("").code, 0);
    let r = parse("aabbc");
    assert_eq!(r.code, 1);
    assert!(r.stdout.starts_with("reject: "), "{}", r.stdout);
    assert_eq!(parse("abd").code, 2);

    let r = conjll_stdin(
        d.path(),
        &["parse", "full.g", "--table", "full.g.table", "--stdin"],
        "abc\n\nab\n",
    );
    assert_eq!(r.code, 1);
    let lines: Vec<&str> = r.stdout.lines().collect();
    assert_eq!(lines[0], "abc: accept");
    assert_eq!(lines[1], "eps: accept");
    assert!(lines[2].starts_with("ab: reject"));
}

#[test]
fn parse_trace_file() {
    let d = workspace();
    pipelined(d.path());
    let r = conjll(
        d.path(),
        &[
            "parse",
            "full.g",
            "--table",
            "full.g.table",
            "abc",
            "--trace",
            "t.txt",
        ],
    );
    assert_eq!(r.code, 0);
    let trace = std::fs::read_to_string(d.path().join("t.txt")).unwrap();
    let lines: Vec<&str> = trace.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[0].starts_with("step=1 read=a Z={("));
    assert_eq!(lines[3], "step=4 read=eps Z={}");
    assert_eq!(lines[4], "verdict=accept reason=none");
}

#[test]
fn parse_preconditions() {
    let d = workspace();
    pipelined(d.path());
    conjll(d.path(), &["infer-table", "ex.g", "-o", "ex.table"]);
    // the example is not aligned
    let r = conjll(d.path(), &["parse", "ex.g", "--table", "ex.table", "abc"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("not aligned"), "{}", r.stderr);

    std::fs::write(d.path().join("al.g"), "alphabet = a b\nS -> a S b | eps\n").unwrap();
    conjll(
        d.path(),
        &["infer-table", "al.g", "--k", "2", "-o", "al2.table"],
    );
    let r = conjll(d.path(), &["parse", "al.g", "--table", "al2.table", "ab"]);
    assert_eq!(r.code, 2, "{}", r.stderr);

    let r = conjll(d.path(), &["parse", "full.g", "--table", "ex.table", "abc"]);
    assert_eq!(r.code, 2);
    assert_eq!(conjll(d.path(), &["parse", "full.g", "abc"]).code, 2);
}

#[test]
fn parse_agrees_with_oracle() {
    let d = workspace();
    pipelined(d.path());
    let mut batch = String::new();
    for w in [
        "",
        "a",
        "abc",
        "acb",
        "aabbcc",
        "aabbbcc",
        "abcc",
        "aaabbbccc",
        "cba",
    ] {
        batch.push_str(w);
        batch.push('\n');
    }
    let p = conjll_stdin(
        d.path(),
        &["parse", "full.g", "--table", "full.g.table", "--stdin"],
        &batch,
    );
    let o = conjll_stdin(d.path(), &["oracle", "ex.g", "--stdin"], &batch);
    for (pl, ol) in p.stdout.lines().zip(o.stdout.lines()) {
        assert_eq!(
            pl.ends_with(": accept"),
            ol.ends_with(": member"),
            "{pl} / {ol}"
        );
    }
    assert_eq!(p.stdout.lines().count(), 9);
}

#[test]
fn oracle_queries() {
    let d = workspace();
    let r = conjll(
        d.path(),
        &["oracle", "ex.g", "abc", "--count-trees", "--tree"],
    );
    assert_eq!(r.code, 0);
    assert!(
        r.stdout.starts_with("member; trees: 1\nS [0, 3)"),
        "{}",
        r.stdout
    );
    assert_eq!(conjll(d.path(), &["oracle", "ex.g", "ab"]).code, 1);
    let r = conjll(d.path(), &["oracle", "ex.g", "--enumerate", "6"]);
    assert_eq!(r.stdout, "eps\nabc\naabbcc\n");
    let r = conjll(d.path(), &["oracle", "amb.g", "a", "--count-trees"]);
    assert_eq!(r.stdout, "member; trees: 2\n");
    assert_eq!(conjll(d.path(), &["oracle", "ex.g", "abx"]).code, 2);
    assert_eq!(conjll(d.path(), &["oracle", "ex.g"]).code, 2);
}

#[test]
fn diff_languages() {
    let d = workspace();
    pipelined(d.path());
    let r = conjll(d.path(), &["diff", "ex.g", "full.g", "--max-len", "9"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let r = conjll(d.path(), &["diff", "ex.g", "eps.g", "--max-len", "3"]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.starts_with("differ on abc:"), "{}", r.stdout);
    assert_eq!(conjll(d.path(), &["diff", "ex.g", "ex.g"]).code, 0);
    assert_eq!(conjll(d.path(), &["diff", "ex.g", "missing.g"]).code, 2);
}

#[test]
fn usage_errors() {
    let d = workspace();
    assert_eq!(conjll(d.path(), &[]).code, 2);
    assert_eq!(
        conjll(d.path(), &["transform", "ex.g", "--stage", "bogus"]).code,
        2
    );
    assert_eq!(conjll(d.path(), &["frobnicate"]).code, 2);
    assert_eq!(conjll(d.path(), &["--help"]).code, 0);
}
