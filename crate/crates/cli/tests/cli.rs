use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use lfgmc_core::fixtures;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_lfgmc"));
    c.env("LFGMC_COLOR", "0");
    c
}

fn grammar(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child =
        bin().args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn text(b: &[u8]) -> String {
    String::from_utf8_lossy(b).into_owned()
}

fn fixture_file(dir: &tempfile::TempDir, m: &lfgmc_core::Model) -> String {
    let p = dir.path().join("model.json");
    std::fs::write(&p, m.to_json()).unwrap();
    p.display().to_string()
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = fixture_file(&dir, &fixtures::a_girl_walks());
    assert_eq!(code(&run(&["validate", &ok])), 0);

    let doc = fixtures::a_girl_walks().to_json().replacen("\"trans\": {}", "\"trans\": {\"num\": 0}", 1);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, doc).unwrap();
    let o = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 1, "{}", text(&o.stdout));
    assert!(text(&o.stdout).contains("transition from final node"), "{}", text(&o.stdout));

    let full = fixtures::a_girl_walks().to_json();
    let o = run_stdin(&["validate", "-"], &full.as_bytes()[..full.len() / 2]);
    assert_eq!(code(&o), 2);
    assert!(text(&o.stderr).contains("error"));
}

#[test]
fn check_exit_codes_and_counterexamples() {
    let dir = tempfile::tempdir().unwrap();
    let m = fixture_file(&dir, &fixtures::a_girl_walks());
    let g = grammar("figure1.lfg");
    assert_eq!(code(&run(&["check", &m, "--grammar", g.to_str().unwrap()])), 0);

    let o = run(&["check", &m, "--formula", "false"]);
    assert_eq!(code(&o), 1);
    assert!(text(&o.stdout).contains("at t0"));

    let o = run(&["check", &m, "--formula", "<pred> <subj> true -> <subj> true"]);
    assert_eq!(code(&o), 0);

    let o = run(&["check", &m, "--formula", "<obj> true"]);
    assert_eq!(code(&o), 2, "unknown feature is an input error");

    let o = run(&["check", &m]);
    assert_eq!(code(&o), 2, "a formula or a grammar is required");
}

#[test]
fn check_points_at_the_incomplete_clause() {
    let dir = tempfile::tempdir().unwrap();
    let m = fixture_file(&dir, &fixtures::a_girl_devours());
    let o = run(&["check", &m, "--grammar", grammar("devour.lfg").to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v["models"][0].as_array().unwrap();
    let fails: Vec<_> = rows.iter().filter(|r| r["valid"] == false).collect();
    assert_eq!(fails.len(), 1);
    assert_eq!(fails[0]["label"], "completeness[1]");
    assert_eq!(fails[0]["counterexample"], "f0");
}

#[test]
fn parse_exit_codes() {
    let g = grammar("figure1.lfg");
    let g = g.to_str().unwrap();
    let o = run(&["parse", g, "a", "girl", "walks"]);
    assert_eq!(code(&o), 0);
    assert!(text(&o.stderr).contains("1 model"));
    assert_eq!(lfgmc_core::Model::from_json(&text(&o.stdout)).unwrap(), fixtures::a_girl_walks());

    assert_eq!(code(&run(&["parse", g, "walks", "girl", "a"])), 1);
    assert_eq!(code(&run(&["parse", g, "a", "girl", "walks", "--max-tree", "3"])), 3);
    assert_eq!(code(&run(&["parse", g, "a", "girl", "walks", "--max-fnodes", "2"])), 3);
    assert_eq!(code(&run(&["parse", g, "a", "dog"])), 2);
    assert_eq!(code(&run(&["parse", g, "a", "girl", "walks", "--max-models", "0"])), 2);

    let o = run(&["parse", grammar("devour.lfg").to_str().unwrap(), "a", "girl", "devours"]);
    assert_eq!(code(&o), 1);
    assert!(text(&o.stderr).contains("completeness formula 1 fails at f0"), "{}", text(&o.stderr));
}

#[test]
fn parse_writes_files_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("models");
    let g = grammar("figure1.lfg");
    let o = run(&["parse", g.to_str().unwrap(), "a", "girl", "walks", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let written = std::fs::read_to_string(out.join("model-001.json")).unwrap();
    assert_eq!(lfgmc_core::Model::from_json(&written).unwrap(), fixtures::a_girl_walks());

    let o = run(&["--format", "json", "parse", g.to_str().unwrap(), "a", "girl", "walks"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["count"], 1);
    assert_eq!(v["tree_bound_hit"], false);
}

#[test]
fn parse_then_validate_then_check() {
    let g = grammar("figure1.lfg");
    let g = g.to_str().unwrap();
    let parsed = run(&["parse", g, "a", "girl", "walks"]);
    assert_eq!(code(&parsed), 0);
    let v = run_stdin(&["validate", "-"], &parsed.stdout);
    assert_eq!(code(&v), 0, "{}", text(&v.stdout));
    let c = run_stdin(&["check", "-", "--grammar", g], &parsed.stdout);
    assert_eq!(code(&c), 0, "{}", text(&c.stdout));
}

#[test]
fn several_models_stream_through_the_pipe() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("amb.lfg");
    std::fs::write(
        &g,
        "signature { cat: S A; atom: x y; feat: f g; }\nrule S -> A {(up f)=down};\nrule S -> A {(up g)=down};\nlex \"w\" A {(up f)=x};\n",
    )
    .unwrap();
    let g = g.to_str().unwrap();
    let parsed = run(&["parse", g, "w"]);
    assert_eq!(code(&parsed), 0);
    assert!(text(&parsed.stderr).contains("2 models"), "{}", text(&parsed.stderr));
    let v = run_stdin(&["validate", "-"], &parsed.stdout);
    assert_eq!(code(&v), 0);
    assert_eq!(text(&v.stdout).lines().count(), 2);
    let c = run_stdin(&["check", "-", "--grammar", g], &parsed.stdout);
    assert_eq!(code(&c), 0);
}

#[test]
fn compile_prints_labeled_sections_that_reparse() {
    let g = grammar("figure1.lfg");
    let o = run(&["compile", g.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let out = text(&o.stdout);
    let headers: Vec<&str> = out.lines().filter(|l| l.starts_with('#')).collect();
    assert_eq!(headers, ["# licensing", "# lexical", "# completeness", "# coherence"]);
    let sig = fixtures::figure1_grammar().sig().clone();
    for line in out.lines().filter(|l| !l.starts_with('#')) {
        lfgmc_core::parse_formula(line, &sig).unwrap();
    }

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.lfg");
    std::fs::write(&bad, "signature { cat: S; atom: x; feat: f; }\nrule S -> T;\n").unwrap();
    let o = run(&["compile", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(text(&o.stderr).contains("2:"), "{}", text(&o.stderr));
}

#[test]
fn output_is_repeatable_and_uncolored_when_asked() {
    let g = grammar("figure1.lfg");
    let a = run(&["parse", g.to_str().unwrap(), "a", "girl", "walks"]);
    let b = run(&["parse", g.to_str().unwrap(), "a", "girl", "walks"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stderr, b.stderr);
    let o = run(&["parse", g.to_str().unwrap(), "a", "girl", "walks", "--max-tree", "3"]);
    assert!(!text(&o.stderr).contains('\x1b'));
    let colored = bin()
        .env("LFGMC_COLOR", "1")
        .args(["parse", g.to_str().unwrap(), "a", "girl", "walks", "--max-tree", "3"])
        .output()
        .unwrap();
    assert!(text(&colored.stderr).contains('\x1b'));
}
