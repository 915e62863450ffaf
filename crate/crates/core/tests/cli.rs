use std::path::PathBuf;
use std::process::{Command, Output};

use kad_core::finite::{is_isomorphic, lemma4_model, FiniteAlgebra};

fn kad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kad")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

const COUNTDOWN: &str = "\
# count down to zero
states: 0 1 2 3
rel dec = {(1,0),(2,1),(3,2)}
test pos = {(1,1),(2,2),(3,3)}
test zero = !pos
program:
while pos do dec od
";

#[test]
fn exit_codes_partition_outcomes() {
    assert_eq!(kad(&["check-axioms", "--builtin", "lemma4", "--profile", "kat"]).status.code(), Some(0));
    assert_eq!(kad(&["check-axioms", "--builtin", "lemma4", "--profile", "as"]).status.code(), Some(2));
    assert_eq!(kad(&["check-phi", "--builtin", "lemma4"]).status.code(), Some(1));
    assert_eq!(kad(&["check-phi", "--builtin", "rel2"]).status.code(), Some(0));
    assert_eq!(kad(&["check-phi"]).status.code(), Some(2));
    assert_eq!(kad(&["check-phi", "--model", "/nonexistent/model.txt"]).status.code(), Some(2));
}

#[test]
fn failing_axioms_are_listed() {
    let text = lemma4_model().to_model_file().replace("plus: a 1 -> 1", "plus: a 1 -> a");
    let path = scratch("broken.model", &text);
    let o = kad(&["check-axioms", "--model", path.to_str().unwrap(), "--profile", "dioid"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("violation: plus-comm"), "{out}");
    assert!(out.ends_with("result: violated\n"));
}

#[test]
fn model_file_errors_name_the_line() {
    let path = scratch("bad.model", "carrier: 0 1\nzero: 0\none: 1\nplus: 0 0 -> 7\n");
    let o = kad(&["check-phi", "--model", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 4"), "{err}");
}

#[test]
fn reports_are_deterministic() {
    let a = kad(&["find-models", "--size", "3", "--profile", "kad"]);
    let b = kad(&["find-models", "--size", "3", "--profile", "kad"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(0));
}

#[test]
fn find_models_emits_parsable_algebras() {
    let o = kad(&["find-models", "--size", "3", "--profile", "kat", "--constraint", "phi-fails", "--format", "structured"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let models = v["models"].as_array().unwrap();
    assert!(!models.is_empty());
    let m = FiniteAlgebra::parse_model_file(models[0].as_str().unwrap()).unwrap();
    assert!(is_isomorphic(&m, &lemma4_model()));
}

#[test]
fn no_models_exits_one() {
    let o = kad(&["find-models", "--size", "2", "--profile", "kad", "--constraint", "phi-fails"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("models found: 0"));
    let o = kad(&["find-models", "--size", "9", "--profile", "kat"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn vcgen_reports() {
    let path = scratch("countdown.prog", COUNTDOWN);
    let p = path.to_str().unwrap();
    let o = kad(&["vcgen", p, "--pre", "1", "--post", "zero"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("result: valid"));
    let o = kad(&["vcgen", p, "--pre", "1", "--post", "pos"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("fails at 0 1 2 3"), "{}", stdout(&o));
    let o = kad(&["vcgen", p, "--pre", "1", "--post", "nothing"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn vcgen_with_invariant() {
    let text = COUNTDOWN.replace("while pos do", "while pos invariant pos | zero do");
    let path = scratch("countdown_inv.prog", &text);
    let o = kad(&["vcgen", path.to_str().unwrap(), "--pre", "pos", "--post", "zero", "--format", "structured"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["conditions"].as_array().unwrap().len(), 3);
}

#[test]
fn synth_mid_over_relations() {
    let path = scratch(
        "walk.prog",
        "states: 1 2 3\nrel x = {(1,2)}\nrel y = {(2,3)}\ntest p = {(1,1)}\ntest q = {(3,3)}\n",
    );
    let f = path.to_str().unwrap();
    let o = kad(&["synth-mid", "--program-file", f, "--x", "x", "--y", "y", "--p", "p", "--q", "q"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("wlp: r = {(1,1),(2,2),(3,3)}"), "{out}");
    assert!(out.contains("range: r = {(2,2)}"));
    assert!(out.contains("meet: r = {(2,2)}"));
    let o = kad(&["synth-mid", "--program-file", f, "--x", "x", "--y", "y", "--p", "p", "--q", "!q", "--method", "wlp"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn synth_mid_in_lemma4_needs_antidomain() {
    let o = kad(&["synth-mid", "--builtin", "lemma4", "--x", "a", "--y", "a", "--p", "1", "--q", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn demos() {
    let o = kad(&["demo", "separation"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("KAT ⊬ φ, AS ⊢ φ"));
    let o = kad(&["demo", "nonexpressivity", "--set", "evens", "--candidates", "100"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.contains("not maximal")).count(), 100);
    let o = kad(&["demo", "nonexpressivity", "--set", "cofinite{1}"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn eval_command() {
    let o = kad(&["eval", "--builtin", "lemma4", "a* ; a"]);
    assert_eq!(stdout(&o).lines().last(), Some("value: a"));
    let o = kad(&["eval", "--builtin", "rel2", "--bind", "x={(1,2),(2,1)}", "x*", "--format", "structured"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["value"], "{(1,1),(1,2),(2,1),(2,2)}");
}
