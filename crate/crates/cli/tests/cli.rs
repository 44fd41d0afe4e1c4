use std::path::PathBuf;
use std::process::{Command, Output};

fn commwidth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_commwidth")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("commwidth-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn validate_nothing_succeeds() {
    let o = commwidth(&["validate"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("0 entries in 0 files"));
}

#[test]
fn bundled_corpus_is_valid() {
    let o = commwidth(&["validate", "--corpus"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(!stdout(&o).contains("invalid"));
}

#[test]
fn jacobi_violation_names_the_triple() {
    // Heisenberg extended by brackets that break the Jacobi identity on e1, e2, e3
    let path = scratch("jacobi.json");
    std::fs::write(
        &path,
        r#"{"name": "broken", "kind": "nilpotent", "dim": 5,
            "brackets": {"1,2": [0,0,1,0,0], "2,3": [0,0,0,1,0], "1,4": [0,0,0,0,1]}}"#,
    )
    .unwrap();
    let o = commwidth(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("basis triple (1, 2, 3)"), "{}", stdout(&o));
}

#[test]
fn parse_errors_carry_a_position() {
    let path = scratch("syntax.json");
    std::fs::write(&path, "[\n  {\"kind\": \"finite\",\n   \"named\": }\n]").unwrap();
    let o = commwidth(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("line 3"), "{}", stdout(&o));
}

#[test]
fn unknown_lemma_is_an_error() {
    let o = commwidth(&["check", "--lemma", "no-such-check"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn check_all_is_deterministic() {
    let (a, b) = (scratch("first.jsonl"), scratch("second.jsonl"));
    for p in [&a, &b] {
        let o = commwidth(&["check", "--all", "--seed", "42", "--out", p.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let (ra, rb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(!ra.is_empty());
    assert_eq!(ra, rb);
}

#[test]
fn finite_width_from_the_oracle() {
    let o = commwidth(&["width", "S4", "--a", "derived", "--b", "derived"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("width 1"), "{out}");
    assert!(out.contains("\"order\":4"), "{out}");
}

#[test]
fn inversion_example_through_the_cli() {
    let o = commwidth(&["commutator", "q-inversion", "--a", "component", "--b", "whole"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("with_b_connected\t{\"S\":[0],\"W\":{\"basis\":[],\"dim\":0}}"), "{out}");
    assert!(out.contains("commutator\t{\"S\":[0],\"W\":{\"basis\":[[\"1\"]],\"dim\":1}}"), "{out}");
}

#[test]
fn heisenberg_certificates_have_length_at_most_one() {
    let o = commwidth(&["width", "heisenberg", "--samples", "5"]);
    assert!(o.status.success());
    let rows: Vec<String> = stdout(&o).lines().skip_while(|l| !l.starts_with("length")).skip(1).map(String::from).collect();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r.starts_with("1\t0\t") || r.starts_with("0\t0\t")), "{rows:?}");
}

#[test]
fn corpus_override_from_environment() {
    let dir = scratch("corpus");
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("one.json"), r#"{"name": "tiny", "kind": "finite", "named": "C2"}"#).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_commwidth"))
        .args(["check", "--lemma", "baer", "--summary"])
        .env("COMMWIDTH_CORPUS", &dir)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 1);
    assert!(stdout(&o).contains("finite/tiny"));
}
