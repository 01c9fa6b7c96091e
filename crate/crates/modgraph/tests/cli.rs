use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn modgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modgraph")).args(args).current_dir(data("")).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn validate_accepts_a_graph() {
    assert_eq!(modgraph(&["validate", "edge.graph"]).status.code(), Some(0));
}

#[test]
fn star3_has_four_embedding_classes() {
    let o = modgraph(&["embeddings", "star3.graph"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 4);
}

#[test]
fn composing_identities_echoes_the_identity() {
    let o = modgraph(&["compose", "id-star3.map", "id-star3.map"]);
    assert_eq!(o.status.code(), Some(0));
    let id = std::fs::read_to_string(data("id-star3.map")).unwrap();
    let body = |s: &str| s.lines().filter(|l| l.starts_with("phi")).map(str::to_string).collect::<Vec<_>>();
    assert_eq!(body(&stdout(&o)), body(&id));
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [&["homset", "star3.graph", "line2.graph"][..], &["jk-hom", "star0.graph", "edge.graph", "--vertex-bound", "2"]] {
        let (a, b) = (modgraph(args), modgraph(args));
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn broken_operad_fails_its_laws() {
    let o = modgraph(&["laws", "broken.operad", "--vertex-bound", "3", "--arity-bound", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL"));
    let ok = modgraph(&["laws", "genus3.operad", "--vertex-bound", "3", "--arity-bound", "3"]);
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(modgraph(&["validate", "missing.graph"]).status.code(), Some(2));
    assert_eq!(modgraph(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(modgraph(&["laws", "genus3.operad", "--vertex-bound", "0", "--arity-bound", "3"]).status.code(), Some(2));
    // a bound that truncates an enumeration has no default
    assert_eq!(modgraph(&["free-elements", "edge.graph", "--profile", "s:e"]).status.code(), Some(2));
}

#[test]
fn parse_errors_carry_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.graph");
    std::fs::write(&p, "graph g\narcs: a a*\nvertices: v\nbogus line\n").unwrap();
    let o = modgraph(&["validate", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains(":4"));
}

#[test]
fn nerve_presheaf_directory_is_segal_and_roundtrips() {
    let dir = tempfile::tempdir().unwrap();
    let site = dir.path().join("n");
    let s = site.to_str().unwrap();
    let o = modgraph(&["nerve", "charge.operad", "edge.graph", "--vertex-bound", "3", "--arity-bound", "4", "--site", s]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(modgraph(&["segal-check", s]).status.code(), Some(0));
    let r = modgraph(&["roundtrip", s, "charge.operad", "--vertex-bound", "3", "--arity-bound", "4"]);
    assert_eq!(r.status.code(), Some(0), "{}", stdout(&r));
}

#[test]
fn lines_format_prefixes_the_verb() {
    let o = modgraph(&["--format", "lines", "embeddings", "star3.graph"]);
    assert!(stdout(&o).lines().all(|l| l.starts_with("embeddings\t")));
}
