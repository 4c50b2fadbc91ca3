use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_equiweight")).current_dir(concat!(env!("CARGO_MANIFEST_DIR"), "/../..")).args(args).output().unwrap()
}

fn column(out: &Output, col: usize) -> Vec<String> {
    let text = String::from_utf8_lossy(&out.stdout);
    text.lines().skip(1).filter(|l| !l.starts_with('#')).map(|l| l.split_whitespace().nth(col).unwrap_or("").to_string()).collect()
}

#[test]
fn sphere_reflection_equivariant_homology() {
    let out = run(&["equivariant-homology", "corpus/sphere_reflection.json", "--kmin", "-3", "--kmax", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(column(&out, 0), ["2", "1", "0", "-1", "-2", "-3"]);
    assert_eq!(column(&out, 1), ["1", "1", "2", "2", "2", "2"]);
}

#[test]
fn figure_eight_bkg() {
    let out = run(&["invariants", "bkg", "corpus/figure8_swap.json", "--kmin", "-2", "--kmax", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(column(&out, 1), ["0", "1", "1", "1", "1"]);
}

#[test]
fn verify_corpus_passes() {
    let out = run(&["verify-corpus"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let dir = run(&["verify-corpus", "--dir", "corpus"]);
    assert_eq!(dir.status.code(), Some(0));
    assert_eq!(out.stdout, dir.stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["smith-check", "smith_violation"]).status.code(), Some(1));
    assert_eq!(run(&["smith-check", "circle_reflection"]).status.code(), Some(0));
    assert_eq!(run(&["homology", "does_not_exist"]).status.code(), Some(2));
    let bad = run(&["homology", "bad_boundary"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("degree 2"));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn output_formats() {
    let json = run(&["equivariant-homology", "sphere_antipodal", "--kmin", "-1", "--kmax", "2", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    let dims: Vec<i64> = v["rows"].as_array().unwrap().iter().map(|r| r["dim"].as_i64().unwrap()).collect();
    assert_eq!(dims, [1, 1, 1, 0]);
    let csv = run(&["equivariant-homology", "sphere_antipodal", "--kmin", "-1", "--kmax", "2", "--csv"]);
    assert_eq!(String::from_utf8_lossy(&csv.stdout), "k,dim\n2,1\n1,1\n0,1\n-1,0\n");
}

#[test]
fn raw_index_changes_weight_coordinates() {
    let shown = run(&["equivariant-weight-ss", "figure8_swap", "--page", "2", "--csv"]);
    let raw = run(&["equivariant-weight-ss", "figure8_swap", "--page", "2", "--csv", "--raw-index"]);
    assert_eq!(shown.status.code(), Some(0));
    let first = |o: &Output| String::from_utf8_lossy(&o.stdout).lines().nth(1).unwrap().to_string();
    // Reindexed (p, q) = (0, 1) is internal column −1, total degree 1, on page 1.
    assert!(first(&shown).starts_with("2,0,1,1,"), "{}", first(&shown));
    assert!(first(&raw).starts_with("1,-1,2,1,"), "{}", first(&raw));
}

#[test]
fn every_subcommand_runs() {
    for args in [
        vec!["homology", "circle_reflection"],
        vec!["group-cohomology", "circle_reflection", "--nmax", "3"],
        vec!["hochschild-serre", "sphere_antipodal"],
        vec!["weight-ss", "figure8_flip"],
        vec!["omega-filtration", "figure8_flip"],
        vec!["row-ss", "figure8_flip", "--q", "0"],
        vec!["row-ss", "figure8_flip", "--q", "1", "--variant", "i"],
        vec!["invariants", "qb", "figure8_flip", "--q", "0"],
        vec!["invariants", "beta", "figure8_flip"],
        vec!["invariants", "beta-odd", "z3_three_points"],
        vec!["invariants", "invariant-beta", "sphere_reflection"],
        vec!["invariants", "b-prime", "figure8_swap"],
        vec!["quotient-check", "circle_antipodal"],
        vec!["hatc", "figure8_flip", "--k", "-1"],
        vec!["thm411", "sphere_reflection"],
        vec!["thm416", "sphere_antipodal"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.len() > 10, "{args:?}");
    }
}
