use std::process::{Command, Output};

fn gentle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gentle"))
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn invariant_json_for_kronecker() {
    let o = gentle(&["invariant", "data/kronecker.gp", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(
        v,
        serde_json::json!({
            "genus": 0,
            "components": [{"marked": 1, "winding": 0}, {"marked": 1, "winding": 0}]
        })
    );
}

#[test]
fn equiv_prints_the_verdict() {
    let o = gentle(&["equiv", "data/a3_linear.gp", "data/a3_zigzag.gp"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "Equivalent");
    let o = gentle(&["equiv", "data/a2.gp", "data/dual_numbers.gp"]);
    assert!(stdout(&o).starts_with("NotEquivalent"));
}

#[test]
fn validation_failure_exits_two_with_witness() {
    let o = gentle(&["validate", "data/bad.gp", "--json"]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["ok"], false);
    assert!(!v["violations"].as_array().unwrap().is_empty());
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(gentle(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(gentle(&["invariant"]).status.code(), Some(1));
    assert_eq!(gentle(&["--help"]).status.code(), Some(0));
}

#[test]
fn malformed_words_are_validation_failures() {
    let o = gentle(&["complex", "data/kronecker.gp", "arc: x -[c,>]- y"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn twist_agrees_with_spherical_twist() {
    for arc in ["arc: x", "arc: y"] {
        let o = gentle(&["twist", "data/kronecker.gp", "band(1): x -[b,>]- y -[a,<]-", arc, "--json"]);
        assert_eq!(o.status.code(), Some(0));
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["spherical_agrees"], true);
    }
}

#[test]
fn surface_dot_is_a_graph() {
    let o = gentle(&["surface", "data/a2.gp", "--dot"]);
    assert!(stdout(&o).starts_with("graph"));
}

#[test]
fn corpus_and_selftest_are_deterministic() {
    let a = gentle(&["corpus", "--count", "3", "--seed", "9"]);
    let b = gentle(&["corpus", "--count", "3", "--seed", "9"]);
    assert_eq!(a.stdout, b.stdout);
    let o = gentle(&["selftest", "--only", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS"));
}

#[test]
fn hom_cone_tau_and_endo_run() {
    assert_eq!(gentle(&["hom", "data/kronecker.gp", "arc: x", "arc: y"]).status.code(), Some(0));
    assert_eq!(gentle(&["cone", "data/a3_linear.gp", "arc: 1", "arc: 3"]).status.code(), Some(0));
    assert_eq!(gentle(&["tau", "data/a3_linear.gp", "arc: 2", "--power", "4"]).status.code(), Some(0));
    let o = gentle(&["endo", "data/kronecker.gp"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("arrow"));
}
