//! The ten acceptance criteria, each against its time budget.
//!
//! Every test writes a PASS or FAIL line straight to stdout, past the test
//! harness capture, so a plain `cargo test` run doubles as a report.

use std::io::Write;

use gentle::selftest::{run_criterion, CriterionResult, CRITERIA};

const SEED: u64 = 0x9e11e;

fn check(id: usize) -> CriterionResult {
    let r = run_criterion(id, SEED);
    let _ = writeln!(std::io::stdout(), "{}", r.line());
    assert!(r.passed, "criterion {id} failed: {}", r.detail);
    if let Some(budget) = r.budget_ms {
        assert!(r.elapsed_ms <= budget, "criterion {id} took {} ms, budget {budget} ms", r.elapsed_ms);
    }
    r
}

#[test]
fn criterion_01_gentle_validation() {
    check(1);
}

#[test]
fn criterion_02_surface_golden_values() {
    check(2);
}

#[test]
fn criterion_03_aag_consistency() {
    check(3);
}

#[test]
fn criterion_04_fractional_calabi_yau() {
    check(4);
}

#[test]
fn criterion_05_oracle_agreement() {
    check(5);
}

#[test]
fn criterion_06_cone_resolution() {
    check(6);
}

#[test]
fn criterion_07_endomorphism_round_trip() {
    check(7);
}

#[test]
fn criterion_08_derived_equivalence_decisions() {
    check(8);
}

#[test]
fn criterion_09_spherical_equals_dehn_twist() {
    check(9);
}

#[test]
fn criterion_10_auslander_reiten() {
    check(10);
}

#[test]
fn every_criterion_is_covered() {
    assert_eq!(CRITERIA.len(), 10);
}

#[test]
fn selftest_is_deterministic() {
    let a: Vec<_> = (1..=10).map(|i| (run_criterion(i, 3).passed, run_criterion(i, 3).detail)).collect();
    let b: Vec<_> = (1..=10).map(|i| (run_criterion(i, 3).passed, run_criterion(i, 3).detail)).collect();
    assert_eq!(a, b);
    assert!(a.iter().all(|(ok, _)| *ok), "{a:?}");
}
