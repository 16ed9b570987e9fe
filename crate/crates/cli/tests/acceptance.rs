//! Acceptance criteria, one test per criterion, each printing a PASS/FAIL line.

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use tropo_core::acceptance::{self, CriterionReport};

fn announce(line: &str) {
    // Written straight to the stream so the line shows even when output is captured.
    let _ = writeln!(std::io::stderr(), "{line}");
}

fn check(id: u8) {
    let report: CriterionReport = acceptance::run(id).expect("known criterion");
    announce(&report.to_string());
    assert!(report.passed, "{report}");
}

#[test]
fn c01_oracle_equivalence() {
    check(1);
}

#[test]
fn c02_minimum_uncertainty_twin_beams() {
    check(2);
}

#[test]
fn c03_purity_limits() {
    check(3);
}

#[test]
fn c04_squeezing_golden_values() {
    check(4);
}

#[test]
fn c05_near_threshold_excess_noise() {
    check(5);
}

#[test]
fn c06_partial_purity_dominance() {
    check(6);
}

#[test]
fn c07_glauber_moments() {
    check(7);
}

#[test]
fn c08_stationary_purity() {
    check(8);
}

#[test]
fn c09_counting_statistics() {
    check(9);
}

#[test]
fn c10_figure_reproduction() {
    check(10);
}

#[test]
fn c11_selftest_exit_status_and_runtime() {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_tropo"))
        .arg("selftest")
        .output()
        .expect("run tropo selftest");
    let elapsed = start.elapsed();
    let code = out.status.code();
    let fast = elapsed < Duration::from_secs(60);
    let passed = code == Some(0) && fast;
    let verdict = if passed { "PASS" } else { "FAIL" };
    announce(&format!(
        "C11 {verdict} selftest: exit status {code:?} after {:.1}s (limit 60s)",
        elapsed.as_secs_f64()
    ));
    assert!(fast, "selftest took {elapsed:?}");
    assert_eq!(code, Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}
