//! Acceptance criteria 1-13, one line each. Runs without the libtest harness so
//! the verdict lines are always printed.
//!
//! A check that fails with a recorded, analysed deviation is reported as FAIL
//! but does not fail the target; any other failure does.

use std::process::ExitCode;

use cubetorus::checks::{run_checks, Catalogs};

fn main() -> ExitCode {
    let cats = Catalogs::new();
    let reports = run_checks(5, &cats, |r| println!("{r}"));
    assert_eq!(reports.len(), 13);
    let passed = reports.iter().filter(|r| r.passed).count();
    let known: Vec<u8> = reports.iter().filter(|r| !r.passed && r.known_deviation.is_some()).map(|r| r.id).collect();
    let unexpected: Vec<u8> = reports.iter().filter(|r| !r.passed && r.known_deviation.is_none()).map(|r| r.id).collect();
    println!("acceptance: {passed}/13 passed; known deviations {known:?}; unexpected failures {unexpected:?}");
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
