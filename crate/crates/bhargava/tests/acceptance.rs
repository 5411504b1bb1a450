//! The acceptance suite: every criterion from the verification checklist,
//! run at full grid size, one pass/fail line each.

use std::time::Duration;

use bhargava::verify::{run, Selector};

#[test]
fn acceptance() {
    let reports = run(Selector::All, Duration::from_secs(3600));
    assert_eq!(reports.len(), 10);
    let mut all_passed = true;
    for report in &reports {
        let status = if report.passed { "PASS" } else { "FAIL" };
        println!("{status}  {}: {}", report.name, report.detail);
        all_passed &= report.passed;
    }
    assert!(all_passed, "at least one acceptance criterion failed");
}
