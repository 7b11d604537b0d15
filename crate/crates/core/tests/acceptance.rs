use std::io::Write;

use prolate::criteria::{compute_artifacts, evaluate, render, RunConfig};

#[test]
fn acceptance() {
    let artifacts = compute_artifacts(RunConfig::full()).expect("experiments run");
    let results = evaluate(&artifacts);
    let passed = results.iter().filter(|r| r.passed).count();
    // Written to the raw handle so the report shows without --nocapture.
    let report = format!("\n{}{passed}/{} criteria pass\n", render(&results), results.len());
    let mut out = std::io::stdout().lock();
    out.write_all(report.as_bytes()).unwrap();
    out.flush().unwrap();
    let unexpected: Vec<u8> = results.iter().filter(|r| !r.passed && !r.known_deviation).map(|r| r.id).collect();
    assert!(unexpected.is_empty(), "criteria failed outside the documented deviations: {unexpected:?}");
}
