use std::io::Write;

use maass_cli::acceptance::{acceptance_suite, lemma_corpus_report, Profile};
use maass_core::quadform::{eta, EvenLattice, Place};
use maass_core::siegel::CapabilityTable;

/// Written around the test harness capture so the table always shows up in the log.
fn emit(line: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}

#[test]
fn acceptance() {
    let report = acceptance_suite(Profile::Full, &CapabilityTable::default());
    for c in &report.criteria {
        emit(&c.line());
    }
    emit(&format!("acceptance total {:.2}s", report.elapsed.as_secs_f64()));
    assert_eq!(report.criteria.len(), 9);
    let failed: Vec<u8> = report.criteria.iter().filter(|c| !c.pass).map(|c| c.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn flipped_hilbert_sign_fails_the_lemma_criterion() {
    fn flipped(s: &EvenLattice, v: Place) -> maass_core::Result<i8> {
        eta(s, v).map(|e| -e)
    }
    let report = lemma_corpus_report(Profile::Quick, &CapabilityTable::default(), flipped);
    emit(&format!("negative control: {}", report.line()));
    assert!(!report.pass);
    assert!(report.detail.contains("eta product"));
}
