use qcond_core::casebook::{run_all, run_case, CASE_IDS};

#[test]
fn every_case_passes() {
    let reports = run_all(5).unwrap();
    assert_eq!(reports.len(), CASE_IDS.len());
    for r in &reports {
        assert!(r.passed(), "{}", r.render());
    }
}

#[test]
fn reports_are_deterministic() {
    for id in ["identity", "thm4", "def1"] {
        assert_eq!(run_case(id, 9).unwrap().render(), run_case(id, 9).unwrap().render());
    }
}

#[test]
fn unknown_case_is_an_error() {
    assert!(run_case("thm7", 0).is_err());
}
