use finsub::homology::HomologyGroup;
use finsub::verify::{catalog, find_case, run_case, run_case_capped, run_suite, select, Report, Status, Tag};

#[test]
fn report_round_trips_through_json() {
    let report = run_suite("sub2-*", 2).unwrap();
    assert!(report.success);
    assert_eq!(report.passed, report.cases.len());
    let text = serde_json::to_string(&report).unwrap();
    let back: Report = serde_json::from_str(&text).unwrap();
    assert_eq!(back, report);
}

#[test]
fn selftest_suite_fails() {
    let report = run_suite("selftest", 1).unwrap();
    assert!(!report.success);
    assert_eq!(report.failed, 1);
    assert!(select("paper").iter().all(|c| !c.id.starts_with("selftest")));
}

#[test]
fn every_criterion_has_a_required_case() {
    for k in 1..=12 {
        assert!(catalog().iter().any(|c| c.criterion == k && c.tag == Tag::Required), "criterion {k}");
    }
}

#[test]
fn tiny_cap_skips_instead_of_failing() {
    let case = find_case("sub3-s2").unwrap();
    let r = run_case_capped(&case, 1000);
    assert_eq!(r.status, Status::Skipped);
    assert!(r.is_failure());
}

#[test]
fn homology_json_has_the_documented_shape() {
    let r = run_case(&find_case("sp2-s1").unwrap());
    assert_eq!(r.status, Status::Pass);
    assert_eq!(r.computed[1], serde_json::json!({"dim": 1, "betti": 1, "torsion": []}));
    let g = HomologyGroup::new(4, 1, &[2]);
    assert_eq!(serde_json::to_string(&g).unwrap(), r#"{"dim":4,"betti":1,"torsion":[2]}"#);
}
