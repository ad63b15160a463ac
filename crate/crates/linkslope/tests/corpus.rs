use linkslope::corpus::{run_manifest, Manifest, Resolver};

#[test]
fn bundled_manifest_passes() {
    let report = run_manifest(&Manifest::bundled(), &Resolver::default());
    let failures: Vec<_> = report.results.iter().filter(|r| !r.passed).map(|r| format!("{}: {}", r.name, r.detail)).collect();
    assert_eq!(report.passed, Manifest::bundled().cases.len());
    assert!(report.warnings.is_empty(), "{:?}", report.warnings);
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}
