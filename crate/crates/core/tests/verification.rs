use deltamass_core::classical_dynamics::ModelParams;
use deltamass_core::quantum_spectral::SingleTermOrdering;
use deltamass_core::report::Status;
use deltamass_core::verification::*;

#[test]
fn full_suite_passes_with_defaults() {
    let reports = run_all(&SuiteConfig::default()).unwrap();
    assert_eq!(reports.len(), check_ids().len());
    for r in &reports {
        println!("{} {} {:e} {}", r.check_id, r.status, r.measured, r.notes);
    }
    assert!(reports.iter().all(|r| r.status == Status::Pass), "{}", summary_table(&reports));
    assert!(overall_pass(&reports));
}

#[test]
fn runs_are_reproducible() {
    let ids = ["singularity_classification", "pct_identity", "quantization_roundtrip", "finite_part"];
    let config = SuiteConfig { seed: 7, ..SuiteConfig::default() };
    let a = format!("{:?}", run_suite(&ids, &config).unwrap());
    let b = format!("{:?}", run_suite(&ids, &config).unwrap());
    assert_eq!(a, b);
}

#[test]
fn negative_control_passes_only_when_controls_fail() {
    let r = &run_suite(&["residual_negative_control"], &SuiteConfig::default()).unwrap()[0];
    assert!(r.passed());
    assert!(r.measured > 1e-3);
}

#[test]
fn every_check_carries_a_provenance_tag() {
    let reports = run_all(&SuiteConfig::default()).unwrap();
    let ids: Vec<_> = reports.iter().map(|r| r.check_id.clone()).collect();
    assert_eq!(ids, check_ids());
    for r in reports {
        assert!(["PAPER", "TRIVIAL", "DERIVED"].contains(&r.provenance.to_string().as_str()));
    }
}

#[test]
fn custom_configuration_is_honoured() {
    let config = SuiteConfig {
        params: ModelParams::new(0.7, 0.5, 2.0, 1.0).unwrap(),
        ordering: SingleTermOrdering::new(-1.0, 0.0).unwrap(),
        seed: 3,
    };
    let reports = run_suite(&["energy_conservation", "integrator_vs_exact", "similarity", "ordering_constraints"], &config).unwrap();
    assert!(reports.iter().all(|r| r.passed()), "{}", summary_table(&reports));
}

#[test]
fn invalid_configuration_is_rejected() {
    let mut config = SuiteConfig::default();
    config.params.c1 = -1.0;
    assert!(run_suite(&["finite_part"], &config).is_err());
}
