use dqw_core::fixtures::{linear_poisson, moyal, theta_rank2};
use dqw_core::hochschild::SolverConfig;
use dqw_core::random::{self, RandomParams};
use dqw_core::star::{validate_star, StarProductSpec};
use dqw_core::tau::{
    apply_tau, build_tau, check_poisson_realization, compute_r_k, constant_theta_tau, homomorphism_error, TauMap,
};
use dqw_core::{GaussianRational, MultiDiffCochain, MultiIndex, QSeries, WElement};

fn assert_good_build(spec: &StarProductSpec, order: u32) -> TauMap {
    let (tau, report) = build_tau(spec, order, true, &SolverConfig::default()).expect("build succeeds");
    assert!(homomorphism_error(&tau, spec).unwrap().is_zero());
    assert!(tau.is_hermitian());
    assert!(tau.section_at_order_zero());
    for (k, c) in tau.components().iter().enumerate() {
        assert!(c.is_homogeneous(k as u32));
    }
    assert!(report.stages.iter().all(|s| s.epsilon_vanishes));
    assert!(check_poisson_realization(&tau, spec, 2).unwrap().passed());
    tau
}

#[test]
fn moyal_plane_order_four() {
    assert_good_build(&moyal(2, 4), 4);
}

#[test]
fn moyal_with_kernel_order_four() {
    assert_good_build(&moyal(3, 4), 4);
}

#[test]
fn linear_poisson_order_three() {
    let spec = linear_poisson(3, &SolverConfig::default()).unwrap();
    assert!(validate_star(&spec, 3, 2).passed());
    assert_good_build(&spec, 3);
}

#[test]
fn zero_spec_gives_the_inclusion() {
    let (tau, _) = build_tau(&StarProductSpec::zero(2), 3, true, &SolverConfig::default()).unwrap();
    assert_eq!(tau, TauMap::inclusion(2, 3));
    for k in 1..=3 {
        assert!(compute_r_k(&StarProductSpec::zero(2), tau.components(), k).unwrap().is_zero());
    }
    let f = QSeries::q(2, 3, 0).mul(&QSeries::q(2, 3, 1)).unwrap();
    assert_eq!(apply_tau(&tau, &f).unwrap(), f.as_welement().clone());
}

#[test]
fn stage_one_fixture_solves_the_first_stage() {
    let spec = moyal(2, 1);
    let h = GaussianRational::ratio(1, 2);
    let e = |k: usize| MultiIndex::unit(2, k);
    let tau1 = MultiDiffCochain::from_terms(
        2,
        1,
        [
            (dqw_core::CochainMonomial { lambda: 0, p: e(0), q: MultiIndex::zeros(2), derivs: vec![e(1)] }, h.clone()),
            (dqw_core::CochainMonomial { lambda: 0, p: e(1), q: MultiIndex::zeros(2), derivs: vec![e(0)] }, -h),
        ],
    )
    .unwrap();
    let tau = TauMap::new(2, vec![MultiDiffCochain::inclusion(2), tau1], true).unwrap();
    assert!(homomorphism_error(&tau, &spec).unwrap().is_zero());
    assert!(tau.is_hermitian());
}

#[test]
fn closed_form_matches_requirements() {
    let spec = moyal(2, 4);
    let tau = constant_theta_tau(&theta_rank2(2), 4).unwrap();
    assert!(homomorphism_error(&tau, &spec).unwrap().is_zero());
    let x = apply_tau(&tau, &QSeries::q(2, 4, 0)).unwrap();
    assert_eq!(x, &WElement::q(2, 4, 0) - &WElement::p(2, 4, 1).scale(&GaussianRational::ratio(1, 2)));
}

#[test]
fn hermitian_tau_commutes_with_conjugation() {
    let spec = moyal(2, 3);
    let (tau, _) = build_tau(&spec, 3, true, &SolverConfig::default()).unwrap();
    let mut rng = random::rng(11);
    let params = RandomParams { lambda_corrections: 1, ..RandomParams::default() };
    for _ in 0..20 {
        let f = random::qseries(&mut rng, 2, 3, &params);
        assert_eq!(apply_tau(&tau, &f.conj()).unwrap(), apply_tau(&tau, &f).unwrap().conj());
    }
}

#[test]
fn rebuild_is_bit_identical() {
    let spec = moyal(2, 3);
    let a = build_tau(&spec, 3, true, &SolverConfig::default()).unwrap();
    let b = build_tau(&spec, 3, true, &SolverConfig::default()).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn tau_and_report_round_trip_through_json() {
    let (tau, report) = build_tau(&moyal(2, 3), 3, true, &SolverConfig::default()).unwrap();
    let t: TauMap = serde_json::from_str(&serde_json::to_string(&tau).unwrap()).unwrap();
    assert_eq!(t, tau);
    let r: dqw_core::tau::BuildReport = serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
    assert_eq!(r, report);
}

#[test]
fn invalid_star_product_is_rejected_with_a_witness() {
    let spec = dqw_core::fixtures::perturbed_moyal(3);
    let err = build_tau(&spec, 3, true, &SolverConfig::default()).unwrap_err();
    assert!(err.to_string().contains("stage"), "{err}");
}
