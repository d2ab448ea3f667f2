use dqw_core::fixtures::{delta_test_element, moyal, theta_rank2};
use dqw_core::hochschild::SolverConfig;
use dqw_core::positivity::{
    check_positivity, deform_functional, glue_functionals, make_point_functional, wick_positivity_certificate, Atom,
    Functional, Outcome, StateFunctional,
};
use dqw_core::random::{self, RandomParams};
use dqw_core::star::StarProductSpec;
use dqw_core::tau::{build_tau, constant_theta_tau, TauMap};
use dqw_core::{GaussianRational, Matrix, QSeries, SeriesSign};
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

const K: u32 = 4;

fn origin(n: usize) -> Vec<BigRational> {
    vec![BigRational::zero(); n]
}

fn test_params() -> RandomParams {
    RandomParams { max_q_degree: 3, lambda_corrections: 1, ..RandomParams::default() }
}

fn random_tests(seed: u64, size: usize, count: usize) -> Vec<Matrix<QSeries>> {
    let mut rng = random::rng(seed);
    (0..count).map(|_| random::qseries_matrix(&mut rng, 2, size, K, &test_params())).collect()
}

fn solver_tau(spec: &StarProductSpec) -> TauMap {
    build_tau(spec, K, true, &SolverConfig::default()).unwrap().0
}

fn assert_never_negative(tau: &TauMap, spec: &StarProductSpec, seed: u64, size: usize, count: usize) {
    let mut rng = random::rng(seed);
    let base = random::state_functional(&mut rng, 2, size, 2);
    let omega = Functional::Deformed(Box::new(deform_functional(&base, tau).unwrap()));
    let verdict = check_positivity(&omega, spec, &random_tests(seed, size, count)).unwrap();
    assert!(verdict.negative.is_empty(), "negative test: {:?}", verdict.first_negative());
    assert_ne!(verdict.outcome, Outcome::Negative);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn wick_squares_have_nonnegative_coefficients(seed in any::<u64>(), size in 1usize..=2) {
        let mut rng = random::rng(seed);
        let omega = random::state_functional(&mut rng, 2, size, 2);
        let a = random::welement_matrix(&mut rng, 2, size, 3, 3, 3, false);
        let cert = wick_positivity_certificate(&omega, &a).unwrap();
        prop_assert!(cert.lambda_free);
        prop_assert!(cert.reproduces);
        prop_assert!(cert.all_nonnegative(), "{:?}", cert.value);
        prop_assert_eq!(&cert.value, &cert.decomposition_sum);
    }

    #[test]
    fn deformed_functional_deforms_the_base(seed in any::<u64>(), size in 1usize..=2) {
        let tau = constant_theta_tau(&theta_rank2(2), K).unwrap();
        let mut rng = random::rng(seed);
        let base = random::state_functional(&mut rng, 2, size, 2);
        let f = random::qseries_matrix(&mut rng, 2, size, K, &test_params());
        let omega = deform_functional(&base, &tau).unwrap();
        let classical = f.map(|x| QSeries::from_qpoly(&x.coefficient(0), K));
        prop_assert_eq!(omega.apply(&f).unwrap().coeff(0), base.apply(&classical).unwrap().coeff(0));
    }
}

#[test]
fn deformed_fixture_tau_is_never_negative() {
    let spec = moyal(2, K);
    let tau = constant_theta_tau(&theta_rank2(2), K).unwrap();
    assert_never_negative(&tau, &spec, 1, 1, 30);
    assert_never_negative(&tau, &spec, 2, 2, 10);
}

#[test]
fn deformed_solver_tau_is_never_negative() {
    let spec = moyal(2, K);
    let tau = solver_tau(&spec);
    assert_never_negative(&tau, &spec, 3, 1, 30);
    assert_never_negative(&tau, &spec, 4, 2, 10);
}

#[test]
fn delta_counterexample_and_its_deformation() {
    let spec = moyal(2, K);
    let f = vec![Matrix::scalar(delta_test_element(2, K))];
    let delta = StateFunctional::delta(origin(2));
    let undeformed = check_positivity(&Functional::Classical(delta.clone()), &spec, &f).unwrap();
    assert_eq!(undeformed.tests[0].value.coeff_strings(), ["0", "-1"]);
    assert_eq!(undeformed.outcome, Outcome::Negative);
    let tau = constant_theta_tau(&theta_rank2(2), K).unwrap();
    let deformed = Functional::Deformed(Box::new(deform_functional(&delta, &tau).unwrap()));
    let verdict = check_positivity(&deformed, &spec, &f).unwrap();
    assert_eq!(verdict.tests[0].sign, SeriesSign::Positive);
    assert_eq!(verdict.sigma, Some(-1));
}

#[test]
fn values_are_real_for_hermitian_data() {
    let spec = moyal(2, K);
    let tau = solver_tau(&spec);
    assert!(tau.is_hermitian());
    let base = random::state_functional(&mut random::rng(8), 2, 2, 2);
    let omega = deform_functional(&base, &tau).unwrap();
    for f in random_tests(9, 2, 10) {
        let square = spec.star_apply_matrix(&f.adjoint(), &f).unwrap();
        assert!(omega.apply(&square).unwrap().to_real().is_ok());
    }
}

#[test]
fn glued_positive_parts_stay_nonnegative() {
    let spec = moyal(2, K);
    let tau = constant_theta_tau(&theta_rank2(2), K).unwrap();
    let mut rng = random::rng(21);
    let mut deformed = || {
        let base = random::state_functional(&mut rng, 2, 1, 1);
        Functional::Deformed(Box::new(deform_functional(&base, &tau).unwrap()))
    };
    let w = |k: i64| QSeries::constant(2, K, GaussianRational::ratio(k, 5));
    let (a, b) = (deformed(), deformed());
    let glued = glue_functionals(vec![(w(3), a.clone()), (w(4), b.clone())], &spec).unwrap();
    let tests = random_tests(22, 1, 20);
    for f in &tests {
        let expected = a
            .apply(f)
            .unwrap()
            .scale(&GaussianRational::ratio(9, 25))
            .add(&b.apply(f).unwrap().scale(&GaussianRational::ratio(16, 25)));
        assert_eq!(glued.apply(f).unwrap(), expected);
    }
    let verdict = check_positivity(&glued, &spec, &tests).unwrap();
    assert!(verdict.negative.is_empty());
    let single = glue_functionals(vec![(QSeries::one(2, K), a.clone())], &spec).unwrap();
    assert_eq!(single.apply(&tests[0]).unwrap(), a.apply(&tests[0]).unwrap());
}

#[test]
fn documented_point_functionals() {
    let one = GaussianRational::from_int(1);
    let delta = make_point_functional(2, 1, vec![Atom { point: origin(2), vector: vec![one.clone()] }]).unwrap();
    assert_eq!(delta, StateFunctional::delta(origin(2)));
    let empty = make_point_functional(2, 1, vec![]).unwrap();
    assert!(empty.mass().is_zero());
    let compress = make_point_functional(
        2,
        2,
        vec![Atom { point: origin(2), vector: vec![one.clone(), GaussianRational::from_int(0)] }],
    )
    .unwrap();
    let x = QSeries::q(2, 2, 0).add(&QSeries::constant(2, 2, GaussianRational::from_int(7)));
    let zero = QSeries::zero(2, 2);
    let a = Matrix::from_rows(vec![vec![x, QSeries::one(2, 2)], vec![QSeries::one(2, 2), zero]]).unwrap();
    assert_eq!(compress.apply(&a).unwrap().coeffs(), &[GaussianRational::from_int(7)]);
    assert!(make_point_functional(2, 1, vec![Atom { point: origin(3), vector: vec![one] }]).is_err());
}

#[test]
fn zero_test_is_inconclusive() {
    let spec = moyal(2, K);
    let omega = Functional::Classical(StateFunctional::delta(origin(2)));
    let verdict = check_positivity(&omega, &spec, &[Matrix::scalar(QSeries::zero(2, K))]).unwrap();
    assert_eq!(verdict.outcome, Outcome::Inconclusive);
    assert_eq!(verdict.inconclusive, vec![0]);
}
