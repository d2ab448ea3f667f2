use dqw_core::hochschild::{
    coboundary, poincare_homotopy, solve_coboundary, solve_cochain_equation, Ansatz, CoboundaryMode, SolverConfig,
};
use dqw_core::random::{self, RandomParams};
use dqw_core::{CochainMonomial, GaussianRational, KoszulForm, MultiDiffCochain, MultiIndex};
use proptest::prelude::*;

const DEFORMED: CoboundaryMode = CoboundaryMode::Deformed;
const CLASSICAL: CoboundaryMode = CoboundaryMode::Classical;

fn mi(v: &[u16]) -> MultiIndex {
    MultiIndex::from_slice(v)
}

fn term(derivs: &[&[u16]], c: GaussianRational) -> MultiDiffCochain {
    let n = derivs[0].len();
    MultiDiffCochain::differential(n, MultiIndex::zeros(n), derivs.iter().map(|d| mi(d)).collect(), c)
}

fn random_cochain(seed: u64, arity: usize) -> MultiDiffCochain {
    random::cochain(&mut random::rng(seed), 2, arity, 2, 2, 2, 3)
}

/// `λ · Σ_{i<j} c^{ij}(q) (∂_i f ∂_j g − ∂_j f ∂_i g)` with random coefficients.
fn lambda_antisymmetric(seed: u64, n: usize) -> MultiDiffCochain {
    let mut rng = random::rng(seed);
    let params = RandomParams { max_q_degree: 2, max_terms: 2, ..RandomParams::default() };
    let mut phi = MultiDiffCochain::zero(n, 2);
    for i in 0..n {
        for j in (i + 1)..n {
            let c = random::qpolynomial(&mut rng, n, &params);
            let (ei, ej) = (MultiIndex::unit(n, i), MultiIndex::unit(n, j));
            phi = phi
                .add(&MultiDiffCochain::with_coefficient(&c, vec![ei.clone(), ej.clone()]))
                .sub(&MultiDiffCochain::with_coefficient(&c, vec![ej, ei]));
        }
    }
    phi.shift_lambda(1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn coboundary_squares_to_zero(seed in any::<u64>(), arity in 0usize..=2) {
        let phi = random_cochain(seed, arity);
        prop_assert!(coboundary(&coboundary(&phi, DEFORMED), DEFORMED).is_zero());
        prop_assert!(coboundary(&coboundary(&phi, CLASSICAL), CLASSICAL).is_zero());
    }

    #[test]
    fn classical_limit_intertwines_coboundaries(seed in any::<u64>(), arity in 0usize..=2) {
        let phi = random_cochain(seed, arity);
        let lhs = coboundary(&phi, DEFORMED).classical_limit();
        let rhs = coboundary(&phi.classical_limit(), CLASSICAL);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn involution_commutes_with_coboundary_up_to_sign(seed in any::<u64>(), arity in 1usize..=2) {
        let phi = random_cochain(seed, arity);
        prop_assert_eq!(phi.involution().involution(), phi.clone());
        let lhs = coboundary(&phi, DEFORMED).involution();
        let rhs = coboundary(&phi.involution(), DEFORMED);
        let expected = if arity % 2 == 1 { rhs } else { rhs.neg() };
        prop_assert_eq!(lhs, expected);
    }

    #[test]
    fn alt_is_idempotent(seed in any::<u64>()) {
        let phi = random_cochain(seed, 2);
        let a = phi.alt();
        prop_assert_eq!(a.alt(), a);
    }

    #[test]
    fn poincare_homotopy_inverts_d_p(seed in any::<u64>(), n in 1usize..=3, degree in 1usize..=3) {
        prop_assume!(degree <= n);
        let omega = random::koszul_form(&mut random::rng(seed), n, degree, 3, 4);
        let dh = poincare_homotopy(&omega).unwrap().d_p();
        let hd = poincare_homotopy(&omega.d_p()).unwrap();
        prop_assert_eq!(dh.add(&hd).unwrap(), omega.clone());
        prop_assert!(omega.d_p().d_p().is_zero());
    }
}

#[test]
fn solver_recovers_fifty_seeded_coboundaries() {
    let config = SolverConfig::default();
    let mut solved = 0;
    let mut seed = 1000u64;
    while solved < 50 {
        seed += 1;
        let d = (seed % 3) as u32;
        let psi0 = random::cochain(&mut random::rng(seed), 2, 1, d, 2, 2, 3).homogeneous_part(d);
        let phi = coboundary(&psi0, DEFORMED);
        if phi.is_zero() {
            continue;
        }
        let (psi, report) = solve_coboundary(&phi, &config).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        assert!(report.verified);
        assert_eq!(coboundary(&psi, DEFORMED), phi, "seed {seed}");
        assert!(psi.is_homogeneous(d), "seed {seed}");
        solved += 1;
    }
}

#[test]
fn lambda_multiples_of_antisymmetric_biderivations_are_coboundaries() {
    let config = SolverConfig::default();
    for seed in 0..12u64 {
        let n = 2 + (seed % 2) as usize;
        let phi = lambda_antisymmetric(seed, n);
        assert!(coboundary(&phi, DEFORMED).is_zero());
        assert!(!phi.alt().is_zero() || phi.is_zero());
        let (psi, report) = solve_coboundary(&phi, &config).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        assert!(report.verified);
        assert_eq!(coboundary(&psi, DEFORMED), phi);
    }
}

#[test]
fn classical_stage_splits_classical_coboundaries() {
    let config = SolverConfig::default();
    for seed in 0..20u64 {
        let chi = random::cochain(&mut random::rng(500 + seed), 2, 1, 0, 3, 2, 3);
        let phi = coboundary(&chi, CLASSICAL);
        let (psi, _) = solve_cochain_equation(&phi, Ansatz::classical(), &config).unwrap();
        assert_eq!(coboundary(&psi, CLASSICAL), phi.classical_limit());
    }
}

#[test]
fn solver_rejects_non_cocycles_and_antisymmetric_classical_parts() {
    let config = SolverConfig::default();
    let bracket = term(&[&[1, 0], &[0, 1]], GaussianRational::from_int(1))
        .sub(&term(&[&[0, 1], &[1, 0]], GaussianRational::from_int(1)));
    assert!(solve_coboundary(&bracket, &config).unwrap_err().to_string().contains("antisymmetric"));
    let not_cocycle =
        MultiDiffCochain::differential(2, mi(&[1, 0]), vec![mi(&[1, 0]), mi(&[0, 0])], GaussianRational::from_int(1));
    assert!(solve_coboundary(&not_cocycle, &config).unwrap_err().to_string().contains("cocycle"));
}

#[test]
fn documented_alt_and_involution_values() {
    let half = GaussianRational::ratio(1, 2);
    let one = GaussianRational::from_int(1);
    let phi = term(&[&[1, 0], &[0, 1]], one.clone());
    let expected = term(&[&[1, 0], &[0, 1]], half.clone()).sub(&term(&[&[0, 1], &[1, 0]], half));
    assert_eq!(phi.alt(), expected);
    assert!(term(&[&[1, 0], &[1, 0]], one.clone()).alt().is_zero());
    assert_eq!(phi.involution(), term(&[&[0, 1], &[1, 0]], one.clone()));

    let i_lambda = term(&[&[1, 0]], GaussianRational::i()).shift_lambda(1);
    assert_eq!(i_lambda.involution(), i_lambda.neg());
    let p_dq = MultiDiffCochain::from_terms(
        2,
        1,
        [(CochainMonomial { lambda: 0, p: mi(&[1, 0]), q: mi(&[0, 0]), derivs: vec![mi(&[1, 0])] }, one)],
    )
    .unwrap();
    assert_eq!(p_dq.involution(), p_dq);
}

#[test]
fn documented_classical_limit_values() {
    let one = GaussianRational::from_int(1);
    let p_term = MultiDiffCochain::from_terms(
        2,
        1,
        [(CochainMonomial { lambda: 0, p: mi(&[1, 0]), q: mi(&[0, 0]), derivs: vec![mi(&[0, 1])] }, one.clone())],
    )
    .unwrap();
    let phi = term(&[&[1, 0]], one).shift_lambda(1).add(&p_term);
    assert_eq!(phi.classical_limit(), p_term);
    let pi = MultiDiffCochain::inclusion(2);
    assert_eq!(pi.classical_limit(), pi);
}

#[test]
fn documented_homotopy_values() {
    let one = GaussianRational::from_int(1);
    let half = GaussianRational::ratio(1, 2);
    let q0 = mi(&[0, 0]);
    let w = KoszulForm::monomial(mi(&[1, 0]), q0.clone(), &[1], one.clone()).unwrap();
    let h = poincare_homotopy(&w).unwrap();
    assert_eq!(h, KoszulForm::monomial(mi(&[1, 1]), q0.clone(), &[], half.clone()).unwrap());
    assert_eq!(h.d_p().add(&poincare_homotopy(&w.d_p()).unwrap()).unwrap(), w);
    let area = KoszulForm::monomial(mi(&[0, 0]), q0.clone(), &[0, 1], one.clone()).unwrap();
    let expected = KoszulForm::monomial(mi(&[1, 0]), q0.clone(), &[1], half.clone())
        .unwrap()
        .sub(&KoszulForm::monomial(mi(&[0, 1]), q0.clone(), &[0], half).unwrap())
        .unwrap();
    assert_eq!(poincare_homotopy(&area).unwrap(), expected);
    let dp1 = KoszulForm::monomial(mi(&[0, 0]), q0.clone(), &[0], one.clone()).unwrap();
    assert_eq!(poincare_homotopy(&dp1).unwrap(), KoszulForm::monomial(mi(&[1, 0]), q0, &[], one).unwrap());
}
