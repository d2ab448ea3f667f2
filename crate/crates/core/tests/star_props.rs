use dqw_core::fixtures::{moyal, perturbed_moyal, theta_rank2};
use dqw_core::random;
use dqw_core::star::{
    fock_apply, fock_apply_matrix, iota_star, make_constant_theta_star, pi_star, resolve_fock_sign, validate_star,
    verify_fock_sign, weyl_product, weyl_product_matrix, wick_product, wick_product_matrix, z, zbar, Direction,
    StarProductSpec,
};
use dqw_core::{GaussianRational, Matrix, MultiIndex, QPolynomial, QSeries, WElement, WMonomial, UNBOUNDED};
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

/// Monomials `q^L p^I` with `|L|, |I| ≤ 3`.
fn monomials(n: usize, k: u32) -> Vec<WElement> {
    let mut out = Vec::new();
    for q in MultiIndex::up_to(n, 3) {
        for p in MultiIndex::up_to(n, 3) {
            out.push(WElement::monomial(n, k, WMonomial::new(0, p, q.clone()), GaussianRational::from_int(1)));
        }
    }
    out
}

#[test]
fn weyl_product_is_associative_on_all_monomial_triples() {
    use rayon::prelude::*;
    let basis = monomials(2, 6);
    let products: Vec<Vec<WElement>> =
        basis.par_iter().map(|a| basis.iter().map(|b| weyl_product(a, b).unwrap()).collect()).collect();
    (0..basis.len()).into_par_iter().for_each(|i| {
        for j in 0..basis.len() {
            for k in 0..basis.len() {
                let left = weyl_product(&products[i][j], &basis[k]).unwrap();
                let right = weyl_product(&basis[i], &products[j][k]).unwrap();
                assert_eq!(left, right, "({i}, {j}, {k})");
            }
        }
    });
}

#[test]
fn weyl_product_is_hermitian_and_unital_on_monomials() {
    let basis = monomials(2, 6);
    let one = WElement::one(2, 6);
    for a in &basis {
        assert_eq!(&weyl_product(&one, a).unwrap(), a);
        assert_eq!(&weyl_product(a, &one).unwrap(), a);
        for b in &basis {
            assert_eq!(weyl_product(a, b).unwrap().conj(), weyl_product(&b.conj(), &a.conj()).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn weyl_is_associative_on_sampled_triples_in_three_dimensions(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let mut draw = || random::welement(&mut rng, 3, 5, 4, 3, true);
        let (a, b, c) = (draw(), draw(), draw());
        let left = weyl_product(&weyl_product(&a, &b).unwrap(), &c).unwrap();
        let right = weyl_product(&a, &weyl_product(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn deg_is_a_derivation_of_the_weyl_product(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let a = random::welement(&mut rng, 2, 5, 4, 4, true);
        let b = random::welement(&mut rng, 2, 5, 4, 4, true);
        let lhs = weyl_product(&a, &b).unwrap().deg_operator();
        let rhs = &weyl_product(&a.deg_operator(), &b).unwrap() + &weyl_product(&a, &b.deg_operator()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn wick_product_is_associative(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let mut draw = || random::welement(&mut rng, 2, 4, 3, 3, true);
        let (a, b, c) = (draw(), draw(), draw());
        let left = wick_product(&wick_product(&a, &b).unwrap(), &c).unwrap();
        let right = wick_product(&a, &wick_product(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn matrix_products_are_associative_and_hermitian(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let mut draw = || random::welement_matrix(&mut rng, 1, 2, 4, 3, 2, true);
        let (a, b, c) = (draw(), draw(), draw());
        let ab = weyl_product_matrix(&a, &b).unwrap();
        prop_assert_eq!(
            weyl_product_matrix(&ab, &c).unwrap(),
            weyl_product_matrix(&a, &weyl_product_matrix(&b, &c).unwrap()).unwrap()
        );
        prop_assert_eq!(ab.adjoint(), weyl_product_matrix(&b.adjoint(), &a.adjoint()).unwrap());
        let sigma = resolve_fock_sign(1, 4).unwrap().sigma;
        // E does not preserve deg, so compare untruncated polynomials
        let (a, b) = (a.map(|w| w.with_truncation(UNBOUNDED)), b.map(|w| w.with_truncation(UNBOUNDED)));
        let lhs = fock_apply_matrix(&wick_product_matrix(&a, &b).unwrap(), sigma, Direction::Forward);
        let rhs = weyl_product_matrix(
            &fock_apply_matrix(&a, sigma, Direction::Forward),
            &fock_apply_matrix(&b, sigma, Direction::Forward),
        )
        .unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn constant_theta_products_are_associative(seed in any::<u64>()) {
        let spec = moyal(3, 4);
        let mut rng = random::rng(seed);
        let params = random::RandomParams { lambda_corrections: 1, ..Default::default() };
        let mut draw = || random::qseries(&mut rng, 3, 4, &params);
        let (f, g, h) = (draw(), draw(), draw());
        let left = spec.star_apply(&spec.star_apply(&f, &g).unwrap(), &h).unwrap();
        let right = spec.star_apply(&f, &spec.star_apply(&g, &h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }
}

#[test]
fn exactly_one_fock_sign_passes() {
    for n in [1, 2] {
        let sign = resolve_fock_sign(n, 4).unwrap();
        assert_eq!(sign.sigma, -1);
        assert!(verify_fock_sign(n, 4, -sign.sigma).is_err());
    }
}

#[test]
fn documented_wick_and_fock_values() {
    let (z1, zb1) = (z(1, 3, 0), zbar(1, 3, 0));
    let zz = z1.multiply(&zb1).unwrap();
    let two_lambda = WElement::lambda(1, 3).scale(&GaussianRational::from_int(2));
    assert_eq!(wick_product(&z1, &zb1).unwrap(), &zz + &two_lambda);
    assert_eq!(wick_product(&zb1, &z1).unwrap(), zz);
    let wick_comm = &wick_product(&z1, &zb1).unwrap() - &wick_product(&zb1, &z1).unwrap();
    let weyl_comm = &weyl_product(&z1, &zb1).unwrap() - &weyl_product(&zb1, &z1).unwrap();
    assert_eq!(wick_comm, weyl_comm);
    let e = fock_apply(&wick_product(&z1, &zb1).unwrap(), -1, Direction::Forward);
    assert_eq!(e, weyl_product(&z1, &zb1).unwrap());
    let q = WElement::q(1, 3, 0);
    assert_eq!(fock_apply(&q, -1, Direction::Forward), q);
}

#[test]
fn documented_weyl_values() {
    let (q, p) = (WElement::q(1, 3, 0), WElement::p(1, 3, 0));
    let half_il = WElement::lambda(1, 3).scale(&GaussianRational::complex(0, 1, 1, 2));
    let qp = q.multiply(&p).unwrap();
    assert_eq!(weyl_product(&q, &p).unwrap(), &qp + &half_il);
    assert_eq!(weyl_product(&p, &q).unwrap(), &qp - &half_il);
    let i = GaussianRational::i();
    let a = &q - &p.scale(&i);
    let b = &q + &p.scale(&i);
    let expected = &(&q.multiply(&q).unwrap() + &p.multiply(&p).unwrap()) - &WElement::lambda(1, 3);
    assert_eq!(weyl_product(&a, &b).unwrap(), expected);
}

#[test]
fn chart_maps() {
    let q1q2 = QSeries::q(2, 3, 0).mul(&QSeries::q(2, 3, 1)).unwrap();
    assert_eq!(iota_star(&pi_star(&q1q2)), q1q2);
    let prod = weyl_product(&pi_star(&QSeries::q(2, 3, 0)), &pi_star(&QSeries::q(2, 3, 1))).unwrap();
    assert_eq!(prod, pi_star(&q1q2));
    let w = &(&WElement::q(1, 3, 0).multiply(&WElement::q(1, 3, 0)).unwrap()
        + &WElement::p(1, 3, 0).multiply(&WElement::p(1, 3, 0)).unwrap())
        - &WElement::lambda(1, 3);
    let expected = QSeries::q(1, 3, 0).mul(&QSeries::q(1, 3, 0)).unwrap().sub(&QSeries::lambda(1, 3));
    assert_eq!(iota_star(&w), expected);
}

#[test]
fn generator_outputs_validate() {
    assert!(validate_star(&moyal(2, 6), 6, 2).passed());
    assert!(validate_star(&moyal(3, 4), 4, 2).passed());
    let zero = vec![vec![BigRational::zero(); 2]; 2];
    let spec = make_constant_theta_star(&zero, 3).unwrap();
    assert!(spec.cochains().iter().all(|c| c.is_zero()));
    assert!(validate_star(&StarProductSpec::zero(2), 4, 2).passed());
    let bad = vec![vec![BigRational::zero(), BigRational::from_integer(1.into())], vec![BigRational::zero(); 2]];
    assert!(make_constant_theta_star(&bad, 2).is_err());
}

#[test]
fn perturbed_second_order_is_caught_with_a_witness() {
    let report = validate_star(&perturbed_moyal(4), 4, 3);
    let v = report.associativity.expect("associativity must fail");
    assert_eq!(v.order, 3);
    assert_eq!(v.witness.len(), 3);
    assert!(v.value.is_some());
}

#[test]
fn constant_theta_coordinate_product() {
    let spec = make_constant_theta_star(&theta_rank2(2), 3).unwrap();
    let v = spec.star_apply(&QSeries::q(2, 3, 0), &QSeries::q(2, 3, 1)).unwrap();
    let q1q2 = QPolynomial::monomial(MultiIndex::from_slice(&[1, 1]), GaussianRational::from_int(1));
    let expected =
        QSeries::from_qpoly(&q1q2, 3).add(&QSeries::lambda(2, 3).scale(&GaussianRational::complex(0, 1, 1, 2)));
    assert_eq!(v, expected);
    let f = QSeries::q(2, 3, 0).add(&QSeries::one(2, 3));
    assert_eq!(spec.star_apply(&QSeries::one(2, 3), &f).unwrap(), f);
    let m = Matrix::scalar(f.clone());
    assert_eq!(spec.star_apply_matrix(&Matrix::scalar(QSeries::one(2, 3)), &m).unwrap(), m);
}
