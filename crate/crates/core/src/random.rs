//! Seeded generators for test data. Every generator draws from a caller-owned
//! ChaCha stream, so equal seeds give equal values on every platform.

use num_rational::BigRational;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::hochschild::{CochainMonomial, KoszulForm, MultiDiffCochain};
use crate::matrix::Matrix;
use crate::multi_index::MultiIndex;
use crate::polynomial::QPolynomial;
use crate::positivity::{Atom, StateFunctional};
use crate::qseries::QSeries;
use crate::scalar::GaussianRational;
use crate::weyl_element::{WElement, WMonomial};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape of random function series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct RandomParams {
    pub max_q_degree: u32,
    pub max_terms: usize,
    /// Numerators are drawn from `[−bound, bound]`.
    pub numerator_bound: i64,
    /// Denominators are drawn from `[1, bound]`.
    pub denominator_bound: i64,
    /// Number of `λ` orders above 0 that receive a random correction.
    pub lambda_corrections: u32,
}

impl Default for RandomParams {
    fn default() -> Self {
        Self { max_q_degree: 3, max_terms: 4, numerator_bound: 3, denominator_bound: 2, lambda_corrections: 0 }
    }
}

pub fn rational(rng: &mut TestRng, numerator_bound: i64, denominator_bound: i64) -> BigRational {
    let num = rng.gen_range(-numerator_bound..=numerator_bound);
    let den = rng.gen_range(1..=denominator_bound.max(1));
    BigRational::new(num.into(), den.into())
}

pub fn gaussian(rng: &mut TestRng, numerator_bound: i64, denominator_bound: i64) -> GaussianRational {
    GaussianRational::new(
        rational(rng, numerator_bound, denominator_bound),
        rational(rng, numerator_bound, denominator_bound),
    )
}

pub fn multi_index(rng: &mut TestRng, n: usize, max_total: u32) -> MultiIndex {
    let total = rng.gen_range(0..=max_total);
    let mut e = MultiIndex::zeros(n);
    for _ in 0..total {
        let k = rng.gen_range(0..n);
        e = e.inc(k);
    }
    e
}

pub fn qpolynomial(rng: &mut TestRng, n: usize, params: &RandomParams) -> QPolynomial {
    let terms = rng.gen_range(1..=params.max_terms.max(1));
    let mut p = QPolynomial::zero(n);
    for _ in 0..terms {
        let e = multi_index(rng, n, params.max_q_degree);
        let c = gaussian(rng, params.numerator_bound, params.denominator_bound);
        p = p.add(&QPolynomial::monomial(e, c));
    }
    p
}

/// `f₀ + λ f₁ + …` with `lambda_corrections` random correction terms.
pub fn qseries(rng: &mut TestRng, n: usize, order: u32, params: &RandomParams) -> QSeries {
    let mut coeffs = vec![qpolynomial(rng, n, params)];
    for _ in 0..params.lambda_corrections.min(order) {
        coeffs.push(qpolynomial(rng, n, params));
    }
    QSeries::from_coefficients(n, &coeffs, order)
}

pub fn qseries_matrix(rng: &mut TestRng, n: usize, size: usize, order: u32, params: &RandomParams) -> Matrix<QSeries> {
    Matrix::from_fn(size, |_, _| qseries(rng, n, order, params))
}

/// A Weyl element with monomials of total `q, p` degree at most `max_degree`.
pub fn welement(
    rng: &mut TestRng,
    n: usize,
    truncation: u32,
    max_degree: u32,
    terms: usize,
    with_lambda: bool,
) -> WElement {
    let mut w = WElement::zero(n, truncation);
    for _ in 0..terms {
        let e = multi_index(rng, 2 * n, max_degree);
        let q = MultiIndex::from_slice(&e.as_slice()[..n]);
        let p = MultiIndex::from_slice(&e.as_slice()[n..]);
        let a = if with_lambda { rng.gen_range(0..=1) } else { 0 };
        let c = gaussian(rng, 3, 2);
        w = &w + &WElement::monomial(n, truncation, WMonomial::new(a, p, q), c);
    }
    w
}

pub fn welement_matrix(
    rng: &mut TestRng,
    n: usize,
    size: usize,
    truncation: u32,
    max_degree: u32,
    terms: usize,
    with_lambda: bool,
) -> Matrix<WElement> {
    Matrix::from_fn(size, |_, _| welement(rng, n, truncation, max_degree, terms, with_lambda))
}

/// A cochain with terms of `deg = a + |I| ≤ max_deg`, derivative order per slot
/// at most `max_order` and coefficient degree at most `max_q_degree`.
pub fn cochain(
    rng: &mut TestRng,
    n: usize,
    arity: usize,
    max_deg: u32,
    max_order: u32,
    max_q_degree: u32,
    terms: usize,
) -> MultiDiffCochain {
    let mut c = MultiDiffCochain::zero(n, arity);
    for _ in 0..terms {
        let d = rng.gen_range(0..=max_deg);
        let a = rng.gen_range(0..=d);
        let p = exact_total(rng, n, d - a);
        let q = multi_index(rng, n, max_q_degree);
        let derivs = (0..arity).map(|_| multi_index(rng, n, max_order)).collect();
        let m = CochainMonomial { lambda: a, p, q, derivs };
        c.push(m, gaussian(rng, 3, 2));
    }
    c
}

fn exact_total(rng: &mut TestRng, n: usize, total: u32) -> MultiIndex {
    let mut e = MultiIndex::zeros(n);
    for _ in 0..total {
        let k = rng.gen_range(0..n);
        e = e.inc(k);
    }
    e
}

/// A `k`-form `Σ ω^{i₁…i_k}(q, p) dp_{i₁} ∧ … ∧ dp_{i_k}`.
pub fn koszul_form(rng: &mut TestRng, n: usize, degree: usize, max_p_degree: u32, terms: usize) -> KoszulForm {
    let mut f = KoszulForm::zero(n, degree);
    for _ in 0..terms {
        let p = multi_index(rng, n, max_p_degree);
        let q = multi_index(rng, n, 2);
        let idx: Vec<usize> = (0..degree).map(|_| rng.gen_range(0..n)).collect();
        let m = KoszulForm::monomial(p, q, &idx, gaussian(rng, 3, 2)).expect("consistent shape");
        f = f.add(&m).expect("same shape");
    }
    f
}

/// An atomic functional with `atoms` atoms at small rational points.
pub fn state_functional(rng: &mut TestRng, n: usize, size: usize, atoms: usize) -> StateFunctional {
    let atoms = (0..atoms)
        .map(|_| Atom {
            point: (0..n).map(|_| rational(rng, 2, 2)).collect(),
            vector: (0..size).map(|_| gaussian(rng, 2, 2)).collect(),
        })
        .collect();
    StateFunctional::new(n, size, atoms).expect("consistent shapes")
}
