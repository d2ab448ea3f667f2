//! Standard inputs shared by tests, scenarios and examples.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::hochschild::{MultiDiffCochain, SolverConfig};
use crate::multi_index::MultiIndex;
use crate::polynomial::QPolynomial;
use crate::qseries::QSeries;
use crate::scalar::GaussianRational;
use crate::star::{make_constant_theta_star, make_polynomial_poisson_star, StarError, StarProductSpec};

/// `θ` on `ℝⁿ` with `θ¹² = 1 = −θ²¹` and all other entries zero
/// (rank 2, with a kernel for `n > 2`).
pub fn theta_rank2(n: usize) -> Vec<Vec<BigRational>> {
    let mut t = vec![vec![BigRational::zero(); n]; n];
    t[0][1] = BigRational::one();
    t[1][0] = -BigRational::one();
    t
}

pub fn moyal(n: usize, order: u32) -> StarProductSpec {
    make_constant_theta_star(&theta_rank2(n), order).expect("antisymmetric")
}

/// `{x, y} = x` on `ℝ²`.
pub fn linear_poisson_tensor() -> Vec<Vec<QPolynomial>> {
    let x = QPolynomial::var(2, 0).expect("index in range");
    vec![vec![QPolynomial::zero(2), x.clone()], vec![x.neg(), QPolynomial::zero(2)]]
}

/// A Hermitian star product for `{x, y} = x`, with `C_r` for `r ≥ 2` obtained
/// from the associativity constraint.
pub fn linear_poisson(order: u32, config: &SolverConfig) -> Result<StarProductSpec, StarError> {
    make_polynomial_poisson_star(linear_poisson_tensor(), order, config).map(|(s, _)| s)
}

/// `C₂ + ∂₁ ⊗ ∂₁`: breaks associativity of the Moyal product.
pub fn perturbed_moyal(order: u32) -> StarProductSpec {
    let e1 = MultiIndex::unit(2, 0);
    let extra =
        MultiDiffCochain::differential(2, MultiIndex::zeros(2), vec![e1.clone(), e1], GaussianRational::from_int(1));
    moyal(2, order).perturbed(2, &extra).expect("order at least 2")
}

/// `f = q¹ + i q²`.
pub fn delta_test_element(n: usize, order: u32) -> QSeries {
    QSeries::q(n, order, 0).add(&QSeries::q(n, order, 1).scale(&GaussianRational::i()))
}
