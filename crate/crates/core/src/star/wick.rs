use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{check_dim, AlgebraError};
use crate::matrix::MatrixWElement;
use crate::multi_index::MultiIndex;
use crate::scalar::GaussianRational;
use crate::weyl_element::{WElement, UNBOUNDED};

/// `z^k = q^k + i p_k`.
pub fn z(n: usize, truncation: u32, k: usize) -> WElement {
    &WElement::q(n, truncation, k) + &WElement::p(n, truncation, k).scale(&GaussianRational::i())
}

/// `z̄^k = q^k − i p_k`.
pub fn zbar(n: usize, truncation: u32, k: usize) -> WElement {
    &WElement::q(n, truncation, k) - &WElement::p(n, truncation, k).scale(&GaussianRational::i())
}

/// `∂/∂z^k = ½(∂_{q^k} − i∂_{p_k})`.
pub fn dz(a: &WElement, k: usize) -> WElement {
    let half = GaussianRational::ratio(1, 2);
    (&a.dq(k) - &a.dp(k).scale(&GaussianRational::i())).scale(&half)
}

/// `∂/∂z̄^k = ½(∂_{q^k} + i∂_{p_k})`.
pub fn dzbar(a: &WElement, k: usize) -> WElement {
    let half = GaussianRational::ratio(1, 2);
    (&a.dq(k) + &a.dp(k).scale(&GaussianRational::i())).scale(&half)
}

/// All `∂_z^α a` (or `∂_z̄^α a`) with `|α| ≤ max_order`.
fn derivative_table(a: &WElement, max_order: u32, holomorphic: bool) -> HashMap<MultiIndex, WElement> {
    let n = a.dim();
    let mut table = HashMap::new();
    for alpha in MultiIndex::up_to(n, max_order) {
        let value = match (0..n).find(|&k| alpha.get(k) > 0) {
            None => a.clone(),
            Some(k) => {
                let mut parent = alpha.clone();
                parent.set(k, alpha.get(k) - 1);
                let prev = &table[&parent];
                if holomorphic {
                    dz(prev, k)
                } else {
                    dzbar(prev, k)
                }
            }
        };
        table.insert(alpha, value);
    }
    table
}

/// The Wick product `Σ_α (2λ)^{|α|}/α! (∂_z^α a)(∂_z̄^α b)`.
///
/// The operators `∂_z`, `∂_z̄` lower the `p`-degree, so the product does not
/// respect the `deg` grading: the inputs are treated as exact polynomials and
/// only the result is truncated at the smaller truncation.
pub fn wick_product(a: &WElement, b: &WElement) -> Result<WElement, AlgebraError> {
    check_dim(a.dim(), b.dim())?;
    let k = a.truncation().min(b.truncation());
    let a = a.with_truncation(UNBOUNDED);
    let b = b.with_truncation(UNBOUNDED);
    let max = a.max_poly_degree().min(b.max_poly_degree());
    let da = derivative_table(&a, max, true);
    let db = derivative_table(&b, max, false);
    let mut out = WElement::zero(a.dim(), UNBOUNDED);
    for alpha in MultiIndex::up_to(a.dim(), max) {
        let (x, y) = (&da[&alpha], &db[&alpha]);
        if x.is_zero() || y.is_zero() {
            continue;
        }
        let r = alpha.total();
        let coeff = BigRational::new(BigInt::from(2).pow(r), alpha.factorial());
        let term = x.multiply(y)?.scale_rational(&coeff).shift_lambda(r);
        out = &out + &term;
    }
    Ok(out.with_truncation(k))
}

pub fn wick_product_matrix(a: &MatrixWElement, b: &MatrixWElement) -> Result<MatrixWElement, AlgebraError> {
    a.product_with(b, wick_product, |x, y| x + y)
}
