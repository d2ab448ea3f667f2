//! The Fock equivalence `E = exp(σλΔ)` between the Wick and Weyl products.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::weyl::weyl_product;
use super::wick::{dz, dzbar, wick_product};
use crate::error::AlgebraError;
use crate::matrix::MatrixWElement;
use crate::multi_index::MultiIndex;
use crate::scalar::GaussianRational;
use crate::weyl_element::{WElement, WMonomial, UNBOUNDED};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `E`, mapping the Wick picture to the Weyl picture.
    Forward,
    /// `E⁻¹`, mapping the Weyl picture to the Wick picture.
    Inverse,
}

/// `Δ = Σ_k ∂²/∂z^k∂z̄^k = ¼ Σ_k (∂²_{q^k} + ∂²_{p_k})`.
pub fn laplacian(a: &WElement) -> WElement {
    let mut out = WElement::zero(a.dim(), a.truncation());
    for k in 0..a.dim() {
        out = &out + &dz(&dzbar(a, k), k);
    }
    out
}

/// `exp(sλΔ) a`, computed on the untruncated polynomial and truncated afterwards.
fn exp_laplacian(a: &WElement, s: i32) -> WElement {
    let k = a.truncation();
    let mut term = a.with_truncation(UNBOUNDED);
    let mut out = term.clone();
    let mut j: i64 = 0;
    while !term.is_zero() {
        j += 1;
        let factor = BigRational::new(BigInt::from(s), BigInt::from(j));
        term = laplacian(&term).shift_lambda(1).scale_rational(&factor);
        out = &out + &term;
    }
    out.with_truncation(k)
}

/// Applies `E = exp(σλΔ)` (forward) or `E⁻¹ = exp(−σλΔ)` (inverse).
pub fn fock_apply(a: &WElement, sigma: i32, direction: Direction) -> WElement {
    let s = match direction {
        Direction::Forward => sigma,
        Direction::Inverse => -sigma,
    };
    exp_laplacian(a, s)
}

pub fn fock_apply_matrix(a: &MatrixWElement, sigma: i32, direction: Direction) -> MatrixWElement {
    a.map(|x| fock_apply(x, sigma, direction))
}

/// Monomials `q^L p^I` with `|L| + |I| ≤ max_degree`.
pub fn fock_basis(n: usize, max_degree: u32) -> Vec<WElement> {
    MultiIndex::up_to(2 * n, max_degree)
        .into_iter()
        .map(|e| {
            let q = MultiIndex::from_slice(&e.as_slice()[..n]);
            let p = MultiIndex::from_slice(&e.as_slice()[n..]);
            WElement::monomial(n, UNBOUNDED, WMonomial::new(0, p, q), GaussianRational::from_int(1))
        })
        .collect()
}

/// Checks `E(A ⋆_Wick B) = E(A) ⋆_Weyl E(B)` and `E(A*) = E(A)*` on the
/// basis through `max_degree`. Returns the number of pairs checked or a
/// description of the first failure.
pub fn verify_fock_sign(n: usize, max_degree: u32, sigma: i32) -> Result<usize, String> {
    let basis = fock_basis(n, max_degree);
    let images: Vec<WElement> = basis.iter().map(|a| fock_apply(a, sigma, Direction::Forward)).collect();
    for (a, ea) in basis.iter().zip(&images) {
        if fock_apply(&a.conj(), sigma, Direction::Forward) != ea.conj() {
            return Err(format!("E(A*) ≠ E(A)* for A = {a:?}"));
        }
    }
    let pairs: Vec<(usize, usize)> = (0..basis.len()).flat_map(|i| (0..basis.len()).map(move |j| (i, j))).collect();
    let failure = pairs.par_iter().find_first(|&&(i, j)| {
        let lhs = fock_apply(&wick_product(&basis[i], &basis[j]).expect("same dimension"), sigma, Direction::Forward);
        let rhs = weyl_product(&images[i], &images[j]).expect("same dimension");
        lhs != rhs
    });
    match failure {
        Some(&(i, j)) => Err(format!("E(A ⋆_Wick B) ≠ E(A) ⋆_Weyl E(B) for A = {:?}, B = {:?}", basis[i], basis[j])),
        None => Ok(pairs.len()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FockSign {
    pub sigma: i32,
    pub n: usize,
    pub basis_degree: u32,
    pub pairs_checked: usize,
    /// Why the other sign was rejected.
    pub rejected: String,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum FockError {
    #[error("neither sign intertwines the Wick and Weyl products: {plus}; {minus}")]
    NoSign { plus: String, minus: String },
    #[error("both signs pass the intertwiner check at degree {0}; the check is too weak")]
    Ambiguous(u32),
}

type SignCache = Mutex<HashMap<(usize, u32), Result<FockSign, FockError>>>;

fn cache() -> &'static SignCache {
    static CACHE: OnceLock<SignCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Determines `σ` by checking both signs on the monomial basis through
/// `max_degree`; memoized per `(n, max_degree)`.
pub fn resolve_fock_sign(n: usize, max_degree: u32) -> Result<FockSign, FockError> {
    if let Some(hit) = cache().lock().expect("sign cache poisoned").get(&(n, max_degree)) {
        return hit.clone();
    }
    let plus = verify_fock_sign(n, max_degree, 1);
    let minus = verify_fock_sign(n, max_degree, -1);
    let result = match (plus, minus) {
        (Ok(pairs), Err(why)) => {
            Ok(FockSign { sigma: 1, n, basis_degree: max_degree, pairs_checked: pairs, rejected: why })
        }
        (Err(why), Ok(pairs)) => {
            Ok(FockSign { sigma: -1, n, basis_degree: max_degree, pairs_checked: pairs, rejected: why })
        }
        (Ok(_), Ok(_)) => Err(FockError::Ambiguous(max_degree)),
        (Err(plus), Err(minus)) => Err(FockError::NoSign { plus, minus }),
    };
    cache().lock().expect("sign cache poisoned").insert((n, max_degree), result.clone());
    result
}

impl From<FockError> for AlgebraError {
    fn from(e: FockError) -> Self {
        AlgebraError::Invalid(e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::star::wick::{z, zbar};

    #[test]
    fn laplacian_of_modulus_squared() {
        let zz = z(1, 4, 0).multiply(&zbar(1, 4, 0)).unwrap();
        assert_eq!(laplacian(&zz), WElement::one(1, 4));
        let e = fock_apply(&zz, -1, Direction::Forward);
        assert_eq!(e, &zz - &WElement::lambda(1, 4));
        assert_eq!(fock_apply(&e, -1, Direction::Inverse), zz);
    }

    #[test]
    fn linear_elements_are_fixed() {
        let q = WElement::q(2, 4, 0);
        assert_eq!(fock_apply(&q, -1, Direction::Forward), q);
    }

    #[test]
    fn sign_is_minus_one_in_one_dimension() {
        let s = resolve_fock_sign(1, 3).unwrap();
        assert_eq!(s.sigma, -1);
    }
}
