use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::functional::StateFunctional;
use crate::error::{check_dim, AlgebraError};
use crate::matrix::MatrixWElement;
use crate::multi_index::MultiIndex;
use crate::scalar::{rational_string, GaussianRational};
use crate::series::{LambdaSeries, RealLambdaSeries};
use crate::star::{dzbar, wick_product_matrix};
use crate::weyl_element::{WElement, UNBOUNDED};

/// One square `(2^{|α|}/α!) λ^{|α|} ‖(∂_z̄^α A)(x, 0) v‖²` of the decomposition.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CertificateTerm {
    pub alpha: MultiIndex,
    pub atom: usize,
    #[serde(with = "rational_string")]
    pub weight: BigRational,
    /// `(∂_z̄^α A)(x, 0) v`, one `λ`-series per component.
    pub vector: Vec<LambdaSeries>,
    /// `λ^{|α|} ‖·‖²`.
    pub norm_squared: RealLambdaSeries,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct WickCertificate {
    /// `Ω₀(A* ⋆_Wick A)` computed directly.
    pub value: RealLambdaSeries,
    /// Sum of the weighted squares.
    pub decomposition_sum: RealLambdaSeries,
    pub reproduces: bool,
    /// Every entry of `A` is free of `λ`, so each coefficient is a sum of squares.
    pub lambda_free: bool,
    pub nonnegative: Vec<bool>,
    pub terms: Vec<CertificateTerm>,
}

impl WickCertificate {
    pub fn all_nonnegative(&self) -> bool {
        self.nonnegative.iter().all(|&b| b)
    }
}

fn dzbar_multi(a: &WElement, alpha: &MultiIndex) -> WElement {
    let mut out = a.clone();
    for k in 0..alpha.len() {
        for _ in 0..alpha.get(k) {
            out = dzbar(&out, k);
        }
    }
    out
}

fn real(s: &LambdaSeries) -> RealLambdaSeries {
    s.to_real().expect("squared moduli are real")
}

/// Computes `Ω₀(A* ⋆_Wick A)` and its decomposition into weighted squared moduli.
pub fn wick_positivity_certificate(
    omega: &StateFunctional,
    a: &MatrixWElement,
) -> Result<WickCertificate, AlgebraError> {
    let size = omega.size();
    if a.size() != size {
        return Err(AlgebraError::SizeMismatch { expected: size, found: a.size() });
    }
    let n = omega.dim();
    for w in a.entries() {
        check_dim(n, w.dim())?;
    }
    let order = a.entries().iter().map(WElement::truncation).min().unwrap_or(0);
    let direct = omega.apply_weyl(&wick_product_matrix(&a.adjoint(), a)?)?;
    let value = direct.to_real().map_err(|r| AlgebraError::Invalid(format!("Ω₀(A*⋆A) is not real at λ^{r}")))?;
    let exact = a.map(|w| w.with_truncation(UNBOUNDED));
    let zero_p = vec![BigRational::zero(); n];
    let mut terms = Vec::new();
    let mut sum = LambdaSeries::zero(order);
    for alpha in MultiIndex::up_to(n, order) {
        let r = alpha.total();
        let b = exact.map(|w| dzbar_multi(w, &alpha));
        if b.entries().iter().all(WElement::is_zero) {
            continue;
        }
        let weight = BigRational::new(BigInt::from(2).pow(r), alpha.factorial());
        for (idx, atom) in omega.atoms().iter().enumerate() {
            let mut vector = Vec::with_capacity(size);
            for i in 0..size {
                let mut comp = LambdaSeries::zero(order);
                for j in 0..size {
                    let entry = b.get(i, j).evaluate(&atom.point, &zero_p)?.truncate(order);
                    comp = comp.add(&entry.scale(&atom.vector[j]));
                }
                vector.push(comp);
            }
            let mut norm = LambdaSeries::zero(order);
            for c in &vector {
                norm = norm.add(&c.conj().mul(c));
            }
            let mut shifted = vec![GaussianRational::zero(); r as usize];
            shifted.extend(norm.coeffs().iter().cloned());
            let norm = LambdaSeries::new(shifted, order);
            if norm.is_zero() {
                continue;
            }
            sum = sum.add(&norm.scale(&GaussianRational::from_real(weight.clone())));
            terms.push(CertificateTerm {
                alpha: alpha.clone(),
                atom: idx,
                weight: weight.clone(),
                vector,
                norm_squared: real(&norm),
            });
        }
    }
    let decomposition_sum = real(&sum);
    let lambda_free = a.entries().iter().all(|w| w.max_lambda() == 0);
    let nonnegative = (0..=order).map(|r| !value.coeff(r).is_negative()).collect();
    Ok(WickCertificate {
        reproduces: decomposition_sum == value,
        value,
        decomposition_sum,
        lambda_free,
        nonnegative,
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;
    use crate::star::{z, zbar};

    fn delta0() -> StateFunctional {
        StateFunctional::delta(vec![BigRational::zero()])
    }

    fn ints(c: &[i64]) -> Vec<BigRational> {
        c.iter().map(|&k| BigRational::from_integer(k.into())).collect()
    }

    #[test]
    fn antiholomorphic_coordinate() {
        let c = wick_positivity_certificate(&delta0(), &Matrix::scalar(zbar(1, 3, 0))).unwrap();
        assert_eq!(c.value.coeffs(), ints(&[0, 2]).as_slice());
        assert!(c.reproduces && c.all_nonnegative());
    }

    #[test]
    fn holomorphic_coordinate() {
        let c = wick_positivity_certificate(&delta0(), &Matrix::scalar(z(1, 3, 0))).unwrap();
        assert!(c.value.coeffs().is_empty());
        assert!(c.reproduces);
    }

    #[test]
    fn identity_gives_the_mass() {
        let c = wick_positivity_certificate(&delta0(), &Matrix::scalar(WElement::one(1, 3))).unwrap();
        assert_eq!(c.value.coeffs(), ints(&[1]).as_slice());
    }
}
