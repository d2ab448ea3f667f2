use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{check_dim, AlgebraError};
use crate::matrix::MatrixWElement;
use crate::multi_index::MultiIndex;
use crate::scalar::GaussianRational;
use crate::weyl_element::{WElement, WMonomial};

/// `(i/2)^r · c`.
fn phase(c: &GaussianRational, r: u32) -> GaussianRational {
    c.mul_i_pow(r).scale(&BigRational::new(1.into(), BigInt::from(2).pow(r)))
}

/// `Π_k C(a_k, α_k) C(b_k, α_k) α_k!`, in machine integers when it fits.
fn contraction_weight(a: &MultiIndex, b: &MultiIndex, alpha: &MultiIndex) -> BigInt {
    let small = a.as_slice().iter().zip(b.as_slice()).zip(alpha.as_slice()).try_fold(1u128, |acc, ((&x, &y), &t)| {
        (0..t as u128).try_fold(acc, |acc, s| acc.checked_mul((x as u128 - s) * (y as u128 - s))?.checked_div(s + 1))
    });
    match small {
        Some(w) => BigInt::from(w),
        None => a.falling(alpha) * b.falling(alpha) / alpha.factorial(),
    }
}

/// Every `α ≤ min(a, b)` with its weight `(a!/(a−α)!) (b!/(b−α)!) / α!`.
fn contractions(a: &MultiIndex, b: &MultiIndex) -> Vec<(MultiIndex, BigInt)> {
    a.meet(b)
        .below()
        .into_iter()
        .map(|alpha| {
            let w = contraction_weight(a, b, &alpha);
            (alpha, w)
        })
        .collect()
}

/// The Weyl-Moyal product
/// `a ⋆ b = μ ∘ exp((iλ/2) Σ_k (∂_{q^k} ⊗ ∂_{p_k} − ∂_{p_k} ⊗ ∂_{q^k}))(a ⊗ b)`,
/// truncated at the smaller of the two truncations.
///
/// On monomials the exponential is a finite sum over `α ≤ min(q₁, p₂)`
/// (the `∂_q ⊗ ∂_p` part) and `β ≤ min(p₁, q₂)` (the `∂_p ⊗ ∂_q` part).
/// Every term keeps `deg(a) + deg(b)`, so truncation is exact. The order
/// `r = |α| + |β|` is fixed by the output monomial, so integer weights are
/// summed first and the phase `(i/2)^r` is applied once per output term.
pub fn weyl_product(a: &WElement, b: &WElement) -> Result<WElement, AlgebraError> {
    check_dim(a.dim(), b.dim())?;
    let k = a.truncation().min(b.truncation());
    let mut out = WElement::zero(a.dim(), k);
    for (m1, c1) in a.terms() {
        for (m2, c2) in b.terms() {
            if m1.deg().saturating_add(m2.deg()) > k {
                continue;
            }
            let mut weights: BTreeMap<WMonomial, BigInt> = BTreeMap::new();
            let betas = contractions(&m1.p, &m2.q);
            for (alpha, wa) in contractions(&m1.q, &m2.p) {
                let q1 = m1.q.checked_sub(&alpha).expect("α ≤ q₁");
                let p2 = m2.p.checked_sub(&alpha).expect("α ≤ p₂");
                for (beta, wb) in &betas {
                    let mut w = &wa * wb;
                    if beta.total() % 2 == 1 {
                        w = -w;
                    }
                    let p = m1.p.checked_sub(beta).expect("β ≤ p₁").add(&p2);
                    let q = q1.add(&m2.q.checked_sub(beta).expect("β ≤ q₂"));
                    let m = WMonomial::new(m1.lambda + m2.lambda + alpha.total() + beta.total(), p, q);
                    *weights.entry(m).or_default() += w;
                }
            }
            let c12 = c1 * c2;
            let base = m1.lambda + m2.lambda;
            let mut phases: Vec<Option<GaussianRational>> = Vec::new();
            for (m, w) in weights {
                if w.is_zero() {
                    continue;
                }
                let r = (m.lambda - base) as usize;
                if phases.len() <= r {
                    phases.resize(r + 1, None);
                }
                let ph = phases[r].get_or_insert_with(|| phase(&c12, r as u32));
                out.insert(m, ph.scale_int(&w));
            }
        }
    }
    Ok(out)
}

/// Matrix Weyl product `(A ⋆ B)_{ij} = Σ_k A_{ik} ⋆ B_{kj}`.
pub fn weyl_product_matrix(a: &MatrixWElement, b: &MatrixWElement) -> Result<MatrixWElement, AlgebraError> {
    a.product_with(b, weyl_product, |x, y| x + y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl_element::UNBOUNDED;

    fn q(k: usize) -> WElement {
        WElement::q(1, 4, k)
    }

    fn p(k: usize) -> WElement {
        WElement::p(1, 4, k)
    }

    #[test]
    fn canonical_commutation() {
        let half_i = GaussianRational::complex(0, 1, 1, 2);
        let lam = WElement::lambda(1, 4);
        let qp = q(0).multiply(&p(0)).unwrap();
        assert_eq!(weyl_product(&q(0), &p(0)).unwrap(), &qp + &lam.scale(&half_i));
        assert_eq!(weyl_product(&p(0), &q(0)).unwrap(), &qp - &lam.scale(&half_i));
    }

    #[test]
    fn holomorphic_pair() {
        let i = GaussianRational::i();
        let a = &q(0) - &p(0).scale(&i);
        let b = &q(0) + &p(0).scale(&i);
        let expected = &(&q(0).multiply(&q(0)).unwrap() + &p(0).multiply(&p(0)).unwrap()) - &WElement::lambda(1, 4);
        assert_eq!(weyl_product(&a, &b).unwrap(), expected);
    }

    #[test]
    fn p_free_factors_commute_pointwise() {
        let f = WElement::q(2, UNBOUNDED, 0).multiply(&WElement::q(2, UNBOUNDED, 1)).unwrap();
        let g = WElement::q(2, UNBOUNDED, 1);
        assert_eq!(weyl_product(&f, &g).unwrap(), f.multiply(&g).unwrap());
    }
}
