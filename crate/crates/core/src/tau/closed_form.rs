use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use super::TauMap;
use crate::error::AlgebraError;
use crate::hochschild::{CochainMonomial, MultiDiffCochain};
use crate::multi_index::MultiIndex;
use crate::polynomial::accumulate;
use crate::scalar::GaussianRational;

/// `τ(f) = f(q − ½θp)`, i.e. `τ_k = Σ_{|α|=k} (1/α!) w^α ∂^α` with
/// `w_i = −½ Σ_j θ^{ij} p_j`.
pub fn constant_theta_tau(theta: &[Vec<BigRational>], order: u32) -> Result<TauMap, AlgebraError> {
    let n = theta.len();
    if theta.iter().any(|row| row.len() != n) {
        return Err(AlgebraError::Invalid("θ must be square".into()));
    }
    let half = BigRational::new((-1).into(), 2.into());
    // w_i as a map from p-exponent to coefficient
    let w: Vec<BTreeMap<MultiIndex, GaussianRational>> = (0..n)
        .map(|i| {
            let mut m = BTreeMap::new();
            for (j, t) in theta[i].iter().enumerate() {
                if !t.is_zero() {
                    accumulate(&mut m, MultiIndex::unit(n, j), GaussianRational::from_real(t * &half));
                }
            }
            m
        })
        .collect();
    let mul = |a: &BTreeMap<MultiIndex, GaussianRational>, b: &BTreeMap<MultiIndex, GaussianRational>| {
        let mut out = BTreeMap::new();
        for (ea, ca) in a {
            for (eb, cb) in b {
                accumulate(&mut out, ea.add(eb), ca * cb);
            }
        }
        out
    };
    let mut components = Vec::with_capacity(order as usize + 1);
    for k in 0..=order {
        let mut c = MultiDiffCochain::zero(n, 1);
        for alpha in MultiIndex::of_total(n, k) {
            let mut prod: BTreeMap<MultiIndex, GaussianRational> = BTreeMap::new();
            prod.insert(MultiIndex::zeros(n), GaussianRational::from_int(1));
            for i in 0..n {
                for _ in 0..alpha.get(i) {
                    prod = mul(&prod, &w[i]);
                }
            }
            let inv = BigRational::new(1.into(), alpha.factorial());
            for (p, coeff) in prod {
                let m = CochainMonomial { lambda: 0, p, q: MultiIndex::zeros(n), derivs: vec![alpha.clone()] };
                c.push(m, coeff.scale(&inv));
            }
        }
        components.push(c);
    }
    TauMap::new(n, components, true)
}
