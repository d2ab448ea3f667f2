use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::TauMap;
use crate::error::{check_dim, AlgebraError};
use crate::multi_index::MultiIndex;
use crate::polynomial::QPolynomial;
use crate::qseries::QSeries;
use crate::scalar::GaussianRational;
use crate::star::StarProductSpec;
use crate::weyl_element::{WElement, UNBOUNDED};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizationViolation {
    /// q-exponents of the two test monomials.
    pub f: MultiIndex,
    pub g: MultiIndex,
    pub p_degree: u32,
    /// `cl(τ){f, g} − {cl(τ)f, cl(τ)g}_can` restricted to this p-degree.
    pub difference: WElement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoissonRealizationReport {
    pub basis_degree: u32,
    /// Highest p-degree compared, `K − 1`; absent for `K = 0`.
    pub max_p_degree: Option<u32>,
    pub pairs_checked: usize,
    pub violations: usize,
    /// The violation of lowest p-degree, ties broken by the pair order.
    pub first_violation: Option<RealizationViolation>,
}

impl PoissonRealizationReport {
    pub fn passed(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// `{a, b}_can = Σ_k (∂_{q^k}a ∂_{p_k}b − ∂_{p_k}a ∂_{q^k}b)`, untruncated.
pub fn canonical_bracket(a: &WElement, b: &WElement) -> Result<WElement, AlgebraError> {
    check_dim(a.dim(), b.dim())?;
    let (a, b) = (a.with_truncation(UNBOUNDED), b.with_truncation(UNBOUNDED));
    let mut out = WElement::zero(a.dim(), UNBOUNDED);
    for k in 0..a.dim() {
        out = &out + &a.dq(k).multiply(&b.dp(k))?;
        out = &out - &a.dp(k).multiply(&b.dq(k))?;
    }
    Ok(out)
}

fn p_degree_part(w: &WElement, d: u32) -> WElement {
    let terms = w.terms().filter(|(m, _)| m.p.total() == d).map(|(m, c)| (m.clone(), c.clone()));
    WElement::from_terms(w.dim(), w.truncation(), terms).expect("consistent shapes")
}

/// Checks `cl(τ){f, g} = {cl(τ)f, cl(τ)g}_can` through p-degree `K − 1` on all
/// pairs of q-monomials of degree at most `basis_degree`.
pub fn check_poisson_realization(
    tau: &TauMap,
    spec: &StarProductSpec,
    basis_degree: u32,
) -> Result<PoissonRealizationReport, AlgebraError> {
    check_dim(tau.dim(), spec.dim())?;
    let n = tau.dim();
    let k = tau.order();
    let cl = tau.total().classical_limit();
    let bracket = spec.poisson_cochain();
    let basis = MultiIndex::up_to(n, basis_degree);
    let mut pairs = Vec::new();
    for f in &basis {
        for g in &basis {
            pairs.push((f.clone(), g.clone()));
        }
    }
    pairs.sort_by_key(|(f, g)| (f.total() + g.total(), f.clone(), g.clone()));
    let Some(max_p) = k.checked_sub(1) else {
        return Ok(PoissonRealizationReport {
            basis_degree,
            max_p_degree: None,
            pairs_checked: 0,
            violations: 0,
            first_violation: None,
        });
    };
    let mono =
        |e: &MultiIndex| QSeries::from_qpoly(&QPolynomial::monomial(e.clone(), GaussianRational::from_int(1)), 0);
    let results: Vec<Option<RealizationViolation>> = pairs
        .par_iter()
        .map(|(f, g)| -> Result<Option<RealizationViolation>, AlgebraError> {
            let (fs, gs) = (mono(f), mono(g));
            let pb = QSeries::from_welement(bracket.evaluate(&[fs.clone(), gs.clone()], 0)?)?;
            let left = cl.evaluate(&[pb], k)?;
            let right = canonical_bracket(&cl.evaluate(&[fs], k)?, &cl.evaluate(&[gs], k)?)?;
            let diff = &left.with_truncation(UNBOUNDED) - &right;
            for d in 0..=max_p {
                let part = p_degree_part(&diff, d);
                if !part.is_zero() {
                    return Ok(Some(RealizationViolation {
                        f: f.clone(),
                        g: g.clone(),
                        p_degree: d,
                        difference: part,
                    }));
                }
            }
            Ok(None)
        })
        .collect::<Result<_, _>>()?;
    let violations = results.iter().flatten().count();
    let first_violation = results.into_iter().flatten().min_by_key(|v| v.p_degree);
    Ok(PoissonRealizationReport {
        basis_degree,
        max_p_degree: Some(max_p),
        pairs_checked: pairs.len(),
        violations,
        first_violation,
    })
}
