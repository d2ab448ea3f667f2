use serde::{Deserialize, Serialize};

use super::functional::StateFunctional;
use super::PositivityError;
use crate::error::check_dim;
use crate::matrix::Matrix;
use crate::qseries::QSeries;
use crate::series::LambdaSeries;
use crate::star::{fock_apply, iota_star, resolve_fock_sign, Direction, FockSign, StarProductSpec};
use crate::tau::{apply_tau, TauMap};
use crate::weyl_element::WElement;

/// Smallest and largest basis degree used to resolve the Fock sign.
const MIN_SIGN_DEGREE: u32 = 2;
const MAX_SIGN_DEGREE: u32 = 4;

/// `Ω = Ω₀ ∘ ι* ∘ E⁻¹ ∘ τ`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DeformedFunctional {
    pub base: StateFunctional,
    pub tau: TauMap,
    pub sign: FockSign,
    /// Direction of `E` that maps `⋆_Weyl` to `⋆_Wick`.
    pub direction: Direction,
}

impl DeformedFunctional {
    /// `λ`-order through which `Ω(f)` is exact: terms of `τ(f)` beyond
    /// `deg = K` carry `λ^a p^I` with `a + |I| > K`, which `ι* ∘ E⁻¹` turns into
    /// `λ^{a + |I|/2}`.
    pub fn valid_order(&self) -> u32 {
        self.tau.order() / 2
    }

    pub fn apply(&self, f: &Matrix<QSeries>) -> Result<LambdaSeries, PositivityError> {
        let image = f.try_map(|x| -> Result<WElement, PositivityError> {
            let t = apply_tau(&self.tau, x)?;
            Ok(iota_star(&fock_apply(&t, self.sign.sigma, self.direction)).into_welement())
        })?;
        Ok(self.base.apply_weyl(&image)?.truncate(self.valid_order()))
    }
}

/// Composes `Ω₀` with `τ`, resolving `σ` on the monomial basis through
/// `deg = K` clamped to `[2, 4]`.
pub fn deform_functional(base: &StateFunctional, tau: &TauMap) -> Result<DeformedFunctional, PositivityError> {
    check_dim(base.dim(), tau.dim())?;
    let degree = tau.order().clamp(MIN_SIGN_DEGREE, MAX_SIGN_DEGREE);
    let sign = resolve_fock_sign(tau.dim(), degree)?;
    Ok(DeformedFunctional { base: base.clone(), tau: tau.clone(), sign, direction: Direction::Inverse })
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GluedPart {
    pub weight: QSeries,
    pub functional: Functional,
}

/// `Ω(f) = Σ_α Ω_α(χ̄_α ⋆ f ⋆ χ_α)`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GluedFunctional {
    pub spec: StarProductSpec,
    pub parts: Vec<GluedPart>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Functional {
    /// The `λ`-linear extension of a classical functional.
    Classical(StateFunctional),
    Deformed(Box<DeformedFunctional>),
    Glued(Box<GluedFunctional>),
}

impl Functional {
    pub fn kind(&self) -> &'static str {
        match self {
            Functional::Classical(_) => "classical",
            Functional::Deformed(_) => "deformed",
            Functional::Glued(_) => "glued",
        }
    }

    /// `λ`-order through which values are exact for inputs of order `input_order`.
    pub fn valid_order(&self, input_order: u32) -> u32 {
        match self {
            Functional::Classical(_) => input_order,
            Functional::Deformed(d) => d.valid_order().min(input_order),
            Functional::Glued(g) => g
                .parts
                .iter()
                .map(|p| p.functional.valid_order(input_order.min(p.weight.order())))
                .min()
                .unwrap_or(input_order),
        }
    }

    /// The Fock sign of the first deformed constituent.
    pub fn fock_sign(&self) -> Option<(i32, Direction)> {
        match self {
            Functional::Classical(_) => None,
            Functional::Deformed(d) => Some((d.sign.sigma, d.direction)),
            Functional::Glued(g) => g.parts.iter().find_map(|p| p.functional.fock_sign()),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Functional::Classical(s) => s.dim(),
            Functional::Deformed(d) => d.base.dim(),
            Functional::Glued(g) => g.spec.dim(),
        }
    }

    pub fn apply(&self, f: &Matrix<QSeries>) -> Result<LambdaSeries, PositivityError> {
        let order = f.entries().iter().map(QSeries::order).min().unwrap_or(0);
        let value = match self {
            Functional::Classical(s) => s.apply(f)?,
            Functional::Deformed(d) => d.apply(f)?,
            Functional::Glued(g) => {
                let mut out = LambdaSeries::zero(order);
                for part in &g.parts {
                    let chi = &part.weight;
                    let chi_bar = chi.conj();
                    let inner = f.try_map(|x| -> Result<QSeries, PositivityError> {
                        let left = g.spec.star_apply(&chi_bar, x)?;
                        Ok(g.spec.star_apply(&left, chi)?)
                    })?;
                    out = out.add(&part.functional.apply(&inner)?);
                }
                out
            }
        };
        Ok(value.truncate(self.valid_order(order)))
    }
}

/// Combines functionals with weights `χ_α`, after checking `Σ χ̄_α ⋆ χ_α = 1`
/// through the common order of the weights.
pub fn glue_functionals(
    parts: Vec<(QSeries, Functional)>,
    spec: &StarProductSpec,
) -> Result<Functional, PositivityError> {
    let n = spec.dim();
    let order = parts.iter().map(|(w, _)| w.order()).min().unwrap_or(0);
    let mut total = QSeries::zero(n, order);
    for (w, f) in &parts {
        check_dim(n, w.dim())?;
        check_dim(n, f.dim())?;
        total = total.add(&spec.star_apply(&w.conj(), w)?);
    }
    let residual = total.sub(&QSeries::one(n, order));
    if !residual.is_zero() {
        return Err(PositivityError::Partition { residual: format!("{residual:?}") });
    }
    let parts = parts.into_iter().map(|(weight, functional)| GluedPart { weight, functional }).collect();
    Ok(Functional::Glued(Box::new(GluedFunctional { spec: spec.clone(), parts })))
}
