//! The quantization homomorphism `τ = π* + Σ_k τ_k` from a star-product
//! algebra on `ℝⁿ` into the Weyl algebra, built stage by stage.

mod build;
mod closed_form;
mod realization;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{check_dim, AlgebraError};
use crate::hochschild::{MultiDiffCochain, SolveError, SolveReport, SolverConfig};
use crate::matrix::Matrix;
use crate::qseries::QSeries;
use crate::star::StarError;
use crate::weyl_element::WElement;

pub use build::{build_tau, compute_r_k, homomorphism_error, tau_error};
pub use closed_form::constant_theta_tau;
pub use realization::{canonical_bracket, check_poisson_realization, PoissonRealizationReport, RealizationViolation};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TauError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Star(#[from] StarError),
    #[error("stage {k}: solver failed: {source}")]
    Solve { k: u32, source: SolveError },
    #[error("stage {k}: R_k {reason}; witness {witness}")]
    InvalidRk { k: u32, reason: String, witness: String },
    #[error("stage {k}: neither sign of the stage equation makes ε vanish; witness {witness}")]
    NoStageSign { k: u32, witness: String },
    #[error("stage {k}: ε does not vanish through degree {k}; witness {witness}")]
    EpsilonCheckFailed { k: u32, witness: String },
}

/// Diagnostics of one stage of the recursion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageReport {
    pub k: u32,
    /// Degree-`k` part of `ε^{(k−1)}`.
    pub error_before: MultiDiffCochain,
    pub r_k: MultiDiffCochain,
    pub r_k_cocycle: bool,
    pub classical_part_symmetric: bool,
    pub solver: Option<SolveReport>,
    /// `½(τ_k* − τ_k)` added by the Hermitian symmetrization.
    pub hermitian_adjustment: Option<MultiDiffCochain>,
    pub epsilon_vanishes: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildReport {
    /// `s` in `δτ_k = s·R_k`; absent while every `R_k` vanished.
    pub stage_sign: Option<i32>,
    pub solver_config: SolverConfig,
    pub stages: Vec<StageReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauMap {
    n: usize,
    order: u32,
    hermitian: bool,
    /// `components[k] = τ_k`, `components[0] = π*`.
    components: Vec<MultiDiffCochain>,
}

impl TauMap {
    /// Assembles a map from components `τ₀, …, τ_K`, checking shapes and degrees.
    pub fn new(n: usize, components: Vec<MultiDiffCochain>, hermitian: bool) -> Result<Self, AlgebraError> {
        if components.is_empty() {
            return Err(AlgebraError::Invalid("τ needs at least the component τ₀".into()));
        }
        for (k, c) in components.iter().enumerate() {
            check_dim(n, c.dim())?;
            if c.arity() != 1 {
                return Err(AlgebraError::ArityMismatch { expected: 1, found: c.arity() });
            }
            if !c.is_homogeneous(k as u32) {
                return Err(AlgebraError::Invalid(format!("τ_{k} is not deg-homogeneous of degree {k}")));
            }
        }
        let order = components.len() as u32 - 1;
        Ok(Self { n, order, hermitian, components })
    }

    /// `τ = π*`.
    pub fn inclusion(n: usize, order: u32) -> Self {
        let mut components = vec![MultiDiffCochain::inclusion(n)];
        components.extend((0..order).map(|_| MultiDiffCochain::zero(n, 1)));
        Self { n, order, hermitian: true, components }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn components(&self) -> &[MultiDiffCochain] {
        &self.components
    }

    pub fn component(&self, k: usize) -> &MultiDiffCochain {
        &self.components[k]
    }

    /// `Σ_k τ_k` as a single arity-1 cochain.
    pub fn total(&self) -> MultiDiffCochain {
        self.components.iter().fold(MultiDiffCochain::zero(self.n, 1), |acc, c| acc.add(c))
    }

    /// Replaces `τ_k`; used to build deliberately broken maps in tests.
    pub fn with_component(&self, k: usize, c: MultiDiffCochain) -> Result<Self, AlgebraError> {
        let mut comps = self.components.clone();
        comps[k] = c;
        Self::new(self.n, comps, self.hermitian)
    }

    /// `τ_k* = τ_k` for every `k`.
    pub fn is_hermitian(&self) -> bool {
        self.components.iter().all(|c| &c.involution() == c)
    }

    /// `ι* ∘ cl(τ) = id`: `τ₀ = π*` and every other classical term carries momenta.
    pub fn section_at_order_zero(&self) -> bool {
        self.components[0] == MultiDiffCochain::inclusion(self.n)
            && self.components[1..].iter().all(|c| c.classical_limit().terms().all(|(m, _)| !m.p.is_zero()))
    }
}

/// `τ(f)`, truncated at `deg ≤ min(K_τ, order of f)`.
pub fn apply_tau(tau: &TauMap, f: &QSeries) -> Result<WElement, AlgebraError> {
    check_dim(tau.n, f.dim())?;
    let k = tau.order.min(f.order());
    let mut out = WElement::zero(tau.n, k);
    for c in &tau.components {
        out = &out + &c.evaluate(std::slice::from_ref(f), k)?;
    }
    Ok(out)
}

pub fn apply_tau_matrix(tau: &TauMap, f: &Matrix<QSeries>) -> Result<Matrix<WElement>, AlgebraError> {
    f.try_map(|x| apply_tau(tau, x))
}
