//! Classical atomic functionals, the Wick positivity certificate, the deformed
//! functional `Ω = Ω₀ ∘ ι* ∘ E⁻¹ ∘ τ`, gluing and positivity verdicts.

mod certificate;
mod deform;
mod functional;
mod verdict;

use thiserror::Error;

use crate::error::AlgebraError;
use crate::star::{FockError, StarError};

pub use certificate::{wick_positivity_certificate, CertificateTerm, WickCertificate};
pub use deform::{deform_functional, glue_functionals, DeformedFunctional, Functional, GluedFunctional, GluedPart};
pub use functional::{make_point_functional, Atom, StateFunctional};
pub use verdict::{check_positivity, Outcome, PositivityVerdict, TestOutcome};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PositivityError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Star(#[from] StarError),
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error("test {test}: ω(f*⋆f) has a nonzero imaginary part at λ^{coefficient}")]
    NonReal { test: usize, coefficient: u32 },
    #[error("weights do not form a quadratic partition of unity: Σχ̄⋆χ − 1 = {residual}")]
    Partition { residual: String },
}
