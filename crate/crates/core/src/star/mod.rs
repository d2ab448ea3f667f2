//! Star products: Weyl-Moyal and Wick on the Weyl algebra, the Fock
//! equivalence between them, and user-specified star products on `ℝⁿ`.

mod charts;
mod fock;
mod spec;
mod validate;
mod weyl;
mod wick;

use thiserror::Error;

use crate::error::AlgebraError;
use crate::hochschild::SolveError;

pub use charts::{iota_star, iota_star_matrix, pi_star, pi_star_matrix};
pub use fock::{
    fock_apply, fock_apply_matrix, fock_basis, laplacian, resolve_fock_sign, verify_fock_sign, Direction, FockError,
    FockSign,
};
pub use spec::{make_constant_theta_star, make_polynomial_poisson_star, poisson_cochain, StarProductSpec};
pub use validate::{associativity_defect, find_witness, validate_star, ValidationReport, Violation};
pub use weyl::{weyl_product, weyl_product_matrix};
pub use wick::{dz, dzbar, wick_product, wick_product_matrix, z, zbar};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum StarError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("Poisson data must be antisymmetric")]
    NotAntisymmetric,
    #[error("invalid star product: {0}")]
    InvalidSpec(String),
    #[error("solving for a higher-order cochain failed: {0}")]
    Solve(#[from] SolveError),
}
