//! Exact symbolic workbench for deformation quantization on `ℝⁿ`.
//!
//! The crate builds, order by order, an algebra homomorphism `τ` from a star
//! product on polynomial functions into the formal Weyl algebra and uses it to
//! deform classical positive functionals into functionals that are positive for
//! the star product. All arithmetic is exact over the Gaussian rationals.

pub mod error;
pub mod fixtures;
pub mod hochschild;
pub mod matrix;
pub mod multi_index;
pub mod polynomial;
pub mod positivity;
pub mod qseries;
pub mod random;
pub mod scalar;
pub mod series;
pub mod star;
pub mod tau;

pub mod weyl_element;

pub use error::{AlgebraError, ParseError};
pub use hochschild::{CoboundaryMode, CochainMonomial, KoszulForm, MultiDiffCochain};
pub use matrix::{Matrix, MatrixWElement};
pub use multi_index::MultiIndex;
pub use polynomial::QPolynomial;
pub use qseries::QSeries;
pub use scalar::GaussianRational;
pub use series::{series_sign, LambdaSeries, RealLambdaSeries, SeriesSign};
pub use weyl_element::{Variable, WElement, WMonomial, UNBOUNDED};
