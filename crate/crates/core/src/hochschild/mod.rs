//! Hochschild cochains of the function algebra with values in the Weyl algebra.

mod coboundary;
mod cochain;
mod koszul;
mod linsolve;
mod solver;

pub use coboundary::{coboundary, CoboundaryMode};
pub use cochain::{signed_permutations, CochainMonomial, MultiDiffCochain};
pub use koszul::{poincare_homotopy, KoszulForm, KoszulMonomial};
pub use linsolve::{solve_sparse, SparseSolution};
pub(crate) use solver::first_term_description;
pub use solver::{
    solve_coboundary, solve_cochain_equation, Ansatz, BlockReport, SolveError, SolveReport, SolverConfig,
};
