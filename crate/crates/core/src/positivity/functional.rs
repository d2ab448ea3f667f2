use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, AlgebraError};
use crate::matrix::Matrix;
use crate::qseries::QSeries;
use crate::scalar::{rational_vec, GaussianRational};
use crate::series::LambdaSeries;
use crate::weyl_element::WElement;

/// A point `x ∈ ℚⁿ` with a vector `v ∈ ℚ(i)^N`, contributing `v* A(x) v`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Atom {
    #[serde(with = "rational_vec")]
    pub point: Vec<BigRational>,
    pub vector: Vec<GaussianRational>,
}

/// `Ω₀(A) = Σ_α v_α* A(x_α) v_α`, a finite positive atomic functional on `N × N` matrices.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct StateFunctional {
    n: usize,
    size: usize,
    atoms: Vec<Atom>,
}

/// Builds a functional from atoms, sorted canonically.
pub fn make_point_functional(n: usize, size: usize, atoms: Vec<Atom>) -> Result<StateFunctional, AlgebraError> {
    StateFunctional::new(n, size, atoms)
}

impl StateFunctional {
    pub fn new(n: usize, size: usize, mut atoms: Vec<Atom>) -> Result<Self, AlgebraError> {
        for a in &atoms {
            check_dim(n, a.point.len())?;
            if a.vector.len() != size {
                return Err(AlgebraError::SizeMismatch { expected: size, found: a.vector.len() });
            }
        }
        atoms.sort();
        Ok(Self { n, size, atoms })
    }

    /// The delta functional at `x` on scalars.
    pub fn delta(point: Vec<BigRational>) -> Self {
        let n = point.len();
        Self { n, size: 1, atoms: vec![Atom { point, vector: vec![GaussianRational::from_int(1)] }] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    fn check_size(&self, found: usize) -> Result<(), AlgebraError> {
        if self.size == found {
            Ok(())
        } else {
            Err(AlgebraError::SizeMismatch { expected: self.size, found })
        }
    }

    /// `Σ_α v_α* A(x_α, p = 0) v_α`.
    pub fn apply_weyl(&self, a: &Matrix<WElement>) -> Result<LambdaSeries, AlgebraError> {
        self.check_size(a.size())?;
        let order = a.entries().iter().map(WElement::truncation).min().unwrap_or(0);
        let zero_p = vec![BigRational::zero(); self.n];
        let mut out = LambdaSeries::zero(order);
        for atom in &self.atoms {
            for i in 0..self.size {
                for j in 0..self.size {
                    let w = a.get(i, j);
                    check_dim(self.n, w.dim())?;
                    let s = &atom.vector[i].conj() * &atom.vector[j];
                    if s.is_zero() || w.is_zero() {
                        continue;
                    }
                    out = out.add(&w.evaluate(&atom.point, &zero_p)?.scale(&s));
                }
            }
        }
        Ok(out.truncate(order))
    }

    pub fn apply(&self, f: &Matrix<QSeries>) -> Result<LambdaSeries, AlgebraError> {
        self.apply_weyl(&f.map(|x| x.as_welement().clone()))
    }

    /// `Ω₀(1) = Σ_α |v_α|²`.
    pub fn mass(&self) -> BigRational {
        self.atoms.iter().flat_map(|a| a.vector.iter()).map(GaussianRational::norm_sqr).sum()
    }
}
