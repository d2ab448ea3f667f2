//! Square matrices over the Weyl algebra or over function series.

use serde::{Deserialize, Serialize};

use crate::error::AlgebraError;
use crate::qseries::QSeries;
use crate::weyl_element::WElement;

/// Row-major `N × N` matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Matrix<T> {
    size: usize,
    entries: Vec<T>,
}

/// Matrix with `WElement` entries, involution = entrywise conjugate transpose.
pub type MatrixWElement = Matrix<WElement>;

impl<T: Clone> Matrix<T> {
    pub fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut entries = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                entries.push(f(i, j));
            }
        }
        Self { size, entries }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, AlgebraError> {
        let size = rows.len();
        let mut entries = Vec::with_capacity(size * size);
        for row in rows {
            if row.len() != size {
                return Err(AlgebraError::SizeMismatch { expected: size, found: row.len() });
            }
            entries.extend(row);
        }
        Ok(Self { size, entries })
    }

    pub fn scalar(x: T) -> Self {
        Self { size: 1, entries: vec![x] }
    }

    /// `x` on the diagonal, `zero` elsewhere.
    pub fn diagonal(size: usize, x: T, zero: T) -> Self {
        Self::from_fn(size, |i, j| if i == j { x.clone() } else { zero.clone() })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.size + j]
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn map<U: Clone>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { size: self.size, entries: self.entries.iter().map(f).collect() }
    }

    pub fn try_map<U: Clone, E>(&self, f: impl FnMut(&T) -> Result<U, E>) -> Result<Matrix<U>, E> {
        Ok(Matrix { size: self.size, entries: self.entries.iter().map(f).collect::<Result<_, _>>()? })
    }

    pub fn transpose_with(&self, mut f: impl FnMut(&T) -> T) -> Self {
        Self::from_fn(self.size, |i, j| f(self.get(j, i)))
    }

    /// Entrywise combination of two matrices of equal size.
    pub fn zip_with<E>(&self, other: &Self, mut f: impl FnMut(&T, &T) -> Result<T, E>) -> Result<Self, E>
    where
        E: From<AlgebraError>,
    {
        if self.size != other.size {
            return Err(AlgebraError::SizeMismatch { expected: self.size, found: other.size }.into());
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect::<Result<_, _>>()?;
        Ok(Self { size: self.size, entries })
    }

    /// `(A·B)_{ij} = Σ_k prod(A_ik, B_kj)` for a caller-supplied product.
    pub fn product_with<E>(
        &self,
        other: &Self,
        mut prod: impl FnMut(&T, &T) -> Result<T, E>,
        mut add: impl FnMut(&T, &T) -> T,
    ) -> Result<Self, E>
    where
        E: From<AlgebraError>,
    {
        if self.size != other.size {
            return Err(AlgebraError::SizeMismatch { expected: self.size, found: other.size }.into());
        }
        let n = self.size;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = prod(self.get(i, 0), other.get(0, j))?;
                for k in 1..n {
                    acc = add(&acc, &prod(self.get(i, k), other.get(k, j))?);
                }
                entries.push(acc);
            }
        }
        Ok(Self { size: n, entries })
    }
}

impl Matrix<WElement> {
    pub fn adjoint(&self) -> Self {
        self.transpose_with(WElement::conj)
    }
}

impl Matrix<QSeries> {
    pub fn adjoint(&self) -> Self {
        self.transpose_with(QSeries::conj)
    }
}
