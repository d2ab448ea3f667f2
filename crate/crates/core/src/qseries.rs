//! Polynomial functions on `ℝⁿ` with formal `λ`: elements of `C^poly(ℝⁿ)[[λ]]`.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::AlgebraError;
use crate::multi_index::MultiIndex;
use crate::polynomial::QPolynomial;
use crate::scalar::GaussianRational;
use crate::series::LambdaSeries;
use crate::weyl_element::{WElement, WMonomial};

/// A `p`-free element of the Weyl algebra, truncated at `λ`-order `order`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct QSeries(WElement);

impl QSeries {
    pub fn zero(n: usize, order: u32) -> Self {
        Self(WElement::zero(n, order))
    }

    pub fn one(n: usize, order: u32) -> Self {
        Self(WElement::one(n, order))
    }

    pub fn constant(n: usize, order: u32, c: GaussianRational) -> Self {
        Self(WElement::constant(n, order, c))
    }

    pub fn q(n: usize, order: u32, k: usize) -> Self {
        Self(WElement::q(n, order, k))
    }

    pub fn lambda(n: usize, order: u32) -> Self {
        Self(WElement::lambda(n, order))
    }

    pub fn from_qpoly(p: &QPolynomial, order: u32) -> Self {
        Self(WElement::from_qpoly(p, order))
    }

    /// `Σ_r λ^r coeffs[r]`.
    pub fn from_coefficients(n: usize, coeffs: &[QPolynomial], order: u32) -> Self {
        let mut w = WElement::zero(n, order);
        for (r, poly) in coeffs.iter().enumerate() {
            for (e, c) in poly.terms() {
                w.insert(WMonomial::new(r as u32, MultiIndex::zeros(n), e.clone()), c.clone());
            }
        }
        Self(w)
    }

    pub fn from_welement(w: WElement) -> Result<Self, AlgebraError> {
        if !w.is_p_free() {
            return Err(AlgebraError::Invalid("function series must not depend on p".into()));
        }
        Ok(Self(w))
    }

    pub fn as_welement(&self) -> &WElement {
        &self.0
    }

    pub fn into_welement(self) -> WElement {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn order(&self) -> u32 {
        self.0.truncation()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Coefficient of `λ^r`.
    pub fn coefficient(&self, r: u32) -> QPolynomial {
        self.0.component(r, &MultiIndex::zeros(self.dim()))
    }

    pub fn q_degree(&self) -> u32 {
        self.0.max_poly_degree()
    }

    pub fn with_order(&self, order: u32) -> Self {
        Self(self.0.with_truncation(order))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        Self(self.0.scale(s))
    }

    pub fn shift_lambda(&self, j: u32) -> Self {
        Self(self.0.shift_lambda(j))
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        Ok(Self(self.0.multiply(&other.0)?))
    }

    pub fn derivative(&self, alpha: &MultiIndex) -> Self {
        let mut w = WElement::zero(self.dim(), self.order());
        for (m, c) in self.0.terms() {
            let f = m.q.falling(alpha);
            if f == 0.into() {
                continue;
            }
            let q = m.q.checked_sub(alpha).expect("nonzero falling factorial");
            w.insert(WMonomial::new(m.lambda, m.p.clone(), q), c.scale_int(&f));
        }
        Self(w)
    }

    pub fn conj(&self) -> Self {
        Self(self.0.conj())
    }

    pub fn evaluate(&self, point: &[BigRational]) -> Result<LambdaSeries, AlgebraError> {
        let zeros = vec![BigRational::from_integer(0.into()); self.dim()];
        self.0.evaluate(point, &zeros)
    }
}

impl std::fmt::Debug for QSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl<'de> Deserialize<'de> for QSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = WElement::deserialize(d)?;
        QSeries::from_welement(w).map_err(serde::de::Error::custom)
    }
}
