//! Truncated elements of the formal Weyl algebra `C^poly(ℝⁿ)[[p, λ]]`.
//!
//! A term is `c · λ^a · p^I · q^L`; its `deg`-degree is `a + |I|`. Elements
//! carry a truncation `K` and never store terms with `a + |I| > K`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, AlgebraError, ParseError};
use crate::multi_index::MultiIndex;
use crate::polynomial::{accumulate, QPolynomial};
use crate::scalar::GaussianRational;
use crate::series::LambdaSeries;

/// Truncation value meaning "keep every term".
pub const UNBOUNDED: u32 = u32::MAX;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct WMonomial {
    pub lambda: u32,
    pub p: MultiIndex,
    pub q: MultiIndex,
}

impl WMonomial {
    pub fn new(lambda: u32, p: MultiIndex, q: MultiIndex) -> Self {
        Self { lambda, p, q }
    }

    pub fn one(n: usize) -> Self {
        Self { lambda: 0, p: MultiIndex::zeros(n), q: MultiIndex::zeros(n) }
    }

    pub fn deg(&self) -> u32 {
        self.lambda + self.p.total()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { lambda: self.lambda + other.lambda, p: self.p.add(&other.p), q: self.q.add(&other.q) }
    }
}

/// A phase-space coordinate: `q^k` or `p_k` (0-based index).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Variable {
    Q(usize),
    P(usize),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WElement {
    n: usize,
    truncation: u32,
    terms: BTreeMap<WMonomial, GaussianRational>,
}

impl WElement {
    pub fn zero(n: usize, truncation: u32) -> Self {
        Self { n, truncation, terms: BTreeMap::new() }
    }

    pub fn monomial(n: usize, truncation: u32, m: WMonomial, c: GaussianRational) -> Self {
        let mut w = Self::zero(n, truncation);
        w.insert(m, c);
        w
    }

    pub fn constant(n: usize, truncation: u32, c: GaussianRational) -> Self {
        Self::monomial(n, truncation, WMonomial::one(n), c)
    }

    pub fn one(n: usize, truncation: u32) -> Self {
        Self::constant(n, truncation, GaussianRational::one())
    }

    pub fn var(n: usize, truncation: u32, v: Variable) -> Result<Self, AlgebraError> {
        let (k, is_q) = match v {
            Variable::Q(k) => (k, true),
            Variable::P(k) => (k, false),
        };
        if k >= n {
            return Err(AlgebraError::IndexOutOfRange { index: k, n });
        }
        let mut m = WMonomial::one(n);
        if is_q {
            m.q = MultiIndex::unit(n, k);
        } else {
            m.p = MultiIndex::unit(n, k);
        }
        Ok(Self::monomial(n, truncation, m, GaussianRational::one()))
    }

    /// `q^k`; panics when `k ≥ n`.
    pub fn q(n: usize, truncation: u32, k: usize) -> Self {
        Self::var(n, truncation, Variable::Q(k)).expect("q index in range")
    }

    /// `p_k`; panics when `k ≥ n`.
    pub fn p(n: usize, truncation: u32, k: usize) -> Self {
        Self::var(n, truncation, Variable::P(k)).expect("p index in range")
    }

    pub fn lambda(n: usize, truncation: u32) -> Self {
        let mut m = WMonomial::one(n);
        m.lambda = 1;
        Self::monomial(n, truncation, m, GaussianRational::one())
    }

    pub fn from_terms(
        n: usize,
        truncation: u32,
        terms: impl IntoIterator<Item = (WMonomial, GaussianRational)>,
    ) -> Result<Self, AlgebraError> {
        let mut w = Self::zero(n, truncation);
        for (m, c) in terms {
            check_dim(n, m.p.len())?;
            check_dim(n, m.q.len())?;
            w.insert(m, c);
        }
        Ok(w)
    }

    /// Embeds a λ-free, p-free polynomial.
    pub fn from_qpoly(p: &QPolynomial, truncation: u32) -> Self {
        let n = p.dim();
        let mut w = Self::zero(n, truncation);
        for (e, c) in p.terms() {
            w.insert(WMonomial::new(0, MultiIndex::zeros(n), e.clone()), c.clone());
        }
        w
    }

    /// Adds a term, honouring the truncation.
    pub(crate) fn insert(&mut self, m: WMonomial, c: GaussianRational) {
        if m.deg() <= self.truncation {
            accumulate(&mut self.terms, m, c);
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WMonomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &WMonomial) -> GaussianRational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// The q-polynomial coefficient of `λ^a p^I`.
    pub fn component(&self, a: u32, p: &MultiIndex) -> QPolynomial {
        let mut out = QPolynomial::zero(self.n);
        for (m, c) in &self.terms {
            if m.lambda == a && &m.p == p {
                out = out.add(&QPolynomial::monomial(m.q.clone(), c.clone()));
            }
        }
        out
    }

    /// All `(λ-power, p-exponent) ↦ q-polynomial` components.
    pub fn components(&self) -> BTreeMap<(u32, MultiIndex), QPolynomial> {
        let mut out: BTreeMap<(u32, MultiIndex), QPolynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = out.entry((m.lambda, m.p.clone())).or_insert_with(|| QPolynomial::zero(self.n));
            *e = e.add(&QPolynomial::monomial(m.q.clone(), c.clone()));
        }
        out
    }

    pub fn max_deg(&self) -> Option<u32> {
        self.terms.keys().map(WMonomial::deg).max()
    }

    /// Highest polynomial degree `|I| + |L|` over all terms.
    pub fn max_poly_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.p.total() + m.q.total()).max().unwrap_or(0)
    }

    pub fn max_lambda(&self) -> u32 {
        self.terms.keys().map(|m| m.lambda).max().unwrap_or(0)
    }

    pub fn is_p_free(&self) -> bool {
        self.terms.keys().all(|m| m.p.is_zero())
    }

    /// Re-tags the truncation, dropping terms above the new bound.
    pub fn with_truncation(&self, truncation: u32) -> Self {
        let mut w = Self::zero(self.n, truncation);
        for (m, c) in &self.terms {
            w.insert(m.clone(), c.clone());
        }
        w
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        let mut w = Self::zero(self.n, self.truncation);
        for (m, c) in &self.terms {
            if m.deg() == d {
                w.insert(m.clone(), c.clone());
            }
        }
        w
    }

    fn check_same_dim(&self, other: &Self) -> Result<(), AlgebraError> {
        check_dim(self.n, other.n)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same_dim(other)?;
        let mut out = self.with_truncation(self.truncation.min(other.truncation));
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        let mut out = Self::zero(self.n, self.truncation);
        if s.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect();
        out
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        self.scale(&GaussianRational::from_real(r.clone()))
    }

    /// Multiplication by `λ^j`.
    pub fn shift_lambda(&self, j: u32) -> Self {
        let mut out = Self::zero(self.n, self.truncation);
        for (m, c) in &self.terms {
            let mut m = m.clone();
            m.lambda += j;
            out.insert(m, c.clone());
        }
        out
    }

    /// The undeformed commutative product `μ(a ⊗ b)`, truncated at the smaller `K`.
    pub fn multiply(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same_dim(other)?;
        let k = self.truncation.min(other.truncation);
        let mut out = Self::zero(self.n, k);
        for (m1, c1) in &self.terms {
            let d1 = m1.deg();
            for (m2, c2) in &other.terms {
                if d1.saturating_add(m2.deg()) > k {
                    continue;
                }
                accumulate(&mut out.terms, m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn partial_derivative(&self, v: Variable) -> Result<Self, AlgebraError> {
        match v {
            Variable::Q(k) | Variable::P(k) if k >= self.n => {
                Err(AlgebraError::IndexOutOfRange { index: k, n: self.n })
            }
            Variable::Q(k) => Ok(self.dq(k)),
            Variable::P(k) => Ok(self.dp(k)),
        }
    }

    pub(crate) fn dq(&self, k: usize) -> Self {
        let mut out = Self::zero(self.n, self.truncation);
        for (m, c) in &self.terms {
            let e = m.q.get(k);
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.q.set(k, e - 1);
            accumulate(&mut out.terms, m2, c.scale_int(&(e as i64).into()));
        }
        out
    }

    pub(crate) fn dp(&self, k: usize) -> Self {
        let mut out = Self::zero(self.n, self.truncation);
        for (m, c) in &self.terms {
            let e = m.p.get(k);
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.p.set(k, e - 1);
            accumulate(&mut out.terms, m2, c.scale_int(&(e as i64).into()));
        }
        out
    }

    /// `deg = Σ p_i ∂_{p_i} + λ ∂_λ`, diagonal on monomials with eigenvalue `a + |I|`.
    pub fn deg_operator(&self) -> Self {
        let mut out = Self::zero(self.n, self.truncation);
        for (m, c) in &self.terms {
            accumulate(&mut out.terms, m.clone(), c.scale_int(&(m.deg() as i64).into()));
        }
        out
    }

    /// Complex conjugation; `q`, `p` and `λ` are real.
    pub fn conj(&self) -> Self {
        Self {
            n: self.n,
            truncation: self.truncation,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect(),
        }
    }

    /// Substitutes numeric `q` and `p`, leaving `λ` formal.
    pub fn evaluate(&self, q_point: &[BigRational], p_point: &[BigRational]) -> Result<LambdaSeries, AlgebraError> {
        check_dim(self.n, q_point.len())?;
        check_dim(self.n, p_point.len())?;
        let mut coeffs: BTreeMap<u32, GaussianRational> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut v = BigRational::one();
            for (x, &k) in q_point.iter().zip(m.q.as_slice()).chain(p_point.iter().zip(m.p.as_slice())) {
                for _ in 0..k {
                    v *= x;
                }
            }
            if v.is_zero() {
                continue;
            }
            accumulate(&mut coeffs, m.lambda, c.scale(&v));
        }
        Ok(LambdaSeries::from_map(coeffs, self.truncation))
    }
}

impl Add for &WElement {
    type Output = WElement;
    fn add(self, rhs: &WElement) -> WElement {
        self.try_add(rhs).expect("dimension mismatch in WElement addition")
    }
}

impl Sub for &WElement {
    type Output = WElement;
    fn sub(self, rhs: &WElement) -> WElement {
        self.try_add(&-rhs).expect("dimension mismatch in WElement subtraction")
    }
}

impl Neg for &WElement {
    type Output = WElement;
    fn neg(self) -> WElement {
        WElement {
            n: self.n,
            truncation: self.truncation,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl fmt::Debug for WElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (m, c) in &self.terms {
            let mut s = format!("({c})");
            if m.lambda > 0 {
                s.push_str(&format!("*λ^{}", m.lambda));
            }
            for (i, &k) in m.p.as_slice().iter().enumerate() {
                if k > 0 {
                    s.push_str(&format!("*p{}^{}", i + 1, k));
                }
            }
            for (i, &k) in m.q.as_slice().iter().enumerate() {
                if k > 0 {
                    s.push_str(&format!("*q{}^{}", i + 1, k));
                }
            }
            parts.push(s);
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct WTermJson {
    lambda: u32,
    p: MultiIndex,
    q: MultiIndex,
    coeff: GaussianRational,
}

#[derive(Serialize, Deserialize)]
struct WElementJson {
    n: usize,
    truncation: u32,
    terms: Vec<WTermJson>,
}

impl Serialize for WElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        WElementJson {
            n: self.n,
            truncation: self.truncation,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| WTermJson { lambda: m.lambda, p: m.p.clone(), q: m.q.clone(), coeff: c.clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for WElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = WElementJson::deserialize(d)?;
        WElement::from_terms(
            j.n,
            j.truncation,
            j.terms.into_iter().map(|t| (WMonomial::new(t.lambda, t.p, t.q), t.coeff)),
        )
        .map_err(|e| serde::de::Error::custom(ParseError::Invalid(e.to_string())))
    }
}
