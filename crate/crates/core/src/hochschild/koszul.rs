//! Differential forms in the `dp` directions with polynomial coefficients,
//! the Koszul differential `d_p` and the Euler-field homotopy.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, AlgebraError};
use crate::multi_index::MultiIndex;
use crate::polynomial::{accumulate, QPolynomial};
use crate::scalar::GaussianRational;

/// `q^L p^I dp_{i₁} ∧ … ∧ dp_{i_k}` with `i₁ < … < i_k` (0-based indices).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct KoszulMonomial {
    pub p: MultiIndex,
    pub q: MultiIndex,
    pub dp: Vec<usize>,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct KoszulForm {
    n: usize,
    degree: usize,
    terms: BTreeMap<KoszulMonomial, GaussianRational>,
}

/// Sorts `indices`, returning the sign of the sorting permutation, or `None` on a repeat.
fn normalize(indices: &mut [usize]) -> Option<i32> {
    let mut sign = 1;
    for i in 0..indices.len() {
        for j in 0..indices.len() - 1 - i {
            if indices[j] > indices[j + 1] {
                indices.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if indices.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

impl KoszulForm {
    pub fn zero(n: usize, degree: usize) -> Self {
        Self { n, degree, terms: BTreeMap::new() }
    }

    /// `c · q^L p^I dp_{i₁} ∧ … ∧ dp_{i_k}` for indices in any order.
    pub fn monomial(p: MultiIndex, q: MultiIndex, dp: &[usize], c: GaussianRational) -> Result<Self, AlgebraError> {
        let n = p.len();
        check_dim(n, q.len())?;
        if let Some(&bad) = dp.iter().find(|&&i| i >= n) {
            return Err(AlgebraError::IndexOutOfRange { index: bad, n });
        }
        let mut form = Self::zero(n, dp.len());
        let mut idx = dp.to_vec();
        if let Some(sign) = normalize(&mut idx) {
            let c = if sign < 0 { -c } else { c };
            accumulate(&mut form.terms, KoszulMonomial { p, q, dp: idx }, c);
        }
        Ok(form)
    }

    /// `Σ_L poly_L q^L · p^I dp_S`.
    pub fn with_coefficient(poly: &QPolynomial, p: MultiIndex, dp: &[usize]) -> Result<Self, AlgebraError> {
        let mut form = Self::zero(p.len(), dp.len());
        for (e, c) in poly.terms() {
            form = form.add(&Self::monomial(p.clone(), e.clone(), dp, c.clone())?)?;
        }
        Ok(form)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&KoszulMonomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        check_dim(self.n, other.n)?;
        if self.degree != other.degree {
            return Err(AlgebraError::ArityMismatch { expected: self.degree, found: other.degree });
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            accumulate(&mut out.terms, m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.add(&other.scale(&GaussianRational::from_int(-1)))
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        let mut out = Self::zero(self.n, self.degree);
        for (m, c) in &self.terms {
            accumulate(&mut out.terms, m.clone(), c * s);
        }
        out
    }

    /// `d_p ω = Σ_i ∂_{p_i} ω · dp_i ∧ (…)`.
    pub fn d_p(&self) -> Self {
        let mut out = Self::zero(self.n, self.degree + 1);
        for (m, c) in &self.terms {
            for i in 0..self.n {
                let e = m.p.get(i);
                if e == 0 || m.dp.contains(&i) {
                    continue;
                }
                let before = m.dp.iter().filter(|&&s| s < i).count();
                let mut dp = m.dp.clone();
                dp.insert(before, i);
                let mut p = m.p.clone();
                p.set(i, e - 1);
                let mut coeff = c.scale_int(&BigInt::from(e));
                if before % 2 == 1 {
                    coeff = -coeff;
                }
                accumulate(&mut out.terms, KoszulMonomial { p, q: m.q.clone(), dp }, coeff);
            }
        }
        out
    }

    /// Poincaré homotopy `h(ω) = ι_E ω / (|I| + k)` on each monomial, `E = Σ p_i ∂_{p_i}`.
    pub fn poincare_homotopy(&self) -> Result<Self, AlgebraError> {
        if self.degree == 0 {
            return Err(AlgebraError::Invalid("the homotopy is defined on forms of degree at least 1".into()));
        }
        let mut out = Self::zero(self.n, self.degree - 1);
        for (m, c) in &self.terms {
            let weight = m.p.total() as i64 + m.dp.len() as i64;
            let c = c.scale(&BigRational::new(1.into(), weight.into()));
            for (r, &i) in m.dp.iter().enumerate() {
                let mut dp = m.dp.clone();
                dp.remove(r);
                let coeff = if r % 2 == 1 { -c.clone() } else { c.clone() };
                accumulate(&mut out.terms, KoszulMonomial { p: m.p.inc(i), q: m.q.clone(), dp }, coeff);
            }
        }
        Ok(out)
    }
}

/// Free-function form of [`KoszulForm::poincare_homotopy`].
pub fn poincare_homotopy(omega: &KoszulForm) -> Result<KoszulForm, AlgebraError> {
    omega.poincare_homotopy()
}

impl fmt::Debug for KoszulForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.terms.iter().map(|(m, c)| format!("({c})·p{:?}·q{:?}·dp{:?}", m.p, m.q, m.dp)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct KoszulTermJson {
    p: MultiIndex,
    q: MultiIndex,
    dp: Vec<usize>,
    coeff: GaussianRational,
}

#[derive(Serialize, Deserialize)]
struct KoszulJson {
    n: usize,
    degree: usize,
    terms: Vec<KoszulTermJson>,
}

impl Serialize for KoszulForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        KoszulJson {
            n: self.n,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| KoszulTermJson { p: m.p.clone(), q: m.q.clone(), dp: m.dp.clone(), coeff: c.clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for KoszulForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = KoszulJson::deserialize(d)?;
        let mut form = KoszulForm::zero(j.n, j.degree);
        for t in j.terms {
            if t.dp.len() != j.degree {
                return Err(serde::de::Error::custom("form degree does not match index set"));
            }
            let m = KoszulForm::monomial(t.p, t.q, &t.dp, t.coeff).map_err(serde::de::Error::custom)?;
            form = form.add(&m).map_err(serde::de::Error::custom)?;
        }
        Ok(form)
    }
}
