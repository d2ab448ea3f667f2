//! Sparse multivariate polynomials in `q¹..qⁿ` over the Gaussian rationals.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, AlgebraError, ParseError};
use crate::multi_index::MultiIndex;
use crate::scalar::GaussianRational;

/// Adds `coeff` at `key`, dropping the entry when it cancels.
pub(crate) fn accumulate<K: Ord>(map: &mut BTreeMap<K, GaussianRational>, key: K, coeff: GaussianRational) {
    if coeff.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match map.entry(key) {
        Entry::Vacant(v) => {
            v.insert(coeff);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += &coeff;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QPolynomial {
    n: usize,
    terms: BTreeMap<MultiIndex, GaussianRational>,
}

impl QPolynomial {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: GaussianRational) -> Self {
        let mut p = Self::zero(n);
        accumulate(&mut p.terms, MultiIndex::zeros(n), c);
        p
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, GaussianRational::one())
    }

    /// The coordinate `q^k` (0-based `k`).
    pub fn var(n: usize, k: usize) -> Result<Self, AlgebraError> {
        if k >= n {
            return Err(AlgebraError::IndexOutOfRange { index: k, n });
        }
        Ok(Self::monomial(MultiIndex::unit(n, k), GaussianRational::one()))
    }

    pub fn monomial(exp: MultiIndex, c: GaussianRational) -> Self {
        let n = exp.len();
        let mut p = Self::zero(n);
        accumulate(&mut p.terms, exp, c);
        p
    }

    pub fn from_terms(
        n: usize,
        terms: impl IntoIterator<Item = (MultiIndex, GaussianRational)>,
    ) -> Result<Self, AlgebraError> {
        let mut p = Self::zero(n);
        for (e, c) in terms {
            check_dim(n, e.len())?;
            accumulate(&mut p.terms, e, c);
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: &MultiIndex) -> GaussianRational {
        self.terms.get(exp).cloned().unwrap_or_default()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::total).max()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            accumulate(&mut out.terms, e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self { n: self.n, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        if s.is_zero() {
            return Self::zero(self.n);
        }
        Self { n: self.n, terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let mut out = Self::zero(self.n);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                accumulate(&mut out.terms, e1.add(e2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.n);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// `∂^α`.
    pub fn derivative(&self, alpha: &MultiIndex) -> Self {
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            let f = e.falling(alpha);
            if f.is_zero() {
                continue;
            }
            let e2 = e.checked_sub(alpha).expect("falling() nonzero implies α ≤ e");
            accumulate(&mut out.terms, e2, c.scale_int(&f));
        }
        out
    }

    pub fn partial(&self, k: usize) -> Result<Self, AlgebraError> {
        if k >= self.n {
            return Err(AlgebraError::IndexOutOfRange { index: k, n: self.n });
        }
        Ok(self.derivative(&MultiIndex::unit(self.n, k)))
    }

    pub fn conj(&self) -> Self {
        Self { n: self.n, terms: self.terms.iter().map(|(e, c)| (e.clone(), c.conj())).collect() }
    }

    pub fn evaluate(&self, point: &[BigRational]) -> Result<GaussianRational, AlgebraError> {
        check_dim(self.n, point.len())?;
        let mut acc = GaussianRational::zero();
        for (e, c) in &self.terms {
            let mut m = BigRational::one();
            for (x, &k) in point.iter().zip(e.as_slice()) {
                for _ in 0..k {
                    m *= x;
                }
            }
            acc += &c.scale(&m);
        }
        Ok(acc)
    }

    /// Substitutes `q^j ↦ images[j]` (polynomials in any number of variables).
    pub fn substitute(&self, images: &[QPolynomial]) -> Result<QPolynomial, AlgebraError> {
        check_dim(self.n, images.len())?;
        let m = images.first().map(|p| p.n).unwrap_or(0);
        let mut out = QPolynomial::zero(m);
        for (e, c) in &self.terms {
            let mut t = QPolynomial::constant(m, c.clone());
            for (img, &k) in images.iter().zip(e.as_slice()) {
                t = t.mul(&img.pow(k as u32));
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        self.scale(&GaussianRational::from_real(BigRational::from_integer(k.clone())))
    }
}

impl fmt::Debug for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let vars: Vec<String> = e
                    .as_slice()
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| if k == 1 { format!("q{}", i + 1) } else { format!("q{}^{}", i + 1, k) })
                    .collect();
                if vars.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c})*{}", vars.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct QTermJson {
    exp: MultiIndex,
    coeff: GaussianRational,
}

#[derive(Serialize, Deserialize)]
struct QPolynomialJson {
    n: usize,
    terms: Vec<QTermJson>,
}

impl Serialize for QPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        QPolynomialJson {
            n: self.n,
            terms: self.terms.iter().map(|(e, c)| QTermJson { exp: e.clone(), coeff: c.clone() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = QPolynomialJson::deserialize(d)?;
        QPolynomial::from_terms(j.n, j.terms.into_iter().map(|t| (t.exp, t.coeff)))
            .map_err(|e| serde::de::Error::custom(ParseError::Invalid(e.to_string())))
    }
}
