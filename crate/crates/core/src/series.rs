//! Truncated power series in `λ` with scalar coefficients and the order on `ℝ[[λ]]`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::scalar::{format_rational, rational_vec, GaussianRational};

/// `Σ_{r ≤ order} c_r λ^r` with Gaussian-rational coefficients.
///
/// Coefficients are stored without trailing zeros; `coeff(r)` is zero past the end.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct LambdaSeries {
    order: u32,
    coeffs: Vec<GaussianRational>,
}

fn trim<T: Zero>(v: &mut Vec<T>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

impl LambdaSeries {
    pub fn new(mut coeffs: Vec<GaussianRational>, order: u32) -> Self {
        coeffs.truncate(order.saturating_add(1) as usize);
        trim(&mut coeffs);
        Self { order, coeffs }
    }

    pub fn zero(order: u32) -> Self {
        Self { order, coeffs: Vec::new() }
    }

    pub(crate) fn from_map(map: BTreeMap<u32, GaussianRational>, order: u32) -> Self {
        let len = map.keys().filter(|&&k| k <= order).max().map(|&k| k as usize + 1).unwrap_or(0);
        let mut coeffs = vec![GaussianRational::zero(); len];
        for (k, c) in map {
            if k <= order {
                coeffs[k as usize] = c;
            }
        }
        Self::new(coeffs, order)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn coeff(&self, r: u32) -> GaussianRational {
        self.coeffs.get(r as usize).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn truncate(&self, order: u32) -> Self {
        Self::new(self.coeffs.clone(), order.min(self.order))
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len as u32).map(|r| &self.coeff(r) + &other.coeff(r)).collect();
        Self::new(coeffs, order)
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect(), self.order)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let len = (self.coeffs.len() + other.coeffs.len()).saturating_sub(1);
        let mut coeffs = vec![GaussianRational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += &(a * b);
            }
        }
        Self::new(coeffs, order)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.coeffs.iter().map(GaussianRational::conj).collect(), self.order)
    }

    /// The real series, or the first index with a nonzero imaginary part.
    pub fn to_real(&self) -> Result<RealLambdaSeries, u32> {
        let mut re = Vec::with_capacity(self.coeffs.len());
        for (r, c) in self.coeffs.iter().enumerate() {
            if !c.is_real() {
                return Err(r as u32);
            }
            re.push(c.re().clone());
        }
        Ok(RealLambdaSeries::new(re, self.order))
    }
}

/// Sign of a real `λ`-series in the order of `ℝ[[λ]]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesSign {
    Positive,
    Negative,
    /// Every tracked coefficient vanishes; undecidable at this truncation.
    ZeroUpToK,
}

impl fmt::Display for SeriesSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SeriesSign::Positive => "positive",
            SeriesSign::Negative => "negative",
            SeriesSign::ZeroUpToK => "zero_up_to_K",
        };
        f.write_str(s)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct RealLambdaSeries {
    order: u32,
    #[serde(with = "rational_vec")]
    coeffs: Vec<BigRational>,
}

impl RealLambdaSeries {
    pub fn new(mut coeffs: Vec<BigRational>, order: u32) -> Self {
        coeffs.truncate(order.saturating_add(1) as usize);
        trim(&mut coeffs);
        Self { order, coeffs }
    }

    pub fn from_ints(coeffs: &[i64], order: u32) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect(), order)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, r: u32) -> BigRational {
        self.coeffs.get(r as usize).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeff_strings(&self) -> Vec<String> {
        if self.coeffs.is_empty() {
            return vec!["0".to_string()];
        }
        self.coeffs.iter().map(format_rational).collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let len = (self.coeffs.len() + other.coeffs.len()).saturating_sub(1);
        let mut coeffs = vec![BigRational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::new(coeffs, order)
    }

    pub fn sign(&self) -> SeriesSign {
        series_sign(self)
    }
}

/// Classifies a real series by its first nonzero coefficient.
pub fn series_sign(s: &RealLambdaSeries) -> SeriesSign {
    match s.coeffs.iter().find(|c| !c.is_zero()) {
        Some(c) if c.is_positive() => SeriesSign::Positive,
        Some(_) => SeriesSign::Negative,
        None => SeriesSign::ZeroUpToK,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn leading_coefficient_rule() {
        let s = RealLambdaSeries::new(vec![r(0, 1), r(3, 4), r(-5, 1)], 2);
        assert_eq!(series_sign(&s), SeriesSign::Positive);
        assert_eq!(series_sign(&RealLambdaSeries::from_ints(&[0, -1], 1)), SeriesSign::Negative);
        assert_eq!(series_sign(&RealLambdaSeries::from_ints(&[0, 0, 0], 2)), SeriesSign::ZeroUpToK);
    }

    #[test]
    fn truncation_drops_high_coefficients() {
        let s = LambdaSeries::new(vec![GaussianRational::zero(), GaussianRational::one()], 0);
        assert!(s.is_zero());
    }

    #[test]
    fn non_real_series_is_reported() {
        let s = LambdaSeries::new(vec![GaussianRational::one(), GaussianRational::i()], 3);
        assert_eq!(s.to_real(), Err(1));
    }
}
