//! Exact Gaussian rationals `a + b i` with `a, b ∈ ℚ`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseError;

/// A complex number with exact rational real and imaginary parts.
///
/// `BigRational` keeps both parts reduced with a positive denominator, so
/// structural equality is numeric equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_real(re: BigRational) -> Self {
        Self { re, im: BigRational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_real(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num/den`, real. Panics on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn complex(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        Self::new(
            BigRational::new(BigInt::from(re_num), BigInt::from(re_den)),
            BigRational::new(BigInt::from(im_num), BigInt::from(im_den)),
        )
    }

    pub fn i() -> Self {
        Self { re: BigRational::zero(), im: BigRational::one() }
    }

    /// `i^k` for any integer `k`.
    pub fn i_pow(k: u32) -> Self {
        match k % 4 {
            0 => Self::one(),
            1 => Self::i(),
            2 => -Self::one(),
            _ => -Self::i(),
        }
    }

    /// `i^k · self`, without multiplying.
    pub fn mul_i_pow(&self, k: u32) -> Self {
        match k % 4 {
            0 => self.clone(),
            1 => Self { re: -self.im.clone(), im: self.re.clone() },
            2 => -self,
            _ => Self { re: self.im.clone(), im: -self.re.clone() },
        }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `|z|² = re² + im²`.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_one() {
            return self.clone();
        }
        Self { re: scale_part(&self.re, r), im: scale_part(&self.im, r) }
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        if k.is_one() {
            return self.clone();
        }
        let part = |x: &BigRational| if x.is_zero() { BigRational::zero() } else { x * k };
        Self { re: part(&self.re), im: part(&self.im) }
    }
}

fn scale_part(x: &BigRational, r: &BigRational) -> BigRational {
    if x.is_zero() {
        BigRational::zero()
    } else {
        x * r
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self { re: BigRational::zero(), im: BigRational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self { re: BigRational::one(), im: BigRational::zero() }
    }
}

impl From<BigRational> for GaussianRational {
    fn from(r: BigRational) -> Self {
        Self::from_real(r)
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Add for GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: GaussianRational) -> GaussianRational {
        GaussianRational { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        if !rhs.re.is_zero() {
            self.re += &rhs.re;
        }
        if !rhs.im.is_zero() {
            self.im += &rhs.im;
        }
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Sub for GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: GaussianRational) -> GaussianRational {
        GaussianRational { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        if rhs.im.is_zero() {
            return self.scale(&rhs.re);
        }
        if self.im.is_zero() {
            return rhs.scale(&self.re);
        }
        GaussianRational { re: &self.re * &rhs.re - &self.im * &rhs.im, im: &self.re * &rhs.im + &self.im * &rhs.re }
    }
}

impl Mul for GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: GaussianRational) -> GaussianRational {
        &self * &rhs
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &GaussianRational) {
        *self = &*self * rhs;
    }
}

impl<'a> Div<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn div(self, rhs: &GaussianRational) -> GaussianRational {
        self * &rhs.inv().expect("division by zero Gaussian rational")
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -self.re, im: -self.im }
    }
}

impl<'a> Neg for &'a GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -self.re.clone(), im: -self.im.clone() }
    }
}

/// Formats a rational as `a` or `a/b`.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `a` or `a/b` (optional sign, no spaces inside).
pub fn parse_rational(s: &str) -> Result<BigRational, ParseError> {
    let s = s.trim();
    let bad = || ParseError::Scalar(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

impl fmt::Display for GaussianRational {
    /// Canonical text: `a/b`, `c/d i`, or `a/b+c/d i` / `a/b-c/d i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", format_rational(&self.re));
        }
        if self.re.is_zero() {
            return write!(f, "{} i", format_rational(&self.im));
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{} i", format_rational(&self.re), sign, format_rational(&self.im.abs()))
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for GaussianRational {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let t = s.trim();
        if t.is_empty() {
            return Err(ParseError::Scalar(s.to_string()));
        }
        let Some(body) = t.strip_suffix('i') else {
            return Ok(Self::from_real(parse_rational(t)?));
        };
        let body = body.trim_end();
        // split point: the last sign that is not the leading one
        let split =
            body.char_indices().filter(|&(idx, c)| idx > 0 && (c == '+' || c == '-')).map(|(idx, _)| idx).last();
        let (re, im) = match split {
            Some(idx) => (parse_rational(&body[..idx])?, &body[idx..]),
            None => (BigRational::zero(), body),
        };
        let im = match im.trim() {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            other => parse_rational(other)?,
        };
        Ok(Self::new(re, im))
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for a plain rational stored as a string.
pub mod rational_string {
    use super::*;

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<BigRational>` stored as strings.
pub mod rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<String> = v.iter().map(format_rational).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        strs.iter().map(|s| parse_rational(s).map_err(serde::de::Error::custom)).collect()
    }
}

/// Serde adapter for square matrices of rationals stored as strings.
pub mod rational_matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &[Vec<BigRational>], s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<Vec<String>> = m.iter().map(|row| row.iter().map(format_rational).collect()).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigRational>>, D::Error> {
        let strs = Vec::<Vec<String>>::deserialize(d)?;
        strs.iter()
            .map(|row| row.iter().map(|s| parse_rational(s).map_err(serde::de::Error::custom)).collect())
            .collect()
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(m: &Option<Vec<Vec<BigRational>>>, s: S) -> Result<S::Ok, S::Error> {
            match m {
                Some(m) => super::serialize(m, s),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Vec<BigRational>>>, D::Error> {
            let strs = Option::<Vec<Vec<String>>>::deserialize(d)?;
            strs.map(|m| {
                m.iter()
                    .map(|row| row.iter().map(|s| parse_rational(s).map_err(serde::de::Error::custom)).collect())
                    .collect()
            })
            .transpose()
        }
    }
}
