use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

/// Exponent vector / derivative multi-index over `n` coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(SmallVec<[u16; 4]>);

impl MultiIndex {
    pub fn zeros(n: usize) -> Self {
        Self(SmallVec::from_elem(0, n))
    }

    pub fn unit(n: usize, k: usize) -> Self {
        let mut m = Self::zeros(n);
        m.0[k] = 1;
        m
    }

    pub fn from_slice(v: &[u16]) -> Self {
        Self(SmallVec::from_slice(v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u16] {
        &self.0
    }

    pub fn get(&self, k: usize) -> u16 {
        self.0[k]
    }

    pub fn set(&mut self, k: usize, v: u16) {
        self.0[k] = v;
    }

    /// `|α|`.
    pub fn total(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len(), other.len());
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        debug_assert_eq!(self.len(), other.len());
        let mut out = SmallVec::with_capacity(self.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            out.push(a.checked_sub(*b)?);
        }
        Some(Self(out))
    }

    /// Componentwise `self ≤ other`.
    pub fn le(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Componentwise minimum.
    pub fn meet(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn inc(&self, k: usize) -> Self {
        let mut m = self.clone();
        m.0[k] += 1;
        m
    }

    /// `Π_k a_k! / (a_k − b_k)!`, the coefficient of `∂^b x^a`. Zero unless `b ≤ a`.
    pub fn falling(&self, by: &Self) -> BigInt {
        let mut acc = BigInt::one();
        for (&a, &b) in self.0.iter().zip(&by.0) {
            if b > a {
                return BigInt::from(0);
            }
            for t in (a - b + 1)..=a {
                acc *= t;
            }
        }
        acc
    }

    /// `α! = Π_k α_k!`.
    pub fn factorial(&self) -> BigInt {
        let mut acc = BigInt::one();
        for &a in &self.0 {
            for t in 2..=a {
                acc *= t;
            }
        }
        acc
    }

    /// All `β ≤ self`, in lexicographic order.
    pub fn below(&self) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex(SmallVec::new())];
        for &bound in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (bound as usize + 1));
            for prefix in &out {
                for v in 0..=bound {
                    let mut m = prefix.clone();
                    m.0.push(v);
                    next.push(m);
                }
            }
            out = next;
        }
        out
    }

    /// All multi-indices in `n` variables with `|α| = d`.
    pub fn of_total(n: usize, d: u32) -> Vec<MultiIndex> {
        fn rec(n: usize, d: u32, prefix: &mut Vec<u16>, out: &mut Vec<MultiIndex>) {
            if prefix.len() + 1 == n {
                prefix.push(d as u16);
                out.push(MultiIndex::from_slice(prefix));
                prefix.pop();
                return;
            }
            for v in (0..=d).rev() {
                prefix.push(v as u16);
                rec(n, d - v, prefix, out);
                prefix.pop();
            }
        }
        if n == 0 {
            return if d == 0 { vec![MultiIndex::zeros(0)] } else { Vec::new() };
        }
        let mut out = Vec::new();
        rec(n, d, &mut Vec::with_capacity(n), &mut out);
        out.sort();
        out
    }

    /// All multi-indices in `n` variables with `|α| ≤ d`, graded then lexicographic.
    pub fn up_to(n: usize, d: u32) -> Vec<MultiIndex> {
        (0..=d).flat_map(|t| Self::of_total(n, t)).collect()
    }

    /// Every way to write `self = β_0 + … + β_{parts−1}`, with the multinomial
    /// coefficient `Π_k self_k! / (β_{0,k}! ⋯ β_{parts−1,k}!)`.
    pub fn splits(&self, parts: usize) -> Vec<(Vec<MultiIndex>, BigInt)> {
        assert!(parts >= 1);
        if parts == 1 {
            return vec![(vec![self.clone()], BigInt::one())];
        }
        let mut out = Vec::new();
        for first in self.below() {
            let rest = self.checked_sub(&first).expect("below() yields β ≤ α");
            let head = self.falling(&first) / first.factorial();
            for (mut tail, coeff) in rest.splits(parts - 1) {
                let mut v = Vec::with_capacity(parts);
                v.push(first.clone());
                v.append(&mut tail);
                out.push((v, &head * coeff));
            }
        }
        out
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl From<Vec<u16>> for MultiIndex {
    fn from(v: Vec<u16>) -> Self {
        Self(SmallVec::from_vec(v))
    }
}
