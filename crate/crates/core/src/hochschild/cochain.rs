//! Multidifferential Hochschild cochains with values in the Weyl algebra.
//!
//! A cochain of arity `k` is stored in normal form
//! `φ(f₁,…,f_k) = Σ c · λ^a · p^I · q^L · ∂^{J₁}f₁ ⋯ ∂^{J_k}f_k`.
//! Distinct normal-form monomials act as linearly independent operators on
//! polynomial arguments, so structural equality is equality of cochains.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, AlgebraError, ParseError};
use crate::multi_index::MultiIndex;
use crate::polynomial::{accumulate, QPolynomial};
use crate::qseries::QSeries;
use crate::scalar::GaussianRational;
use crate::weyl_element::{WElement, WMonomial};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CochainMonomial {
    pub lambda: u32,
    pub p: MultiIndex,
    pub q: MultiIndex,
    pub derivs: Vec<MultiIndex>,
}

impl CochainMonomial {
    pub fn deg(&self) -> u32 {
        self.lambda + self.p.total()
    }

    /// Total differential order `Σ_s |J_s|`.
    pub fn order(&self) -> u32 {
        self.derivs.iter().map(MultiIndex::total).sum()
    }

    fn times(&self, other: &Self) -> Self {
        let mut derivs = self.derivs.clone();
        derivs.extend(other.derivs.iter().cloned());
        Self { lambda: self.lambda + other.lambda, p: self.p.add(&other.p), q: self.q.add(&other.q), derivs }
    }

    /// Total `q`-derivative `∂_q^α` of the value, acting on the coefficient
    /// monomial and on every argument by the Leibniz rule.
    fn total_dq(&self, alpha: &MultiIndex) -> Vec<(CochainMonomial, BigInt)> {
        if alpha.is_zero() {
            return vec![(self.clone(), BigInt::one())];
        }
        let mut out = Vec::new();
        for (parts, mult) in alpha.splits(1 + self.derivs.len()) {
            let ff = self.q.falling(&parts[0]);
            if ff.is_zero() {
                continue;
            }
            let q = self.q.checked_sub(&parts[0]).expect("nonzero falling factorial");
            let derivs = self.derivs.iter().zip(&parts[1..]).map(|(j, extra)| j.add(extra)).collect();
            out.push((CochainMonomial { lambda: self.lambda, p: self.p.clone(), q, derivs }, mult * ff));
        }
        out
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiDiffCochain {
    n: usize,
    arity: usize,
    terms: BTreeMap<CochainMonomial, GaussianRational>,
}

impl MultiDiffCochain {
    pub fn zero(n: usize, arity: usize) -> Self {
        Self { n, arity, terms: BTreeMap::new() }
    }

    pub fn from_terms(
        n: usize,
        arity: usize,
        terms: impl IntoIterator<Item = (CochainMonomial, GaussianRational)>,
    ) -> Result<Self, AlgebraError> {
        let mut c = Self::zero(n, arity);
        for (m, v) in terms {
            if m.derivs.len() != arity {
                return Err(AlgebraError::ArityMismatch { expected: arity, found: m.derivs.len() });
            }
            check_dim(n, m.p.len())?;
            check_dim(n, m.q.len())?;
            for j in &m.derivs {
                check_dim(n, j.len())?;
            }
            c.push(m, v);
        }
        Ok(c)
    }

    /// Single term `c · q^L · Π ∂^{J_s}` (no `λ`, no `p`).
    pub fn differential(n: usize, q: MultiIndex, derivs: Vec<MultiIndex>, c: GaussianRational) -> Self {
        let arity = derivs.len();
        let m = CochainMonomial { lambda: 0, p: MultiIndex::zeros(n), q, derivs };
        Self::from_terms(n, arity, [(m, c)]).expect("consistent shapes")
    }

    /// `Σ_{L} poly_L q^L · Π ∂^{J_s}` for a q-polynomial coefficient.
    pub fn with_coefficient(poly: &QPolynomial, derivs: Vec<MultiIndex>) -> Self {
        let n = poly.dim();
        let mut c = Self::zero(n, derivs.len());
        for (e, v) in poly.terms() {
            c.push(
                CochainMonomial { lambda: 0, p: MultiIndex::zeros(n), q: e.clone(), derivs: derivs.clone() },
                v.clone(),
            );
        }
        c
    }

    /// The inclusion `f ↦ π*(f)` as an arity-1 cochain.
    pub fn inclusion(n: usize) -> Self {
        Self::differential(n, MultiIndex::zeros(n), vec![MultiIndex::zeros(n)], GaussianRational::one())
    }

    /// The pointwise product `(f, g) ↦ f·g`.
    pub fn pointwise_product(n: usize) -> Self {
        Self::differential(
            n,
            MultiIndex::zeros(n),
            vec![MultiIndex::zeros(n), MultiIndex::zeros(n)],
            GaussianRational::one(),
        )
    }

    /// An element of `W` viewed as a constant (arity 0) cochain.
    pub fn from_element(w: &WElement) -> Self {
        let n = w.dim();
        let mut c = Self::zero(n, 0);
        for (m, v) in w.terms() {
            c.push(CochainMonomial { lambda: m.lambda, p: m.p.clone(), q: m.q.clone(), derivs: Vec::new() }, v.clone());
        }
        c
    }

    pub(crate) fn push(&mut self, m: CochainMonomial, c: GaussianRational) {
        accumulate(&mut self.terms, m, c);
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn arity(&self) -> usize {
        self.arity
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

    pub fn terms(&self) -> impl Iterator<Item = (&CochainMonomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &CochainMonomial) -> GaussianRational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn first_term(&self) -> Option<(&CochainMonomial, &GaussianRational)> {
        self.terms.iter().next()
    }

    pub fn max_order(&self) -> u32 {
        self.terms.keys().map(CochainMonomial::order).max().unwrap_or(0)
    }

    pub fn max_q_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.q.total()).max().unwrap_or(0)
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(CochainMonomial::deg).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.keys().all(|m| m.deg() == d)
    }

    pub fn is_p_free(&self) -> bool {
        self.terms.keys().all(|m| m.p.is_zero())
    }

    pub fn is_lambda_free(&self) -> bool {
        self.terms.keys().all(|m| m.lambda == 0)
    }

    fn check_shape(&self, other: &Self) -> Result<(), AlgebraError> {
        check_dim(self.n, other.n)?;
        if self.arity != other.arity {
            return Err(AlgebraError::ArityMismatch { expected: self.arity, found: other.arity });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.push(m.clone(), c.clone());
        }
        Ok(out)
    }

    /// `self + other`; panics on a shape mismatch.
    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("cochain shape mismatch")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c)
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        if s.is_zero() {
            return Self::zero(self.n, self.arity);
        }
        self.map_coeffs(|c| c * s)
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        self.scale(&GaussianRational::from_real(r.clone()))
    }

    fn map_coeffs(&self, f: impl Fn(&GaussianRational) -> GaussianRational) -> Self {
        Self { n: self.n, arity: self.arity, terms: self.terms.iter().map(|(m, c)| (m.clone(), f(c))).collect() }
    }

    fn filter(&self, keep: impl Fn(&CochainMonomial) -> bool) -> Self {
        Self {
            n: self.n,
            arity: self.arity,
            terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Multiplication by `λ^j`.
    pub fn shift_lambda(&self, j: u32) -> Self {
        Self {
            n: self.n,
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut m = m.clone();
                    m.lambda += j;
                    (m, c.clone())
                })
                .collect(),
        }
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        self.filter(|m| m.deg() == d)
    }

    /// Drops every term of `deg`-degree above `max_deg`.
    pub fn truncate(&self, max_deg: u32) -> Self {
        self.filter(|m| m.deg() <= max_deg)
    }

    /// Terms with `λ`-power `a`, `λ` removed.
    pub fn lambda_part(&self, a: u32) -> Self {
        let mut out = Self::zero(self.n, self.arity);
        for (m, c) in &self.terms {
            if m.lambda == a {
                let mut m = m.clone();
                m.lambda = 0;
                out.push(m, c.clone());
            }
        }
        out
    }

    /// `φ/λ`, or `None` when some term carries no factor of `λ`.
    pub fn divide_lambda(&self) -> Option<Self> {
        let mut out = Self::zero(self.n, self.arity);
        for (m, c) in &self.terms {
            let mut m = m.clone();
            m.lambda = m.lambda.checked_sub(1)?;
            out.terms.insert(m, c.clone());
        }
        Some(out)
    }

    /// Sets `λ = 0`.
    pub fn classical_limit(&self) -> Self {
        self.filter(|m| m.lambda == 0)
    }

    /// Sets `p = 0`.
    pub fn p_free_part(&self) -> Self {
        self.filter(|m| m.p.is_zero())
    }

    pub fn conj_coeffs(&self) -> Self {
        self.map_coeffs(GaussianRational::conj)
    }

    /// `φ*(f₀,…,f_r) = conj(φ(conj f_r, …, conj f₀))`.
    pub fn involution(&self) -> Self {
        let mut out = Self::zero(self.n, self.arity);
        for (m, c) in &self.terms {
            let mut m = m.clone();
            m.derivs.reverse();
            out.push(m, c.conj());
        }
        out
    }

    /// `(φ∘σ)(f₁,…,f_k) = φ(f_{σ(1)},…,f_{σ(k)})`.
    pub fn permute(&self, sigma: &[usize]) -> Self {
        assert_eq!(sigma.len(), self.arity);
        let mut out = Self::zero(self.n, self.arity);
        for (m, c) in &self.terms {
            let mut derivs = vec![MultiIndex::zeros(self.n); self.arity];
            for (s, j) in m.derivs.iter().enumerate() {
                derivs[sigma[s]] = j.clone();
            }
            out.push(CochainMonomial { derivs, ..m.clone() }, c.clone());
        }
        out
    }

    /// Antisymmetrization `(1/k!) Σ_σ sign(σ) φ∘σ`.
    pub fn alt(&self) -> Self {
        let perms = signed_permutations(self.arity);
        let mut out = Self::zero(self.n, self.arity);
        for (sigma, sign) in &perms {
            let p = self.permute(sigma);
            out = if *sign > 0 { out.add(&p) } else { out.sub(&p) };
        }
        let k_fact = BigRational::from_integer(BigInt::from(perms.len()));
        out.scale_rational(&(BigRational::one() / k_fact))
    }

    /// Substitutes the p-free cochain `inner` into argument slot `slot`:
    /// `φ(f₁,…,inner(g₁,…,g_m),…,f_k)`, an arity `k + m − 1` cochain.
    pub fn insert(&self, slot: usize, inner: &MultiDiffCochain) -> Result<Self, AlgebraError> {
        check_dim(self.n, inner.n)?;
        if slot >= self.arity {
            return Err(AlgebraError::IndexOutOfRange { index: slot, n: self.arity });
        }
        if !inner.is_p_free() {
            return Err(AlgebraError::Invalid("only p-free cochains can be inserted as arguments".into()));
        }
        let m = inner.arity;
        let mut out = Self::zero(self.n, self.arity + m - 1);
        let mut split_cache: HashMap<MultiIndex, Vec<(Vec<MultiIndex>, BigInt)>> = HashMap::new();
        for (outer, c_outer) in &self.terms {
            let js = &outer.derivs[slot];
            let splits = split_cache.entry(js.clone()).or_insert_with(|| js.splits(1 + m));
            for (inner_m, c_inner) in &inner.terms {
                let base = c_outer * c_inner;
                for (parts, mult) in splits.iter() {
                    let ff = inner_m.q.falling(&parts[0]);
                    if ff.is_zero() {
                        continue;
                    }
                    let q_inner = inner_m.q.checked_sub(&parts[0]).expect("nonzero falling factorial");
                    let mut derivs = Vec::with_capacity(out.arity);
                    derivs.extend(outer.derivs[..slot].iter().cloned());
                    derivs.extend(inner_m.derivs.iter().zip(&parts[1..]).map(|(k, extra)| k.add(extra)));
                    derivs.extend(outer.derivs[slot + 1..].iter().cloned());
                    let mono = CochainMonomial {
                        lambda: outer.lambda + inner_m.lambda,
                        p: outer.p.clone(),
                        q: outer.q.add(&q_inner),
                        derivs,
                    };
                    out.push(mono, base.scale_int(&(mult * &ff)));
                }
            }
        }
        Ok(out)
    }

    /// `(φ·ψ)(f…, g…) = φ(f…)·ψ(g…)` with the commutative product of `W`.
    pub fn pointwise(&self, other: &Self) -> Result<Self, AlgebraError> {
        check_dim(self.n, other.n)?;
        let mut out = Self::zero(self.n, self.arity + other.arity);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.push(a.times(b), ca * cb);
            }
        }
        Ok(out)
    }

    /// `(φ ⋆ ψ)(f…, g…) = φ(f…) ⋆_Weyl ψ(g…)`; terms above `max_deg` are skipped.
    pub fn weyl_product(&self, other: &Self, max_deg: Option<u32>) -> Result<Self, AlgebraError> {
        check_dim(self.n, other.n)?;
        let n = self.n;
        let mut out = Self::zero(n, self.arity + other.arity);
        let half_i = GaussianRational::complex(0, 1, 1, 2);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some(k) = max_deg {
                    if a.deg() + b.deg() > k {
                        continue;
                    }
                }
                let cab = ca * cb;
                for alpha in b.p.below() {
                    let dp_b = b.p.falling(&alpha);
                    let b_p = b.p.checked_sub(&alpha).expect("α ≤ p_b");
                    for beta in a.p.below() {
                        let dp_a = a.p.falling(&beta);
                        let a_p = a.p.checked_sub(&beta).expect("β ≤ p_a");
                        let r = alpha.total() + beta.total();
                        let mut scalar = cab.clone();
                        for _ in 0..r {
                            scalar = &scalar * &half_i;
                        }
                        if beta.total() % 2 == 1 {
                            scalar = -scalar;
                        }
                        let denom = alpha.factorial() * beta.factorial();
                        let scalar = scalar.scale(&BigRational::new(&dp_a * &dp_b, denom));
                        let a_base = CochainMonomial { p: a_p.clone(), ..a.clone() };
                        let b_base = CochainMonomial { p: b_p.clone(), ..b.clone() };
                        let da = a_base.total_dq(&alpha);
                        let db = b_base.total_dq(&beta);
                        for (ma, ka) in &da {
                            for (mb, kb) in &db {
                                let mut mono = ma.times(mb);
                                mono.lambda += r;
                                out.push(mono, scalar.scale_int(&(ka * kb)));
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Evaluates on function-series arguments, truncating at `deg ≤ truncation`.
    pub fn evaluate(&self, args: &[QSeries], truncation: u32) -> Result<WElement, AlgebraError> {
        if args.len() != self.arity {
            return Err(AlgebraError::ArityMismatch { expected: self.arity, found: args.len() });
        }
        for a in args {
            check_dim(self.n, a.dim())?;
        }
        let mut cache: HashMap<(usize, MultiIndex), WElement> = HashMap::new();
        let mut out = WElement::zero(self.n, truncation);
        for (m, c) in &self.terms {
            let mut value =
                WElement::monomial(self.n, truncation, WMonomial::new(m.lambda, m.p.clone(), m.q.clone()), c.clone());
            for (s, j) in m.derivs.iter().enumerate() {
                if value.is_zero() {
                    break;
                }
                let d = cache
                    .entry((s, j.clone()))
                    .or_insert_with(|| args[s].derivative(j).into_welement().with_truncation(truncation));
                value = value.multiply(d)?;
            }
            out = &out + &value;
        }
        Ok(out)
    }
}

/// All permutations of `0..k` with their signs.
pub fn signed_permutations(k: usize) -> Vec<(Vec<usize>, i32)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut perms = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut perms);
    perms
        .into_iter()
        .map(|p| {
            let inversions = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            let sign = if inversions % 2 == 0 { 1 } else { -1 };
            (p, sign)
        })
        .collect()
}

impl fmt::Debug for MultiDiffCochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("({c})·λ^{}·p{:?}·q{:?}·∂{:?}", m.lambda, m.p, m.q, m.derivs))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct CochainTermJson {
    lambda: u32,
    p: MultiIndex,
    derivs: Vec<MultiIndex>,
    coeff_poly: QPolynomial,
}

#[derive(Serialize, Deserialize)]
struct CochainJson {
    n: usize,
    arity: usize,
    terms: Vec<CochainTermJson>,
}

impl MultiDiffCochain {
    /// Groups terms by `(λ-power, p-exponent, derivatives)` with q-polynomial coefficients.
    pub fn grouped(&self) -> Vec<(u32, MultiIndex, Vec<MultiIndex>, QPolynomial)> {
        let mut groups: BTreeMap<(u32, MultiIndex, Vec<MultiIndex>), Vec<(MultiIndex, GaussianRational)>> =
            BTreeMap::new();
        for (m, c) in &self.terms {
            groups.entry((m.lambda, m.p.clone(), m.derivs.clone())).or_default().push((m.q.clone(), c.clone()));
        }
        groups
            .into_iter()
            .map(|((a, p, d), qs)| {
                let poly = QPolynomial::from_terms(self.n, qs).expect("consistent dimension");
                (a, p, d, poly)
            })
            .collect()
    }
}

impl Serialize for MultiDiffCochain {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CochainJson {
            n: self.n,
            arity: self.arity,
            terms: self
                .grouped()
                .into_iter()
                .map(|(lambda, p, derivs, coeff_poly)| CochainTermJson { lambda, p, derivs, coeff_poly })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiDiffCochain {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = CochainJson::deserialize(d)?;
        let mut terms = Vec::new();
        for t in j.terms {
            for (q, c) in t.coeff_poly.terms() {
                terms.push((
                    CochainMonomial { lambda: t.lambda, p: t.p.clone(), q: q.clone(), derivs: t.derivs.clone() },
                    c.clone(),
                ));
            }
        }
        MultiDiffCochain::from_terms(j.n, j.arity, terms)
            .map_err(|e| serde::de::Error::custom(ParseError::Invalid(e.to_string())))
    }
}
