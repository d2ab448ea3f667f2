//! Star products on polynomial functions, `f ⋆ g = fg + Σ_r λ^r C_r(f, g)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::StarError;
use crate::error::{check_dim, AlgebraError};
use crate::hochschild::{
    coboundary, solve_cochain_equation, Ansatz, CoboundaryMode, CochainMonomial, MultiDiffCochain, SolveReport,
    SolverConfig,
};
use crate::matrix::Matrix;
use crate::multi_index::MultiIndex;
use crate::polynomial::QPolynomial;
use crate::qseries::QSeries;
use crate::scalar::{rational_matrix, GaussianRational};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StarProductSpec {
    n: usize,
    hermitian: bool,
    theta: Option<Vec<Vec<BigRational>>>,
    poisson: Option<Vec<Vec<QPolynomial>>>,
    /// `cochains[r − 1] = C_r`.
    cochains: Vec<MultiDiffCochain>,
}

fn check_bidifferential(n: usize, c: &MultiDiffCochain) -> Result<(), StarError> {
    check_dim(n, c.dim())?;
    if c.arity() != 2 {
        return Err(AlgebraError::ArityMismatch { expected: 2, found: c.arity() }.into());
    }
    if !c.is_p_free() || !c.is_lambda_free() {
        return Err(StarError::InvalidSpec("star-product cochains must not depend on p or λ".into()));
    }
    Ok(())
}

fn check_square<T>(n: usize, m: &[Vec<T>]) -> Result<(), StarError> {
    check_dim(n, m.len())?;
    for row in m {
        check_dim(n, row.len())?;
    }
    Ok(())
}

impl StarProductSpec {
    pub fn new(n: usize, cochains: Vec<MultiDiffCochain>, hermitian: bool) -> Result<Self, StarError> {
        for c in &cochains {
            check_bidifferential(n, c)?;
        }
        Ok(Self { n, hermitian, theta: None, poisson: None, cochains })
    }

    /// Attaches a polynomial Poisson tensor `π^{ij}` (must be antisymmetric).
    pub fn with_poisson(mut self, poisson: Vec<Vec<QPolynomial>>) -> Result<Self, StarError> {
        check_square(self.n, &poisson)?;
        for i in 0..self.n {
            for j in 0..self.n {
                if !poisson[i][j].add(&poisson[j][i]).is_zero() {
                    return Err(StarError::NotAntisymmetric);
                }
            }
        }
        self.poisson = Some(poisson);
        Ok(self)
    }

    pub fn with_theta(mut self, theta: Vec<Vec<BigRational>>) -> Result<Self, StarError> {
        check_antisymmetric(self.n, &theta)?;
        self.theta = Some(theta);
        Ok(self)
    }

    /// The undeformed product on `ℝⁿ`: all `C_r = 0`, zero Poisson structure.
    pub fn zero(n: usize) -> Self {
        Self { n, hermitian: true, theta: None, poisson: None, cochains: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn theta(&self) -> Option<&Vec<Vec<BigRational>>> {
        self.theta.as_ref()
    }

    /// Highest `r` with a stored `C_r`.
    pub fn order(&self) -> usize {
        self.cochains.len()
    }

    pub fn cochains(&self) -> &[MultiDiffCochain] {
        &self.cochains
    }

    /// `C_r` for `r ≥ 1`; zero beyond the stored order. `C_0` is the pointwise product.
    pub fn cochain(&self, r: usize) -> MultiDiffCochain {
        if r == 0 {
            return MultiDiffCochain::pointwise_product(self.n);
        }
        self.cochains.get(r - 1).cloned().unwrap_or_else(|| MultiDiffCochain::zero(self.n, 2))
    }

    /// Adds `extra` to `C_r`, extending with zeros when needed.
    pub fn perturbed(&self, r: usize, extra: &MultiDiffCochain) -> Result<Self, StarError> {
        check_bidifferential(self.n, extra)?;
        if r == 0 {
            return Err(StarError::InvalidSpec("C_0 is fixed to the pointwise product".into()));
        }
        let mut out = self.clone();
        while out.cochains.len() < r {
            out.cochains.push(MultiDiffCochain::zero(self.n, 2));
        }
        out.cochains[r - 1] = out.cochains[r - 1].add(extra);
        Ok(out)
    }

    /// `μ + Σ_{1 ≤ r ≤ order} λ^r C_r` as one arity-2 cochain.
    pub fn star_cochain(&self, order: u32) -> MultiDiffCochain {
        let mut out = MultiDiffCochain::pointwise_product(self.n);
        for (i, c) in self.cochains.iter().enumerate() {
            let r = i as u32 + 1;
            if r > order {
                break;
            }
            out = out.add(&c.shift_lambda(r));
        }
        out
    }

    /// The Poisson tensor: explicit data if present, else read off from `C₁`
    /// via `{f, g} = −i(C₁(f, g) − C₁(g, f))`.
    pub fn poisson_tensor(&self) -> Vec<Vec<QPolynomial>> {
        let n = self.n;
        if let Some(p) = &self.poisson {
            return p.clone();
        }
        if let Some(t) = &self.theta {
            return t
                .iter()
                .map(|row| {
                    row.iter().map(|x| QPolynomial::constant(n, GaussianRational::from_real(x.clone()))).collect()
                })
                .collect();
        }
        let c1 = self.cochain(1);
        let anti = c1.sub(&c1.permute(&[1, 0])).scale(&-GaussianRational::i());
        let mut out = vec![vec![QPolynomial::zero(n); n]; n];
        for (m, c) in anti.terms() {
            if m.derivs[0].total() == 1 && m.derivs[1].total() == 1 {
                let i = (0..n).find(|&k| m.derivs[0].get(k) == 1).expect("unit index");
                let j = (0..n).find(|&k| m.derivs[1].get(k) == 1).expect("unit index");
                out[i][j] = out[i][j].add(&QPolynomial::monomial(m.q.clone(), c.clone()));
            }
        }
        out
    }

    /// `{f, g} = Σ π^{ij} ∂_i f ∂_j g` as an arity-2 cochain.
    pub fn poisson_cochain(&self) -> MultiDiffCochain {
        poisson_cochain(&self.poisson_tensor())
    }

    /// `f ⋆ g`, truncated at the smaller of the two `λ`-orders.
    pub fn star_apply(&self, f: &QSeries, g: &QSeries) -> Result<QSeries, AlgebraError> {
        check_dim(self.n, f.dim())?;
        check_dim(self.n, g.dim())?;
        let order = f.order().min(g.order());
        let w = self.star_cochain(order).evaluate(&[f.clone(), g.clone()], order)?;
        QSeries::from_welement(w)
    }

    /// `(F ⋆ G)_{ij} = Σ_k F_{ik} ⋆ G_{kj}`.
    pub fn star_apply_matrix(&self, f: &Matrix<QSeries>, g: &Matrix<QSeries>) -> Result<Matrix<QSeries>, AlgebraError> {
        f.product_with(g, |a, b| self.star_apply(a, b), |a, b| a.add(b))
    }
}

pub fn poisson_cochain(tensor: &[Vec<QPolynomial>]) -> MultiDiffCochain {
    let n = tensor.len();
    let mut out = MultiDiffCochain::zero(n, 2);
    for (i, row) in tensor.iter().enumerate() {
        for (j, pij) in row.iter().enumerate() {
            out =
                out.add(&MultiDiffCochain::with_coefficient(pij, vec![MultiIndex::unit(n, i), MultiIndex::unit(n, j)]));
        }
    }
    out
}

fn check_antisymmetric(n: usize, theta: &[Vec<BigRational>]) -> Result<(), StarError> {
    check_square(n, theta)?;
    for i in 0..n {
        for j in 0..n {
            if !(&theta[i][j] + &theta[j][i]).is_zero() {
                return Err(StarError::NotAntisymmetric);
            }
        }
    }
    Ok(())
}

/// The Moyal product of a constant Poisson tensor `θ`:
/// `C_r = (1/r!)(i/2)^r θ^{i₁j₁}⋯θ^{i_rj_r} ∂_{i₁…i_r} ⊗ ∂_{j₁…j_r}`.
pub fn make_constant_theta_star(theta: &[Vec<BigRational>], order: u32) -> Result<StarProductSpec, StarError> {
    let n = theta.len();
    check_antisymmetric(n, theta)?;
    let mut base: BTreeMap<(MultiIndex, MultiIndex), BigRational> = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            if !theta[i][j].is_zero() {
                base.insert((MultiIndex::unit(n, i), MultiIndex::unit(n, j)), theta[i][j].clone());
            }
        }
    }
    let mut power: BTreeMap<(MultiIndex, MultiIndex), BigRational> =
        BTreeMap::from([((MultiIndex::zeros(n), MultiIndex::zeros(n)), BigRational::from_integer(1.into()))]);
    let mut cochains = Vec::new();
    let mut r_fact = BigInt::from(1);
    for r in 1..=order {
        let mut next: BTreeMap<(MultiIndex, MultiIndex), BigRational> = BTreeMap::new();
        for ((a, b), x) in &power {
            for ((c, d), y) in &base {
                let e = next.entry((a.add(c), b.add(d))).or_insert_with(BigRational::zero);
                *e += x * y;
            }
        }
        next.retain(|_, v| !v.is_zero());
        power = next;
        r_fact *= r;
        let scale = GaussianRational::i_pow(r).scale(&BigRational::new(1.into(), BigInt::from(2).pow(r) * &r_fact));
        let terms = power.iter().map(|((a, b), x)| {
            (
                CochainMonomial {
                    lambda: 0,
                    p: MultiIndex::zeros(n),
                    q: MultiIndex::zeros(n),
                    derivs: vec![a.clone(), b.clone()],
                },
                scale.scale(x),
            )
        });
        cochains.push(MultiDiffCochain::from_terms(n, 2, terms)?);
    }
    StarProductSpec::new(n, cochains, true)?.with_theta(theta.to_vec())
}

/// A Hermitian star product for a polynomial Poisson tensor, built order by
/// order: `C₁ = (i/2) π^{ij} ∂_i ⊗ ∂_j`, and for `r ≥ 2` a unital `C_r` solving
/// `δ₀C_r = Σ_{i+j=r; i,j≥1} (C_i(C_j(f,g),h) − C_i(f,C_j(g,h)))`, replaced by
/// its Hermitian part. Fails where the constraint is obstructed.
pub fn make_polynomial_poisson_star(
    poisson: Vec<Vec<QPolynomial>>,
    order: u32,
    config: &SolverConfig,
) -> Result<(StarProductSpec, Vec<SolveReport>), StarError> {
    let n = poisson.len();
    let base = StarProductSpec::zero(n).with_poisson(poisson)?;
    if order == 0 {
        return Ok((base, Vec::new()));
    }
    let half_i = GaussianRational::complex(0, 1, 1, 2);
    let mut cochains = vec![base.poisson_cochain().scale(&half_i)];
    let mut reports = Vec::new();
    let ansatz = Ansatz { mode: CoboundaryMode::Classical, nonzero_derivs: true };
    for r in 2..=order as usize {
        let mut rhs = MultiDiffCochain::zero(n, 3);
        for i in 1..r {
            let (ci, cj) = (&cochains[i - 1], &cochains[r - i - 1]);
            rhs = rhs.add(&ci.insert(0, cj)?).sub(&ci.insert(1, cj)?);
        }
        let (c, report) = solve_cochain_equation(&rhs, ansatz, config)?;
        let c = c.add(&c.involution()).scale(&GaussianRational::ratio(1, 2));
        if coboundary(&c, CoboundaryMode::Classical) != rhs {
            return Err(StarError::InvalidSpec(format!(
                "Hermitian part of C_{r} no longer solves the order-{r} constraint"
            )));
        }
        cochains.push(c);
        reports.push(report);
    }
    let spec = StarProductSpec::new(n, cochains, true)?.with_poisson(base.poisson_tensor())?;
    Ok((spec, reports))
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff_poly: QPolynomial,
    derivs: Vec<MultiIndex>,
}

#[derive(Serialize, Deserialize)]
struct OrderJson {
    lambda_power: usize,
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct SpecJson {
    n: usize,
    hermitian: bool,
    #[serde(with = "rational_matrix::option", default)]
    theta: Option<Vec<Vec<BigRational>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    poisson: Option<Vec<Vec<QPolynomial>>>,
    cochains: Vec<OrderJson>,
}

impl Serialize for StarProductSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let cochains = self
            .cochains
            .iter()
            .enumerate()
            .map(|(i, c)| OrderJson {
                lambda_power: i + 1,
                terms: c
                    .grouped()
                    .into_iter()
                    .map(|(_, _, derivs, coeff_poly)| TermJson { coeff_poly, derivs })
                    .collect(),
            })
            .collect();
        SpecJson {
            n: self.n,
            hermitian: self.hermitian,
            theta: self.theta.clone(),
            poisson: self.poisson.clone(),
            cochains,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for StarProductSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = SpecJson::deserialize(d)?;
        let n = j.n;
        let max = j.cochains.iter().map(|o| o.lambda_power).max().unwrap_or(0);
        let mut cochains = vec![MultiDiffCochain::zero(n, 2); max];
        for o in j.cochains {
            if o.lambda_power == 0 {
                return Err(D::Error::custom("lambda_power must be at least 1"));
            }
            let mut c = MultiDiffCochain::zero(n, 2);
            for t in o.terms {
                if t.derivs.len() != 2 || t.derivs.iter().any(|d| d.len() != n) || t.coeff_poly.dim() != n {
                    return Err(D::Error::custom("cochain term shape does not match the dimension"));
                }
                c = c.add(&MultiDiffCochain::with_coefficient(&t.coeff_poly, t.derivs));
            }
            cochains[o.lambda_power - 1] = cochains[o.lambda_power - 1].add(&c);
        }
        let mut spec = StarProductSpec::new(n, cochains, j.hermitian).map_err(D::Error::custom)?;
        if let Some(t) = j.theta {
            spec = spec.with_theta(t).map_err(D::Error::custom)?;
        }
        if let Some(p) = j.poisson {
            spec = spec.with_poisson(p).map_err(D::Error::custom)?;
        }
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta2() -> Vec<Vec<BigRational>> {
        let one = BigRational::from_integer(1.into());
        vec![vec![BigRational::zero(), one.clone()], vec![-one, BigRational::zero()]]
    }

    #[test]
    fn first_order_moyal_cochain() {
        let spec = make_constant_theta_star(&theta2(), 3).unwrap();
        let half_i = GaussianRational::complex(0, 1, 1, 2);
        let e = |k| MultiIndex::unit(2, k);
        let a = MultiDiffCochain::differential(2, MultiIndex::zeros(2), vec![e(0), e(1)], half_i.clone());
        let b = MultiDiffCochain::differential(2, MultiIndex::zeros(2), vec![e(1), e(0)], half_i);
        assert_eq!(spec.cochain(1), a.sub(&b));
    }

    #[test]
    fn coordinates_star_product() {
        let spec = make_constant_theta_star(&theta2(), 3).unwrap();
        let (q1, q2) = (QSeries::q(2, 3, 0), QSeries::q(2, 3, 1));
        let expected = q1.mul(&q2).unwrap().add(&QSeries::lambda(2, 3).scale(&GaussianRational::complex(0, 1, 1, 2)));
        assert_eq!(spec.star_apply(&q1, &q2).unwrap(), expected);
        assert_eq!(spec.star_apply(&QSeries::one(2, 3), &q2).unwrap(), q2);
    }

    #[test]
    fn zero_theta_gives_zero_cochains() {
        let z = vec![vec![BigRational::zero(); 2]; 2];
        let spec = make_constant_theta_star(&z, 4).unwrap();
        assert!(spec.cochains().iter().all(MultiDiffCochain::is_zero));
    }

    #[test]
    fn rejects_non_antisymmetric_theta() {
        let one = BigRational::from_integer(1.into());
        let bad = vec![vec![one.clone(), one.clone()], vec![-one.clone(), BigRational::zero()]];
        assert!(matches!(make_constant_theta_star(&bad, 2), Err(StarError::NotAntisymmetric)));
    }

    #[test]
    fn json_round_trip() {
        let spec = make_constant_theta_star(&theta2(), 3).unwrap();
        let s = serde_json::to_string(&spec).unwrap();
        let back: StarProductSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(back, spec);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }
}
