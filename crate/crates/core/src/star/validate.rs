use serde::{Deserialize, Serialize};

use super::spec::StarProductSpec;
use crate::hochschild::MultiDiffCochain;
use crate::multi_index::MultiIndex;
use crate::polynomial::QPolynomial;
use crate::qseries::QSeries;
use crate::scalar::GaussianRational;

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Violation {
    /// `λ`-order at which the identity first fails.
    pub order: u32,
    /// Arguments exhibiting the failure, as q-exponents of monomials.
    pub witness: Vec<MultiIndex>,
    /// Value of the defect on the witness.
    pub value: Option<QPolynomial>,
    pub detail: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ValidationReport {
    pub order: u32,
    pub basis_degree: u32,
    pub associativity: Option<Violation>,
    pub poisson: Option<Violation>,
    pub hermitian: Option<Violation>,
    pub unitality: Option<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.associativity.is_none() && self.poisson.is_none() && self.hermitian.is_none() && self.unitality.is_none()
    }

    /// The first failed check, in the order associativity, Poisson, Hermitian, unitality.
    pub fn first_violation(&self) -> Option<(&'static str, &Violation)> {
        [
            ("associativity", &self.associativity),
            ("poisson", &self.poisson),
            ("hermitian", &self.hermitian),
            ("unitality", &self.unitality),
        ]
        .into_iter()
        .find_map(|(name, v)| v.as_ref().map(|v| (name, v)))
    }
}

/// `Σ_{i+j=r} (C_i(C_j(f,g),h) − C_i(f,C_j(g,h)))` with `C₀ = μ`.
pub fn associativity_defect(spec: &StarProductSpec, r: usize) -> MultiDiffCochain {
    let mut out = MultiDiffCochain::zero(spec.dim(), 3);
    for i in 0..=r {
        let (ci, cj) = (spec.cochain(i), spec.cochain(r - i));
        if ci.is_zero() || cj.is_zero() {
            continue;
        }
        out = out.add(&ci.insert(0, &cj).expect("p-free cochains")).sub(&ci.insert(1, &cj).expect("p-free cochains"));
    }
    out
}

fn monomial(e: &MultiIndex) -> QSeries {
    QSeries::from_qpoly(&QPolynomial::monomial(e.clone(), GaussianRational::from_int(1)), 0)
}

/// Finds arguments on which a nonzero `λ`-free, `p`-free cochain does not vanish.
///
/// Monomial tuples of the test basis are searched first, by total degree;
/// failing that, the monomials `q^{J_s}` of the lowest-order defect term are used.
pub fn find_witness(defect: &MultiDiffCochain, basis_degree: u32) -> (Vec<MultiIndex>, Option<QPolynomial>) {
    let n = defect.dim();
    let eval = |args: &[MultiIndex]| -> QPolynomial {
        let series: Vec<QSeries> = args.iter().map(monomial).collect();
        let w = defect.evaluate(&series, 0).expect("consistent shapes");
        w.component(0, &MultiIndex::zeros(n))
    };
    let basis = MultiIndex::up_to(n, basis_degree);
    let mut tuples: Vec<Vec<MultiIndex>> = vec![Vec::new()];
    for _ in 0..defect.arity() {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                basis.iter().map(move |b| {
                    let mut t = t.clone();
                    t.push(b.clone());
                    t
                })
            })
            .collect();
    }
    tuples.sort_by_key(|t| (t.iter().map(MultiIndex::total).sum::<u32>(), t.clone()));
    for args in tuples {
        let v = eval(&args);
        if !v.is_zero() {
            return (args, Some(v));
        }
    }
    let term = defect.terms().min_by_key(|(m, _)| (m.order(), (*m).clone())).map(|(m, _)| m.clone());
    match term {
        Some(m) => {
            let v = eval(&m.derivs);
            let value = if v.is_zero() { None } else { Some(v) };
            (m.derivs, value)
        }
        None => (Vec::new(), None),
    }
}

/// Checks associativity, `C₁(f,g) − C₁(g,f) = i{f,g}`, the Hermitian
/// condition (if claimed) and unitality, as exact cochain identities through `λ^order`.
pub fn validate_star(spec: &StarProductSpec, order: u32, basis_degree: u32) -> ValidationReport {
    let mut report =
        ValidationReport { order, basis_degree, associativity: None, poisson: None, hermitian: None, unitality: None };
    for r in 1..=order as usize {
        let d = associativity_defect(spec, r);
        if !d.is_zero() {
            let (witness, value) = find_witness(&d, basis_degree);
            report.associativity = Some(Violation {
                order: r as u32,
                witness,
                value,
                detail: format!("associativity defect has {} terms", d.len()),
            });
            break;
        }
    }
    if order >= 1 {
        let c1 = spec.cochain(1);
        let anti = c1.sub(&c1.permute(&[1, 0]));
        let expected = spec.poisson_cochain().scale(&GaussianRational::i());
        let diff = anti.sub(&expected);
        if !diff.is_zero() {
            let (witness, value) = find_witness(&diff, basis_degree);
            report.poisson =
                Some(Violation {
                    order: 1, witness, value, detail: "C₁(f,g) − C₁(g,f) differs from i{f,g}".into()
                });
        } else if let Some((m, _)) =
            expected.terms().find(|(m, _)| m.order() != 2 || m.derivs.iter().any(|j| j.total() != 1))
        {
            report.poisson = Some(Violation {
                order: 1,
                witness: m.derivs.clone(),
                value: None,
                detail: "antisymmetric part of C₁ is not a biderivation".into(),
            });
        }
    }
    if spec.hermitian() {
        for r in 1..=order as usize {
            let c = spec.cochain(r);
            let diff = c.involution().sub(&c);
            if !diff.is_zero() {
                let (witness, value) = find_witness(&diff, basis_degree);
                report.hermitian = Some(Violation { order: r as u32, witness, value, detail: "C_r* ≠ C_r".into() });
                break;
            }
        }
    }
    for r in 1..=order as usize {
        let c = spec.cochain(r);
        let bad = c.terms().find(|(m, _)| m.derivs.iter().any(MultiIndex::is_zero)).map(|(m, _)| m.derivs.clone());
        if let Some(witness) = bad {
            report.unitality = Some(Violation {
                order: r as u32,
                witness,
                value: None,
                detail: "C_r has a term that does not differentiate every argument".into(),
            });
            break;
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::star::spec::make_constant_theta_star;
    use num_rational::BigRational;
    use num_traits::Zero;

    fn theta2() -> Vec<Vec<BigRational>> {
        let one = BigRational::from_integer(1.into());
        vec![vec![BigRational::zero(), one.clone()], vec![-one, BigRational::zero()]]
    }

    #[test]
    fn moyal_passes() {
        let spec = make_constant_theta_star(&theta2(), 4).unwrap();
        let r = validate_star(&spec, 4, 2);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn zero_spec_passes() {
        assert!(validate_star(&StarProductSpec::zero(3), 5, 2).passed());
    }

    #[test]
    fn perturbation_by_symmetric_cocycle_fails_at_third_order() {
        let spec = make_constant_theta_star(&theta2(), 4).unwrap();
        let e1 = MultiIndex::unit(2, 0);
        let extra = MultiDiffCochain::differential(
            2,
            MultiIndex::zeros(2),
            vec![e1.clone(), e1],
            GaussianRational::from_int(1),
        );
        let bad = spec.perturbed(2, &extra).unwrap();
        let r = validate_star(&bad, 4, 3);
        let v = r.associativity.expect("associativity must fail");
        assert_eq!(v.order, 3);
        assert!(v.value.is_some());
    }
}
