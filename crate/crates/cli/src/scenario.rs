//! Scenario files: everything needed to replay one pipeline run.

use std::fmt;
use std::path::Path;

use dqw_core::hochschild::SolverConfig;
use dqw_core::positivity::{Atom, StateFunctional};
use dqw_core::random::{self, RandomParams};
use dqw_core::scalar::rational_matrix;
use dqw_core::star::{make_constant_theta_star, make_polynomial_poisson_star, StarProductSpec};
use dqw_core::{GaussianRational, Matrix, MultiDiffCochain, MultiIndex, QPolynomial, QSeries, WElement, WMonomial};
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Validate,
    BuildTau,
    Deform,
    CheckPos,
}

impl Command {
    pub const ALL: [Command; 4] = [Command::Validate, Command::BuildTau, Command::Deform, Command::CheckPos];

    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::BuildTau => "build-tau",
            Command::Deform => "deform",
            Command::CheckPos => "check-pos",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn all_commands() -> Vec<Command> {
    Command::ALL.to_vec()
}

fn default_basis_degree() -> u32 {
    2
}

fn yes() -> bool {
    true
}

/// How the star product is obtained.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Generator {
    /// The undeformed product.
    Zero,
    /// The Moyal product of a constant antisymmetric matrix.
    ConstantTheta {
        #[serde(with = "rational_matrix")]
        theta: Vec<Vec<BigRational>>,
    },
    /// A polynomial Poisson tensor; higher orders are solved from associativity.
    PolynomialPoisson { poisson: Vec<Vec<QPolynomial>> },
    /// A fully explicit cochain list.
    Explicit { spec: StarProductSpec },
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationTerm {
    pub coeff_poly: QPolynomial,
    pub derivs: Vec<MultiIndex>,
}

/// Extra terms added to `C_r` after generation.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Perturbation {
    pub lambda_power: usize,
    pub terms: Vec<PerturbationTerm>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct StarProductSource {
    #[serde(flatten)]
    pub generator: Generator,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub perturbations: Vec<Perturbation>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TauKind {
    /// Stage-by-stage construction through the coboundary solver.
    #[default]
    Solver,
    /// `τ(f) = f(q − ½θp)`, available for constant `θ` only.
    ClosedForm,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TauSource {
    #[serde(default)]
    pub kind: TauKind,
    #[serde(default = "yes")]
    pub hermitian: bool,
}

impl Default for TauSource {
    fn default() -> Self {
        Self { kind: TauKind::Solver, hermitian: true }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionalSource {
    pub size: usize,
    pub atoms: Vec<Atom>,
}

/// One term `coeff · λ^lambda · q^q` of an explicit test function.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSource {
    #[serde(default)]
    pub lambda: u32,
    pub q: MultiIndex,
    pub coeff: GaussianRational,
}

/// A scalar test (a list of terms) or a matrix test (rows of term lists).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TestSource {
    Scalar(Vec<TermSource>),
    Matrix(Vec<Vec<Vec<TermSource>>>),
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RandomTests {
    pub seed: u64,
    pub count: usize,
    #[serde(flatten)]
    pub params: RandomParams,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct TestSet {
    #[serde(default)]
    pub explicit: Vec<TestSource>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random: Option<RandomTests>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub n: usize,
    /// Truncation order `K`.
    pub order: u32,
    pub star_product: StarProductSource,
    #[serde(default)]
    pub tau: TauSource,
    /// Defaults to the delta functional at the origin with `N = 1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functional: Option<FunctionalSource>,
    #[serde(default)]
    pub tests: TestSet,
    /// Monomial degree of the validation and realization test bases.
    #[serde(default = "default_basis_degree")]
    pub basis_degree: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverConfig>,
    #[serde(default = "all_commands")]
    pub commands: Vec<Command>,
}

/// Command-line values that replace scenario fields.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Overrides {
    pub max_order: Option<u32>,
    pub seed: Option<u64>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text)
            .map_err(|e| CliError::Parse { source_name: "scenario".into(), message: e.to_string() })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Parse { source_name: path.display().to_string(), message: e.to_string() })
    }

    pub fn with_overrides(mut self, o: Overrides) -> Self {
        if let Some(k) = o.max_order {
            self.order = k;
        }
        if let (Some(seed), Some(r)) = (o.seed, self.tests.random.as_mut()) {
            r.seed = seed;
        }
        self
    }

    /// Seed of the random test set, if any.
    pub fn seed(&self) -> Option<u64> {
        self.tests.random.as_ref().map(|r| r.seed)
    }

    pub fn solver_config(&self) -> SolverConfig {
        self.solver.clone().unwrap_or_default().with_env_cap()
    }

    /// Generates the star product at order `K`, with perturbations applied.
    pub fn star_product(&self) -> Result<StarProductSpec, CliError> {
        let k = self.order;
        let spec = match &self.star_product.generator {
            Generator::Zero => StarProductSpec::zero(self.n),
            Generator::ConstantTheta { theta } => make_constant_theta_star(theta, k).map_err(config)?,
            Generator::PolynomialPoisson { poisson } => {
                make_polynomial_poisson_star(poisson.clone(), k, &self.solver_config()).map_err(config)?.0
            }
            Generator::Explicit { spec } => spec.clone(),
        };
        if spec.dim() != self.n {
            return Err(CliError::Config(format!(
                "star product has dimension {}, scenario says {}",
                spec.dim(),
                self.n
            )));
        }
        let mut spec = spec;
        for p in &self.star_product.perturbations {
            if p.lambda_power == 0 {
                return Err(CliError::Config("perturbations start at λ-power 1".into()));
            }
            let mut extra = MultiDiffCochain::zero(self.n, 2);
            for t in &p.terms {
                if t.coeff_poly.dim() != self.n || t.derivs.len() != 2 || t.derivs.iter().any(|d| d.len() != self.n) {
                    return Err(CliError::Config(format!(
                        "perturbation term at λ^{} has the wrong shape",
                        p.lambda_power
                    )));
                }
                extra = extra.add(&MultiDiffCochain::with_coefficient(&t.coeff_poly, t.derivs.clone()));
            }
            spec = spec.perturbed(p.lambda_power, &extra).map_err(config)?;
        }
        Ok(spec)
    }

    pub fn theta(&self) -> Option<&Vec<Vec<BigRational>>> {
        match &self.star_product.generator {
            Generator::ConstantTheta { theta } => Some(theta),
            _ => None,
        }
    }

    pub fn functional(&self) -> Result<StateFunctional, CliError> {
        match &self.functional {
            None => Ok(StateFunctional::delta(vec![BigRational::zero(); self.n])),
            Some(f) => StateFunctional::new(self.n, f.size, f.atoms.clone()).map_err(config),
        }
    }

    pub fn matrix_size(&self) -> usize {
        self.functional.as_ref().map_or(1, |f| f.size)
    }

    /// Explicit tests followed by the seeded random ones, all at order `K`.
    pub fn tests(&self) -> Result<Vec<Matrix<QSeries>>, CliError> {
        let size = self.matrix_size();
        let mut out = Vec::new();
        for (i, t) in self.tests.explicit.iter().enumerate() {
            let m = match t {
                TestSource::Scalar(terms) => Matrix::scalar(self.series(terms, i)?),
                TestSource::Matrix(rows) => {
                    let rows = rows
                        .iter()
                        .map(|row| row.iter().map(|terms| self.series(terms, i)).collect::<Result<Vec<_>, _>>())
                        .collect::<Result<Vec<_>, _>>()?;
                    Matrix::from_rows(rows).map_err(config)?
                }
            };
            if m.size() != size {
                return Err(CliError::Config(format!(
                    "test {i} has size {}, the functional has size {size}",
                    m.size()
                )));
            }
            out.push(m);
        }
        if let Some(r) = &self.tests.random {
            let mut rng = random::rng(r.seed);
            out.extend((0..r.count).map(|_| random::qseries_matrix(&mut rng, self.n, size, self.order, &r.params)));
        }
        Ok(out)
    }

    fn series(&self, terms: &[TermSource], test: usize) -> Result<QSeries, CliError> {
        let mut w = WElement::zero(self.n, self.order);
        for t in terms {
            if t.q.len() != self.n {
                return Err(CliError::Config(format!("test {test}: exponent {:?} has the wrong length", t.q)));
            }
            let term = WElement::monomial(
                self.n,
                self.order,
                WMonomial::new(t.lambda, MultiIndex::zeros(self.n), t.q.clone()),
                t.coeff.clone(),
            );
            w = &w + &term;
        }
        QSeries::from_welement(w).map_err(config)
    }
}

fn config(e: impl fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}
