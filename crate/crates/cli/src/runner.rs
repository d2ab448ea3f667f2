//! Executes the commands of a scenario in order and assembles the report.

use std::collections::BTreeMap;
use std::time::Instant;

use dqw_core::hochschild::{MultiDiffCochain, SolveError};
use dqw_core::positivity::{check_positivity, deform_functional, DeformedFunctional, Functional, PositivityVerdict};
use dqw_core::positivity::{Outcome, StateFunctional};
use dqw_core::star::{validate_star, StarProductSpec};
use dqw_core::tau::{
    build_tau, check_poisson_realization, constant_theta_tau, homomorphism_error, BuildReport, TauError, TauMap,
};
use dqw_core::{GaussianRational, LambdaSeries, Matrix, QSeries, SeriesSign};
use serde_json::{json, Value};

use crate::report::{digest, CommandReport, RunReport, Status};
use crate::scenario::{Command, Scenario, TauKind};
use crate::CliError;

/// Runs `commands`, or the scenario's own list when `None`.
///
/// Execution stops after a command that fails, and after a build-tau or
/// deform that is inconclusive; the remaining commands are listed as skipped.
pub fn run_scenario(scenario: &Scenario, commands: Option<&[Command]>) -> Result<RunReport, CliError> {
    let commands = commands.unwrap_or(&scenario.commands).to_vec();
    let mut timings = BTreeMap::new();
    let start = Instant::now();
    let mut pipeline = Pipeline::prepare(scenario, !commands.is_empty())?;
    timings.insert("prepare".to_string(), elapsed_ms(start));

    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    let mut stopped = false;
    for &c in &commands {
        if stopped {
            skipped.push(c);
            continue;
        }
        let start = Instant::now();
        let report = pipeline.execute(c);
        timings.insert(c.name().to_string(), elapsed_ms(start));
        stopped = match report.status {
            Status::Pass => false,
            Status::Fail => true,
            Status::Inconclusive => matches!(c, Command::BuildTau | Command::Deform),
        };
        reports.push(report);
    }
    let (status, exit_code) = RunReport::aggregate(&reports);
    Ok(RunReport {
        scenario: scenario.name.clone(),
        inputs_digest: digest(scenario),
        order: scenario.order,
        seed: scenario.seed(),
        commands: reports,
        skipped,
        status,
        exit_code,
        timings,
    })
}

fn elapsed_ms(start: Instant) -> f64 {
    (start.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

/// Why `τ` is unavailable.
#[derive(Clone)]
struct TauFailure {
    status: Status,
    message: String,
}

struct Pipeline<'a> {
    scenario: &'a Scenario,
    spec: StarProductSpec,
    base: StateFunctional,
    tests: Vec<Matrix<QSeries>>,
    tau: Option<Result<(TauMap, Option<BuildReport>), TauFailure>>,
    deformed: Option<Result<DeformedFunctional, TauFailure>>,
}

impl<'a> Pipeline<'a> {
    /// Parses every input up front so configuration errors surface before any
    /// command runs.
    fn prepare(scenario: &'a Scenario, generate: bool) -> Result<Self, CliError> {
        let base = scenario.functional()?;
        let tests = scenario.tests()?;
        if scenario.tau.kind == TauKind::ClosedForm && scenario.theta().is_none() {
            return Err(CliError::Config("a closed-form τ needs a constant_theta star product".into()));
        }
        let spec = if generate { scenario.star_product()? } else { StarProductSpec::zero(scenario.n) };
        Ok(Self { scenario, spec, base, tests, tau: None, deformed: None })
    }

    fn execute(&mut self, c: Command) -> CommandReport {
        match c {
            Command::Validate => self.validate(),
            Command::BuildTau => self.build_tau(),
            Command::Deform => self.deform(),
            Command::CheckPos => self.check_pos(),
        }
    }

    fn validate(&self) -> CommandReport {
        let s = self.scenario;
        let inputs = digest(&json!({ "spec": self.spec, "order": s.order, "basis_degree": s.basis_degree }));
        let report = validate_star(&self.spec, s.order, s.basis_degree);
        let check = |v: &Option<dqw_core::star::Violation>| v.as_ref().map_or(json!("pass"), |v| json!(v));
        let outcome = json!({
            "order": report.order,
            "basis_degree": report.basis_degree,
            "associativity": check(&report.associativity),
            "poisson": check(&report.poisson),
            "hermitian": check(&report.hermitian),
            "unitality": check(&report.unitality),
        });
        let witness = report.first_violation().map(|(name, v)| {
            let value = v.value.as_ref().map_or_else(|| v.detail.clone(), |p| json!(p).to_string());
            format!("{name} fails at λ^{} on q-exponents {}: {value}", v.order, json!(v.witness))
        });
        let status = if report.passed() { Status::Pass } else { Status::Fail };
        CommandReport { command: Command::Validate, status, inputs_digest: inputs, outcome, witness }
    }

    fn tau_inputs(&self) -> Value {
        let s = self.scenario;
        json!({ "spec": self.spec, "order": s.order, "tau": s.tau, "solver": s.solver_config() })
    }

    fn ensure_tau(&mut self) -> Result<(TauMap, Option<BuildReport>), TauFailure> {
        if self.tau.is_none() {
            let s = self.scenario;
            let built = match s.tau.kind {
                TauKind::ClosedForm => {
                    let theta = s.theta().expect("checked in prepare");
                    constant_theta_tau(theta, s.order)
                        .map(|t| (t, None))
                        .map_err(|e| TauFailure { status: Status::Fail, message: e.to_string() })
                }
                TauKind::Solver => build_tau(&self.spec, s.order, s.tau.hermitian, &s.solver_config())
                    .map(|(t, r)| (t, Some(r)))
                    .map_err(tau_failure),
            };
            self.tau = Some(built);
        }
        self.tau.clone().expect("just set")
    }

    fn build_tau(&mut self) -> CommandReport {
        let inputs = digest(&self.tau_inputs());
        let (tau, build) = match self.ensure_tau() {
            Ok(t) => t,
            Err(f) => return failed(Command::BuildTau, inputs, f),
        };
        let s = self.scenario;
        let homomorphism = homomorphism_error(&tau, &self.spec);
        let homomorphism_ok = matches!(&homomorphism, Ok(e) if e.is_zero());
        let hermitian = tau.is_hermitian();
        let section = tau.section_at_order_zero();
        let realization = check_poisson_realization(&tau, &self.spec, s.basis_degree);
        let realization_ok = matches!(&realization, Ok(r) if r.passed());

        let stages: Vec<Value> = build.as_ref().map_or_else(Vec::new, |b| {
            b.stages
                .iter()
                .map(|st| {
                    json!({
                        "k": st.k,
                        "r_k_terms": st.r_k.len(),
                        "r_k_cocycle": st.r_k_cocycle,
                        "classical_part_symmetric": st.classical_part_symmetric,
                        "strategy": st.solver.as_ref().map(|r| r.strategy.clone()),
                        "lambda_levels": st.solver.as_ref().map(|r| r.lambda_levels),
                        "blocks": st.solver.as_ref().map_or(0, |r| r.blocks.len()),
                        "hermitian_adjustment_terms": st.hermitian_adjustment.as_ref().map(MultiDiffCochain::len),
                        "epsilon_vanishes": st.epsilon_vanishes,
                    })
                })
                .collect()
        });
        let outcome = json!({
            "kind": s.tau.kind,
            "hermitian_requested": s.tau.hermitian,
            "stage_sign": build.as_ref().and_then(|b| b.stage_sign),
            "stages": stages,
            "component_terms": tau.components().iter().map(MultiDiffCochain::len).collect::<Vec<_>>(),
            "tau_digest": digest(&tau),
            "checks": {
                "homomorphism": match &homomorphism {
                    Ok(e) if e.is_zero() => json!("pass"),
                    Ok(e) => json!({ "error_terms": e.len() }),
                    Err(e) => json!({ "error": e.to_string() }),
                },
                "hermitian": hermitian,
                "section": section,
                "realization": match &realization {
                    Ok(r) => json!({
                        "passed": r.passed(),
                        "pairs_checked": r.pairs_checked,
                        "violations": r.violations,
                    }),
                    Err(e) => json!({ "error": e.to_string() }),
                },
            },
        });
        let mut problems = Vec::new();
        if !homomorphism_ok {
            problems.push("τ(f⋆g) ≠ τ(f)⋆τ(g)".to_string());
        }
        if s.tau.hermitian && !hermitian {
            problems.push("τ is not Hermitian".to_string());
        }
        if !section {
            problems.push("τ₀ is not the inclusion".to_string());
        }
        if !realization_ok {
            problems.push(match &realization {
                Ok(r) => r.first_violation.as_ref().map_or_else(
                    || "realization check failed".to_string(),
                    |v| {
                        format!(
                            "realization fails on q-exponents {} and {} at p-degree {}",
                            json!(v.f),
                            json!(v.g),
                            v.p_degree
                        )
                    },
                ),
                Err(e) => e.to_string(),
            });
        }
        let status = if problems.is_empty() { Status::Pass } else { Status::Fail };
        let witness = (!problems.is_empty()).then(|| problems.join("; "));
        CommandReport { command: Command::BuildTau, status, inputs_digest: inputs, outcome, witness }
    }

    fn ensure_deformed(&mut self) -> Result<DeformedFunctional, TauFailure> {
        if self.deformed.is_none() {
            let d = self.ensure_tau().and_then(|(tau, _)| {
                deform_functional(&self.base, &tau)
                    .map_err(|e| TauFailure { status: Status::Fail, message: e.to_string() })
            });
            self.deformed = Some(d);
        }
        self.deformed.clone().expect("just set")
    }

    fn deform(&mut self) -> CommandReport {
        let inputs_value = json!({ "tau": self.tau_inputs(), "functional": self.base });
        let inputs = digest(&inputs_value);
        let omega = match self.ensure_deformed() {
            Ok(d) => d,
            Err(f) => return failed(Command::Deform, inputs, f),
        };
        let k = self.scenario.order;
        let size = self.base.size();
        let unit = Matrix::diagonal(size, QSeries::one(self.scenario.n, k), QSeries::zero(self.scenario.n, k));
        let unit_value = omega.apply(&unit);
        let mass = self.base.mass();
        let expected = LambdaSeries::new(vec![GaussianRational::from(mass.clone())], omega.valid_order());
        let unit_ok = matches!(&unit_value, Ok(v) if *v == expected);

        let mut mismatches = Vec::new();
        let mut errors = Vec::new();
        for (i, f) in self.tests.iter().enumerate() {
            let classical = f.map(|x| QSeries::from_qpoly(&x.coefficient(0), k));
            match (omega.apply(f), self.base.apply(&classical)) {
                (Ok(a), Ok(b)) if a.coeff(0) == b.coeff(0) => {}
                (Ok(_), Ok(_)) => mismatches.push(i),
                (Err(e), _) => errors.push(format!("test {i}: {e}")),
                (_, Err(e)) => errors.push(format!("test {i}: {e}")),
            }
        }
        let outcome = json!({
            "sigma": omega.sign.sigma,
            "direction": omega.direction,
            "sign_basis_degree": omega.sign.basis_degree,
            "sign_pairs_checked": omega.sign.pairs_checked,
            "valid_order": omega.valid_order(),
            "unit": {
                "value": unit_value.as_ref().map_or_else(|e| json!({ "error": e.to_string() }), |v| json!(v)),
                "mass": json!(expected.coeff(0)),
                "matches_mass": unit_ok,
            },
            "classical_limit": {
                "tests_checked": self.tests.len(),
                "mismatches": mismatches,
                "errors": errors,
            },
        });
        let ok = unit_ok && mismatches.is_empty() && errors.is_empty();
        let witness = (!ok).then(|| {
            if !unit_ok {
                "Ω(1) differs from the mass of the base functional".to_string()
            } else if let Some(i) = mismatches.first() {
                format!("test {i}: λ⁰ of Ω(f) differs from Ω₀(f₀)")
            } else {
                errors.join("; ")
            }
        });
        let status = if ok { Status::Pass } else { Status::Fail };
        CommandReport { command: Command::Deform, status, inputs_digest: inputs, outcome, witness }
    }

    fn check_pos(&mut self) -> CommandReport {
        let inputs = digest(&json!({
            "tau": self.tau_inputs(),
            "functional": self.base,
            "tests": self.tests,
        }));
        let undeformed = check_positivity(&Functional::Classical(self.base.clone()), &self.spec, &self.tests);
        let omega = match self.ensure_deformed() {
            Ok(d) => d,
            Err(f) => return failed(Command::CheckPos, inputs, f),
        };
        let deformed = check_positivity(&Functional::Deformed(Box::new(omega)), &self.spec, &self.tests);
        let (status, witness) = match &deformed {
            Ok(v) => match v.outcome {
                Outcome::Positive => (Status::Pass, None),
                Outcome::Inconclusive => (Status::Inconclusive, None),
                Outcome::Negative => (Status::Fail, negative_witness(v)),
            },
            Err(e) => (Status::Fail, Some(e.to_string())),
        };
        let outcome = json!({
            "tests": self.tests.len(),
            "undeformed": verdict_value(&undeformed),
            "deformed": verdict_value(&deformed),
        });
        CommandReport { command: Command::CheckPos, status, inputs_digest: inputs, outcome, witness }
    }
}

fn tau_failure(e: TauError) -> TauFailure {
    let status = match &e {
        TauError::Solve {
            source: SolveError::EscalationExhausted { .. } | SolveError::SystemTooLarge { .. }, ..
        } => Status::Inconclusive,
        _ => Status::Fail,
    };
    TauFailure { status, message: e.to_string() }
}

fn failed(command: Command, inputs_digest: String, f: TauFailure) -> CommandReport {
    CommandReport {
        command,
        status: f.status,
        inputs_digest,
        outcome: json!({ "error": f.message }),
        witness: Some(f.message),
    }
}

fn negative_witness(v: &PositivityVerdict) -> Option<String> {
    v.first_negative().map(|t| format!("test {}: ω(f*⋆f) = {}", t.index, json!(t.value.coeff_strings())))
}

fn verdict_value<E: std::fmt::Display>(v: &Result<PositivityVerdict, E>) -> Value {
    match v {
        Err(e) => json!({ "error": e.to_string() }),
        Ok(v) => json!({
            "outcome": v.outcome,
            "order": v.order,
            "sigma": v.sigma,
            "direction": v.direction,
            "values": v.tests.iter().map(|t| t.value.coeff_strings()).collect::<Vec<_>>(),
            "signs": v.tests.iter().map(|t| t.sign).collect::<Vec<SeriesSign>>(),
            "negative": v.negative,
            "inconclusive": v.inconclusive,
            "witness": negative_witness(v),
        }),
    }
}
