use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::deform::Functional;
use super::PositivityError;
use crate::matrix::Matrix;
use crate::qseries::QSeries;
use crate::series::{RealLambdaSeries, SeriesSign};
use crate::star::{Direction, StarProductSpec};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Positive,
    Negative,
    /// No test was negative and none was decidably positive.
    Inconclusive,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TestOutcome {
    pub index: usize,
    /// `ω(f* ⋆ f)`.
    pub value: RealLambdaSeries,
    pub sign: SeriesSign,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PositivityVerdict {
    pub functional: String,
    pub order: u32,
    pub sigma: Option<i32>,
    pub direction: Option<Direction>,
    pub tests: Vec<TestOutcome>,
    pub negative: Vec<usize>,
    pub inconclusive: Vec<usize>,
    pub outcome: Outcome,
}

impl PositivityVerdict {
    pub fn first_negative(&self) -> Option<&TestOutcome> {
        self.negative.first().map(|&i| &self.tests[i])
    }
}

/// Evaluates `ω(f* ⋆ f)` on every test element and classifies it in `ℝ[[λ]]`.
pub fn check_positivity(
    omega: &Functional,
    spec: &StarProductSpec,
    tests: &[Matrix<QSeries>],
) -> Result<PositivityVerdict, PositivityError> {
    let results: Vec<TestOutcome> = tests
        .par_iter()
        .enumerate()
        .map(|(index, f)| -> Result<TestOutcome, PositivityError> {
            let square = spec.star_apply_matrix(&f.adjoint(), f)?;
            let value = omega.apply(&square)?;
            let value = value.to_real().map_err(|coefficient| PositivityError::NonReal { test: index, coefficient })?;
            let sign = value.sign();
            Ok(TestOutcome { index, value, sign })
        })
        .collect::<Result<_, _>>()?;
    let input_order = tests.iter().flat_map(|t| t.entries().iter().map(QSeries::order)).min().unwrap_or(0);
    let negative: Vec<usize> = results.iter().filter(|t| t.sign == SeriesSign::Negative).map(|t| t.index).collect();
    let inconclusive: Vec<usize> =
        results.iter().filter(|t| t.sign == SeriesSign::ZeroUpToK).map(|t| t.index).collect();
    let outcome = if !negative.is_empty() {
        Outcome::Negative
    } else if inconclusive.len() == results.len() {
        Outcome::Inconclusive
    } else {
        Outcome::Positive
    };
    let (sigma, direction) = match omega.fock_sign() {
        Some((s, d)) => (Some(s), Some(d)),
        None => (None, None),
    };
    Ok(PositivityVerdict {
        functional: omega.kind().into(),
        order: omega.valid_order(input_order),
        sigma,
        direction,
        tests: results,
        negative,
        inconclusive,
        outcome,
    })
}
