//! Constructive solution of `δψ = φ` by graded exact linear algebra.
//!
//! The coboundary preserves the `deg`-degree and the torus weight
//! `L − I − ΣJ` of a normal-form monomial (in classical mode also the
//! `λ`-power and the `p`-exponent), so the system splits into independent
//! blocks. Each block is solved over a bounded ansatz whose bounds escalate
//! on failure. Every solution is checked by recomputing `δψ`.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::coboundary::{coboundary, CoboundaryMode};
use super::cochain::{CochainMonomial, MultiDiffCochain};
use super::linsolve::{solve_sparse, SparseVec};
use crate::multi_index::MultiIndex;
use crate::scalar::GaussianRational;

/// Default cap on `rows × columns` of a single block system.
pub const DEFAULT_MAX_CELLS: u64 = 40_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Initial slack added to the derivative-order and q-degree bounds.
    pub slack: u32,
    /// Largest slack tried before giving up; the slack doubles on each retry.
    pub max_slack: u32,
    /// Peel off the classical part first and recurse on `φ − δψ₀ = λη`.
    pub strip_lambda: bool,
    pub max_cells: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { slack: 2, max_slack: 16, strip_lambda: true, max_cells: DEFAULT_MAX_CELLS }
    }
}

impl SolverConfig {
    /// Defaults, with `max_cells` taken from `DQW_MAX_SOLVER_CELLS` when set.
    pub fn from_env() -> Self {
        Self::default().with_env_cap()
    }

    /// Replaces `max_cells` by `DQW_MAX_SOLVER_CELLS` when that is set.
    pub fn with_env_cap(mut self) -> Self {
        if let Some(v) = std::env::var("DQW_MAX_SOLVER_CELLS").ok().and_then(|s| s.trim().parse().ok()) {
            self.max_cells = v;
        }
        self
    }
}

/// Shape restrictions on the unknown cochain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ansatz {
    pub mode: CoboundaryMode,
    /// Every argument must be differentiated at least once (unital cochains).
    pub nonzero_derivs: bool,
}

impl Ansatz {
    pub fn deformed() -> Self {
        Self { mode: CoboundaryMode::Deformed, nonzero_derivs: false }
    }

    pub fn classical() -> Self {
        Self { mode: CoboundaryMode::Classical, nonzero_derivs: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockReport {
    pub deg: u32,
    pub lambda: Option<u32>,
    pub p: Option<MultiIndex>,
    pub weight: Vec<i32>,
    pub unknowns: usize,
    pub equations: usize,
    pub order_bound: u32,
    pub q_degree_bound: u32,
    /// `(order bound, q-degree bound)` of every attempt, in order.
    pub attempts: Vec<(u32, u32)>,
    pub support: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveReport {
    pub mode: CoboundaryMode,
    pub strategy: String,
    pub blocks: Vec<BlockReport>,
    /// Number of `λ` factors peeled off by the stripping preconditioner.
    pub lambda_levels: u32,
    pub verified: bool,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("input is not deg-homogeneous (degrees {degrees:?})")]
    NotHomogeneous { degrees: Vec<u32> },
    #[error("input is not a cocycle; δφ has the term {witness}")]
    NotCocycle { witness: String },
    #[error("classical limit has a nonzero antisymmetric part, e.g. {witness}")]
    AntisymmetricClassicalPart { witness: String },
    #[error("no solution within bounds {bounds:?} for block deg {deg}, weight {weight:?}")]
    EscalationExhausted { deg: u32, weight: Vec<i32>, bounds: Vec<(u32, u32)> },
    #[error("block system {rows}×{cols} exceeds the cap of {cap} cells")]
    SystemTooLarge { rows: usize, cols: usize, cap: u64 },
    #[error("certificate check failed: δψ − φ has the term {witness}")]
    CertificateFailed { witness: String },
}

pub(crate) fn describe_term(m: &CochainMonomial, c: &GaussianRational) -> String {
    format!("({c}) λ^{} p{:?} q{:?} ∂{:?}", m.lambda, m.p, m.q, m.derivs)
}

pub(crate) fn first_term_description(c: &MultiDiffCochain) -> String {
    c.first_term().map(|(m, v)| describe_term(m, v)).unwrap_or_else(|| "0".into())
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct BlockKey {
    deg: u32,
    lambda: Option<u32>,
    p: Option<MultiIndex>,
    weight: Vec<i32>,
}

fn weight_of(m: &CochainMonomial) -> Vec<i32> {
    (0..m.q.len())
        .map(|k| m.q.get(k) as i32 - m.p.get(k) as i32 - m.derivs.iter().map(|j| j.get(k) as i32).sum::<i32>())
        .collect()
}

fn key_of(m: &CochainMonomial, mode: CoboundaryMode) -> BlockKey {
    match mode {
        CoboundaryMode::Deformed => BlockKey { deg: m.deg(), lambda: None, p: None, weight: weight_of(m) },
        CoboundaryMode::Classical => {
            BlockKey { deg: m.deg(), lambda: Some(m.lambda), p: Some(m.p.clone()), weight: weight_of(m) }
        }
    }
}

fn derivative_tuples(n: usize, arity: usize, budget: u32, nonzero: bool) -> Vec<Vec<MultiIndex>> {
    fn rec(
        n: usize,
        slots: usize,
        budget: u32,
        nonzero: bool,
        prefix: &mut Vec<MultiIndex>,
        out: &mut Vec<Vec<MultiIndex>>,
    ) {
        if prefix.len() == slots {
            out.push(prefix.clone());
            return;
        }
        let lo = u32::from(nonzero);
        for t in lo..=budget {
            for j in MultiIndex::of_total(n, t) {
                prefix.push(j);
                rec(n, slots, budget - t, nonzero, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(n, arity, budget, nonzero, &mut Vec::with_capacity(arity), &mut out);
    out
}

fn unknowns(
    key: &BlockKey,
    n: usize,
    arity: usize,
    ansatz: Ansatz,
    order_bound: u32,
    q_bound: u32,
) -> Vec<CochainMonomial> {
    let heads: Vec<(u32, MultiIndex)> = match (&key.lambda, &key.p) {
        (Some(a), Some(p)) => vec![(*a, p.clone())],
        _ => {
            (0..=key.deg).flat_map(|a| MultiIndex::of_total(n, key.deg - a).into_iter().map(move |i| (a, i))).collect()
        }
    };
    let tuples = derivative_tuples(n, arity, order_bound, ansatz.nonzero_derivs);
    let mut out = Vec::new();
    for (a, i) in &heads {
        'tuple: for js in &tuples {
            let mut l = MultiIndex::zeros(n);
            for k in 0..n {
                let v = key.weight[k] + i.get(k) as i32 + js.iter().map(|j| j.get(k) as i32).sum::<i32>();
                if v < 0 {
                    continue 'tuple;
                }
                l.set(k, v as u16);
            }
            if l.total() > q_bound {
                continue;
            }
            out.push(CochainMonomial { lambda: *a, p: i.clone(), q: l, derivs: js.clone() });
        }
    }
    out.sort_by(|x, y| (x.order(), x.q.total(), x).cmp(&(y.order(), y.q.total(), y)));
    out
}

fn solve_block(
    key: &BlockKey,
    target: &[(CochainMonomial, GaussianRational)],
    n: usize,
    arity: usize,
    ansatz: Ansatz,
    config: &SolverConfig,
) -> Result<(Vec<(CochainMonomial, GaussianRational)>, BlockReport), SolveError> {
    let base_order = target.iter().map(|(m, _)| m.order()).max().unwrap_or(0);
    let base_q = target.iter().map(|(m, _)| m.q.total()).max().unwrap_or(0);
    let mut attempts = Vec::new();
    let mut slack = config.slack;
    loop {
        let order_bound = base_order + slack;
        let q_bound = base_q + slack;
        attempts.push((order_bound, q_bound));
        let cols = unknowns(key, n, arity, ansatz, order_bound, q_bound);
        let images: Vec<MultiDiffCochain> = cols
            .par_iter()
            .map(|u| {
                let single = MultiDiffCochain::from_terms(n, arity, [(u.clone(), GaussianRational::from_int(1))])
                    .expect("ansatz monomials have consistent shape");
                coboundary(&single, ansatz.mode)
            })
            .collect();
        let mut rows: HashMap<CochainMonomial, usize> = HashMap::new();
        let mut row_of = |m: &CochainMonomial| {
            let next = rows.len();
            *rows.entry(m.clone()).or_insert(next)
        };
        let mut rhs = SparseVec::new();
        for (m, c) in target {
            rhs.insert(row_of(m), c.clone());
        }
        let columns: Vec<SparseVec> =
            images.iter().map(|img| img.terms().map(|(m, c)| (row_of(m), c.clone())).collect()).collect();
        let cells = rows.len() as u64 * columns.len() as u64;
        if cells > config.max_cells {
            return Err(SolveError::SystemTooLarge { rows: rows.len(), cols: columns.len(), cap: config.max_cells });
        }
        if let Some(sol) = solve_sparse(&columns, &rhs) {
            let report = BlockReport {
                deg: key.deg,
                lambda: key.lambda,
                p: key.p.clone(),
                weight: key.weight.clone(),
                unknowns: columns.len(),
                equations: rows.len(),
                order_bound,
                q_degree_bound: q_bound,
                attempts,
                support: sol.x.len(),
            };
            let terms = sol.x.into_iter().map(|(j, c)| (cols[j].clone(), c)).collect();
            return Ok((terms, report));
        }
        if slack >= config.max_slack {
            return Err(SolveError::EscalationExhausted { deg: key.deg, weight: key.weight.clone(), bounds: attempts });
        }
        slack = (slack * 2).max(1).min(config.max_slack);
    }
}

fn solve_direct(
    target: &MultiDiffCochain,
    arity: usize,
    ansatz: Ansatz,
    config: &SolverConfig,
) -> Result<(MultiDiffCochain, Vec<BlockReport>), SolveError> {
    let n = target.dim();
    let mut blocks: BTreeMap<BlockKey, Vec<(CochainMonomial, GaussianRational)>> = BTreeMap::new();
    for (m, c) in target.terms() {
        blocks.entry(key_of(m, ansatz.mode)).or_default().push((m.clone(), c.clone()));
    }
    let mut psi = MultiDiffCochain::zero(n, arity);
    let mut reports = Vec::new();
    for (key, terms) in &blocks {
        let (sol, report) = solve_block(key, terms, n, arity, ansatz, config)?;
        for (m, c) in sol {
            psi.push(m, c);
        }
        reports.push(report);
    }
    Ok((psi, reports))
}

/// Peels off the classical part: solves `δ₀ψ₀ = cl φ`, then recurses on
/// `(φ − δψ₀)/λ`. When a deeper level has no classical solution (an
/// antisymmetric classical part appears), the current level is solved directly.
fn solve_stripped(
    target: &MultiDiffCochain,
    arity: usize,
    ansatz: Ansatz,
    config: &SolverConfig,
) -> Result<(MultiDiffCochain, Vec<BlockReport>, u32), SolveError> {
    let n = target.dim();
    if target.is_zero() {
        return Ok((MultiDiffCochain::zero(n, arity), Vec::new(), 0));
    }
    let classical = Ansatz { mode: CoboundaryMode::Classical, ..ansatz };
    // Alt vanishes on classical coboundaries, so such a level cannot be peeled.
    let anti = target.classical_limit().alt();
    if !anti.is_zero() {
        return Err(SolveError::AntisymmetricClassicalPart { witness: first_term_description(&anti) });
    }
    let (psi0, mut reports) = solve_direct(&target.classical_limit(), arity, classical, config)?;
    let rest = target.sub(&coboundary(&psi0, CoboundaryMode::Deformed));
    let eta = rest
        .divide_lambda()
        .ok_or_else(|| SolveError::CertificateFailed { witness: first_term_description(&rest.classical_limit()) })?;
    if eta.is_zero() {
        return Ok((psi0, reports, 0));
    }
    match solve_stripped(&eta, arity, ansatz, config) {
        Ok((inner, r, levels)) => {
            reports.extend(r);
            Ok((psi0.add(&inner.shift_lambda(1)), reports, levels + 1))
        }
        Err(SolveError::SystemTooLarge { rows, cols, cap }) => Err(SolveError::SystemTooLarge { rows, cols, cap }),
        Err(_) => {
            let (psi, r) = solve_direct(target, arity, ansatz, config)?;
            Ok((psi, r, 0))
        }
    }
}

/// Solves `δψ = target` for an arity-`(target.arity − 1)` cochain `ψ` within `ansatz`.
///
/// The returned `ψ` is verified: `δψ = target` holds exactly.
pub fn solve_cochain_equation(
    target: &MultiDiffCochain,
    ansatz: Ansatz,
    config: &SolverConfig,
) -> Result<(MultiDiffCochain, SolveReport), SolveError> {
    if target.arity() == 0 {
        return Err(SolveError::ArityMismatch { expected: 1, found: 0 });
    }
    let arity = target.arity() - 1;
    let stripped = if config.strip_lambda && ansatz.mode == CoboundaryMode::Deformed {
        match solve_stripped(target, arity, ansatz, config) {
            Ok(found) => Some(found),
            Err(e @ SolveError::SystemTooLarge { .. }) => return Err(e),
            Err(_) => None,
        }
    } else {
        None
    };
    let (psi, blocks, levels, strategy) = match stripped {
        Some((psi, blocks, levels)) => (psi, blocks, levels, "lambda_stripping"),
        None => {
            let (psi, blocks) = solve_direct(target, arity, ansatz, config)?;
            (psi, blocks, 0, "direct")
        }
    };
    let defect = coboundary(&psi, ansatz.mode).sub(target);
    if !defect.is_zero() {
        return Err(SolveError::CertificateFailed { witness: first_term_description(&defect) });
    }
    let report =
        SolveReport { mode: ansatz.mode, strategy: strategy.into(), blocks, lambda_levels: levels, verified: true };
    Ok((psi, report))
}

/// Finds `ψ` of arity 1 with `δψ = φ` for a deg-homogeneous arity-2 cocycle
/// whose classical limit has vanishing antisymmetric part.
pub fn solve_coboundary(
    phi: &MultiDiffCochain,
    config: &SolverConfig,
) -> Result<(MultiDiffCochain, SolveReport), SolveError> {
    if phi.arity() != 2 {
        return Err(SolveError::ArityMismatch { expected: 2, found: phi.arity() });
    }
    let degrees = phi.degrees();
    if degrees.len() > 1 {
        return Err(SolveError::NotHomogeneous { degrees });
    }
    let d = coboundary(phi, CoboundaryMode::Deformed);
    if !d.is_zero() {
        return Err(SolveError::NotCocycle { witness: first_term_description(&d) });
    }
    let anti = phi.classical_limit().alt();
    if !anti.is_zero() {
        return Err(SolveError::AntisymmetricClassicalPart { witness: first_term_description(&anti) });
    }
    solve_cochain_equation(phi, Ansatz::deformed(), config)
}
