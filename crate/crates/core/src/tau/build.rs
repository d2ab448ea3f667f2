use super::{BuildReport, StageReport, TauError, TauMap};
use crate::hochschild::first_term_description;
use crate::hochschild::{coboundary, solve_coboundary, CoboundaryMode, MultiDiffCochain, SolveError, SolverConfig};
use crate::scalar::GaussianRational;
use crate::star::StarProductSpec;

fn rk_error(k: u32, reason: &str, witness: &MultiDiffCochain) -> TauError {
    TauError::InvalidRk { k, reason: reason.into(), witness: first_term_description(witness) }
}

/// `Σ_i τ_i(f ⋆ g)` through `deg ≤ max_deg`.
fn compose_with_star(
    spec: &StarProductSpec,
    taus: &[MultiDiffCochain],
    max_deg: u32,
) -> Result<MultiDiffCochain, TauError> {
    let mut out = MultiDiffCochain::zero(spec.dim(), 2);
    for (i, t) in taus.iter().enumerate() {
        let i = i as u32;
        if i > max_deg || t.is_zero() {
            continue;
        }
        out = out.add(&t.insert(0, &spec.star_cochain(max_deg - i))?);
    }
    Ok(out.truncate(max_deg))
}

/// `ε(f, g) = τ(f ⋆ g) − τ(f) ⋆_Weyl τ(g)` for `τ = Σ taus`, through `deg ≤ max_deg`.
pub fn tau_error(
    spec: &StarProductSpec,
    taus: &[MultiDiffCochain],
    max_deg: u32,
) -> Result<MultiDiffCochain, TauError> {
    let left = compose_with_star(spec, taus, max_deg)?;
    let total = taus.iter().fold(MultiDiffCochain::zero(spec.dim(), 1), |acc, t| acc.add(t));
    let right = total.weyl_product(&total, Some(max_deg))?;
    Ok(left.sub(&right).truncate(max_deg))
}

/// The homomorphism defect of a built map through `deg ≤ K`.
pub fn homomorphism_error(tau: &TauMap, spec: &StarProductSpec) -> Result<MultiDiffCochain, TauError> {
    tau_error(spec, tau.components(), tau.order())
}

/// `R_k = Σ_{i<k} λ^{k−i} τ_i(C_{k−i}) − Σ_{0<i<k} τ_i ⋆_Weyl τ_{k−i}`, checked to be a
/// cocycle with symmetric classical limit.
pub fn compute_r_k(spec: &StarProductSpec, taus: &[MultiDiffCochain], k: u32) -> Result<MultiDiffCochain, TauError> {
    let n = spec.dim();
    let mut r = MultiDiffCochain::zero(n, 2);
    for i in 0..k {
        let c = spec.cochain((k - i) as usize);
        let t = &taus[i as usize];
        if c.is_zero() || t.is_zero() {
            continue;
        }
        r = r.add(&t.insert(0, &c)?.shift_lambda(k - i));
    }
    for i in 1..k {
        let (a, b) = (&taus[i as usize], &taus[(k - i) as usize]);
        if a.is_zero() || b.is_zero() {
            continue;
        }
        r = r.sub(&a.weyl_product(b, Some(k))?);
    }
    if !r.is_homogeneous(k) {
        return Err(rk_error(k, "is not deg-homogeneous", &r));
    }
    let d = coboundary(&r, CoboundaryMode::Deformed);
    if !d.is_zero() {
        return Err(rk_error(k, "is not a cocycle", &d));
    }
    let anti = r.classical_limit().alt();
    if !anti.is_zero() {
        return Err(rk_error(k, "has an antisymmetric classical limit", &anti));
    }
    Ok(r)
}

fn epsilon_through(spec: &StarProductSpec, taus: &[MultiDiffCochain], k: u32) -> Result<MultiDiffCochain, TauError> {
    tau_error(spec, taus, k)
}

/// Builds `τ₀, …, τ_K` stage by stage.
///
/// The sign `s` of `δτ_k = s·R_k` is fixed at the first stage with `R_k ≠ 0`
/// by requiring `ε^{(k)}` to vanish through degree `k`, and then required to
/// work at every later stage.
pub fn build_tau(
    spec: &StarProductSpec,
    order: u32,
    hermitian: bool,
    config: &SolverConfig,
) -> Result<(TauMap, BuildReport), TauError> {
    let n = spec.dim();
    let mut taus = vec![MultiDiffCochain::inclusion(n)];
    let mut report = BuildReport { stage_sign: None, solver_config: config.clone(), stages: Vec::new() };
    for k in 1..=order {
        let error_before = epsilon_through(spec, &taus, k)?.homogeneous_part(k);
        let r = compute_r_k(spec, &taus, k)?;
        let mut stage = StageReport {
            k,
            error_before,
            r_k: r.clone(),
            r_k_cocycle: true,
            classical_part_symmetric: true,
            solver: None,
            hermitian_adjustment: None,
            epsilon_vanishes: false,
        };
        let mut tau_k = MultiDiffCochain::zero(n, 1);
        if !r.is_zero() {
            let (psi, solve) = solve_coboundary(&r, config).map_err(|source| TauError::Solve { k, source })?;
            stage.solver = Some(solve);
            let signs: Vec<i32> = match report.stage_sign {
                Some(s) => vec![s],
                None => vec![1, -1],
            };
            let mut chosen = None;
            let mut last_eps = MultiDiffCochain::zero(n, 2);
            for s in signs {
                let candidate = psi.scale(&GaussianRational::from_int(s as i64));
                taus.push(candidate.clone());
                let eps = epsilon_through(spec, &taus, k)?;
                taus.pop();
                if eps.is_zero() {
                    chosen = Some((s, candidate));
                    break;
                }
                last_eps = eps;
            }
            match chosen {
                Some((s, c)) => {
                    report.stage_sign = Some(s);
                    tau_k = c;
                }
                None if report.stage_sign.is_none() => {
                    return Err(TauError::NoStageSign { k, witness: first_term_description(&last_eps) });
                }
                None => {
                    return Err(TauError::EpsilonCheckFailed { k, witness: first_term_description(&last_eps) });
                }
            }
        }
        if hermitian {
            let sym = tau_k.add(&tau_k.involution()).scale_rational(&half());
            let adjustment = sym.sub(&tau_k);
            if !adjustment.is_zero() {
                stage.hermitian_adjustment = Some(adjustment);
            }
            tau_k = sym;
        }
        taus.push(tau_k);
        let eps = epsilon_through(spec, &taus, k)?;
        if !eps.is_zero() {
            return Err(TauError::EpsilonCheckFailed { k, witness: first_term_description(&eps) });
        }
        stage.epsilon_vanishes = true;
        report.stages.push(stage);
    }
    let tau = TauMap::new(n, taus, hermitian)?;
    Ok((tau, report))
}

fn half() -> num_rational::BigRational {
    num_rational::BigRational::new(1.into(), 2.into())
}

impl From<SolveError> for TauError {
    fn from(source: SolveError) -> Self {
        TauError::Solve { k: 0, source }
    }
}
