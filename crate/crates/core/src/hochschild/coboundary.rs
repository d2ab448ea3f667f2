use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::cochain::{CochainMonomial, MultiDiffCochain};
use crate::multi_index::MultiIndex;
use crate::scalar::GaussianRational;

/// Which bimodule structure on `𝒲` the coboundary uses.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoboundaryMode {
    /// Left and right `⋆_Weyl`-multiplication by `π*f`.
    Deformed,
    /// Pointwise multiplication (the `λ⁰` part of the deformed actions).
    Classical,
}

/// Bar-complex coboundary
/// `(δφ)(f₀,…,f_k) = f₀ ▷ φ(f₁,…,f_k) + Σ_{i=1}^{k} (−1)^i φ(…,f_{i−1}f_i,…) + (−1)^{k+1} φ(f₀,…,f_{k−1}) ◁ f_k`.
pub fn coboundary(phi: &MultiDiffCochain, mode: CoboundaryMode) -> MultiDiffCochain {
    let n = phi.dim();
    let k = phi.arity();
    let mut out = action(phi, mode, Side::Left);
    let mu = MultiDiffCochain::pointwise_product(n);
    for i in 1..=k {
        let inner = phi.insert(i - 1, &mu).expect("pointwise product is p-free");
        out = if i % 2 == 0 { out.add(&inner) } else { out.sub(&inner) };
    }
    let right = action(phi, mode, Side::Right);
    if (k + 1) % 2 == 0 {
        out.add(&right)
    } else {
        out.sub(&right)
    }
}

#[derive(Clone, Copy)]
enum Side {
    Left,
    Right,
}

/// `π*(f) ⋆ φ(…)` or `φ(…) ⋆ π*(f)` with the new argument in the first or last slot.
///
/// Only the `∂_q f · ∂_p φ` terms of the Weyl product survive because `π*f` is
/// `p`-free; the right action carries the extra sign `(−1)^{|β|}`.
fn action(phi: &MultiDiffCochain, mode: CoboundaryMode, side: Side) -> MultiDiffCochain {
    let n = phi.dim();
    let mut out = MultiDiffCochain::zero(n, phi.arity() + 1);
    let half_i = GaussianRational::complex(0, 1, 1, 2);
    for (m, c) in phi.terms() {
        let alphas = match mode {
            CoboundaryMode::Deformed => m.p.below(),
            CoboundaryMode::Classical => vec![MultiIndex::zeros(n)],
        };
        for alpha in alphas {
            let r = alpha.total();
            let mut s = c.clone();
            for _ in 0..r {
                s = &s * &half_i;
            }
            if matches!(side, Side::Right) && r % 2 == 1 {
                s = -s;
            }
            let s = s.scale(&BigRational::new(m.p.falling(&alpha), alpha.factorial()));
            let mut derivs = Vec::with_capacity(m.derivs.len() + 1);
            match side {
                Side::Left => {
                    derivs.push(alpha.clone());
                    derivs.extend(m.derivs.iter().cloned());
                }
                Side::Right => {
                    derivs.extend(m.derivs.iter().cloned());
                    derivs.push(alpha.clone());
                }
            }
            let mono = CochainMonomial {
                lambda: m.lambda + r,
                p: m.p.checked_sub(&alpha).expect("α ≤ I"),
                q: m.q.clone(),
                derivs,
            };
            out.push(mono, s);
        }
    }
    out
}
