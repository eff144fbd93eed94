use serde::Serialize;

use super::coefficients::{gamma_schedule, ProblemInstance};
use super::norms::{
    norm_delta_membership, norm_delta_reflection, norm_delta_state_gen, psi_power_lower_bound,
};
use crate::error::{usage, Result};

pub const DEFAULT_FEASIBILITY_THRESHOLD: f64 = 0.25;
pub const DEFAULT_CPRIME: f64 = 8.0;

/// Largest k for which the tradeoff evaluator also runs the closed-form
/// dual-feasibility report (it is linear in k).
pub const FEASIBILITY_K_LIMIT: usize = 1_000_000;

/// The norm conditions a dual solution has to meet, evaluated in closed form.
///
/// The three `inv_t*` values are the weights 1/T₁ (membership),
/// 1/T₂ (state generation) and 1/T₃ (reflection).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualFeasibilityReport {
    pub t: f64,
    pub ell: usize,
    pub gamma_norm: f64,
    pub psi_power_bound: f64,
    pub threshold: f64,
    pub feasible: bool,
    pub inv_t1: f64,
    pub inv_t2: f64,
    pub inv_t3: f64,
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
}

pub fn dual_feasibility_report(
    inst: &ProblemInstance,
    t: f64,
    ell: usize,
    threshold: f64,
) -> Result<DualFeasibilityReport> {
    let sched = gamma_schedule(t, inst.k)?;
    let psi_power_bound = psi_power_lower_bound(inst, t, ell)?;
    let inv_t1 = norm_delta_membership(&sched, inst)?;
    let (fwd, adj) = norm_delta_state_gen(&sched, inst)?;
    let inv_t2 = fwd.max(adj);
    let inv_t3 = norm_delta_reflection(&sched, inst)?;
    Ok(DualFeasibilityReport {
        t,
        ell,
        gamma_norm: sched.max_abs(),
        psi_power_bound,
        threshold,
        feasible: psi_power_bound >= threshold,
        inv_t1,
        inv_t2,
        inv_t3,
        t1: 1.0 / inv_t1,
        t2: 1.0 / inv_t2,
        t3: 1.0 / inv_t3,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FifthCase {
    /// Query budget √(n/k) the other oracles are held below.
    pub threshold: f64,
    /// Lower bound √(k/ε) on reflections in that case.
    pub reflection_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: f64,
    pub k: f64,
    pub eps: f64,
    pub ell: f64,
    pub ell_prime: f64,
    pub cprime: f64,
    /// Regime flags: n ≥ 5k and 1/k ≤ ε ≤ 1.
    pub n_regime: bool,
    pub eps_regime: bool,
    /// Schedule cutoff max{2ℓ, C′ℓ′, 1/(5ε), 1}.
    pub t: f64,
    pub copies: f64,
    pub state_generation: f64,
    pub reflection: f64,
    pub membership: f64,
    pub fifth_case: FifthCase,
    /// Closed-form dual conditions at `t`, present when k' = (1+ε)k is an
    /// integer, the instance is valid and k ≤ [`FEASIBILITY_K_LIMIT`].
    pub feasibility: Option<DualFeasibilityReport>,
}

/// Evaluates every branch of the lower-bound tradeoff for the given
/// parameters. Out-of-regime inputs are flagged, not rejected.
pub fn theorem_tradeoff(
    n: f64,
    k: f64,
    eps: f64,
    ell: f64,
    ell_prime: f64,
    cprime: f64,
    threshold: f64,
) -> Result<BoundReport> {
    for (name, v) in [("n", n), ("k", k), ("eps", eps), ("cprime", cprime)] {
        if !(v > 0.0) || !v.is_finite() {
            return usage(format!("{name} must be positive and finite, got {v}"));
        }
    }
    for (name, v) in [("ell", ell), ("ell'", ell_prime)] {
        if !(v >= 0.0) || !v.is_finite() {
            return usage(format!("{name} must be nonnegative and finite, got {v}"));
        }
    }
    let ratio = (n / k).sqrt();
    let copies = k.min(k.sqrt() / eps).min(n / (k * eps * eps));
    let per_copy = if ell > 0.0 {
        (k / ell).sqrt() / eps
    } else {
        f64::INFINITY
    };
    let state_generation = (ratio / eps).min(per_copy).min(k.cbrt() / eps.powf(2.0 / 3.0));
    let reflection = (ratio / eps).min((k / (ell + ell_prime)).sqrt() / eps);
    let membership = ratio / eps;
    let t = (2.0 * ell).max(cprime * ell_prime).max(1.0 / (5.0 * eps)).max(1.0);
    Ok(BoundReport {
        n,
        k,
        eps,
        ell,
        ell_prime,
        cprime,
        n_regime: n >= 5.0 * k,
        eps_regime: eps * k >= 1.0 - 1e-12 && eps <= 1.0,
        t,
        copies,
        state_generation,
        reflection,
        membership,
        fifth_case: FifthCase {
            threshold: ratio,
            reflection_bound: (k / eps).sqrt(),
        },
        feasibility: feasibility_at(n, k, eps, ell, t, threshold),
    })
}

fn as_count(v: f64) -> Option<usize> {
    let r = v.round();
    ((v - r).abs() <= 1e-9 * v.abs().max(1.0) && r >= 0.0).then_some(r as usize)
}

fn feasibility_at(n: f64, k: f64, eps: f64, ell: f64, t: f64, threshold: f64) -> Option<DualFeasibilityReport> {
    let (n, k, ell) = (as_count(n)?, as_count(k)?, as_count(ell)?);
    let k_prime = as_count((1.0 + eps) * k as f64)?;
    if k > FEASIBILITY_K_LIMIT {
        return None;
    }
    let inst = ProblemInstance::new(n, k, k_prime).ok()?;
    dual_feasibility_report(&inst, t, ell, threshold).ok()
}
