use std::f64::consts::PI;

use rand::Rng;

use super::estimation::{angle_from_outcome, sample_phase_estimation};
use super::grover::PlaneState;
use super::oracle::{Decision, Hypotheses, OracleInstance, QueryTally, ReflectionCharge, TrialOutcome};
use crate::error::{usage, Result};

/// Default number of retries for a failed amplification stage.
pub const DEFAULT_STAGE_RETRIES: usize = 3;

/// Smallest grid size M whose resolution 2π/M is below the gap between the
/// two candidate angles. Eigenphases are ±2θ, so this puts the two
/// hypotheses at least two grid steps apart in eigenphase.
pub fn grid_size_for_gap(theta_lo: f64, theta_hi: f64) -> Result<usize> {
    let gap = theta_hi - theta_lo;
    if !(gap > 0.0) || !gap.is_finite() {
        return usage(format!("angles must satisfy θ_lo < θ_hi, got {theta_lo} and {theta_hi}"));
    }
    Ok(((2.0 * PI / gap).floor() as usize + 1).max(2))
}

/// Phase estimation at the resolution that separates `amp_k` (the amplitude
/// if |x| = k) from `amp_k_prime`; decides by the nearer candidate angle.
fn estimate_and_decide(
    amp_true: f64,
    amp_k: f64,
    amp_k_prime: f64,
    charge: ReflectionCharge,
    tally: &mut QueryTally,
    rng: &mut impl Rng,
) -> Result<Decision> {
    let (theta_k, theta_kp) = (amp_k.asin(), amp_k_prime.asin());
    let m = grid_size_for_gap(theta_k.min(theta_kp), theta_k.max(theta_kp))?;
    let y = sample_phase_estimation(amp_true.asin(), m, charge, tally, rng)?;
    let est = angle_from_outcome(y, m);
    Ok(if (est - theta_k).abs() <= (est - theta_kp).abs() {
        Decision::SizeK
    } else {
        Decision::SizeKPrime
    })
}

/// Amplitude estimation on a = |x|/n. The reflection about ψ_x is charged to
/// whichever oracle `charge` names.
pub fn quantum_counting(
    oracle: &OracleInstance,
    hyp: &Hypotheses,
    charge: ReflectionCharge,
    rng: &mut impl Rng,
) -> Result<TrialOutcome> {
    let n = oracle.n as f64;
    let amp = |s: usize| (s as f64 / n).sqrt();
    let mut tally = QueryTally::default();
    let decision = estimate_and_decide(amp(oracle.size()), amp(hyp.k), amp(hyp.k_prime), charge, &mut tally, rng)?;
    Ok(TrialOutcome::decided(
        decision,
        hyp.truth(oracle),
        tally,
        hyp.in_theorem_regime(oracle.n),
    ))
}

/// Amplitude estimation on a = ℓ/|x| given ℓ distinct elements of x for
/// free. Accepts 1 ≤ ℓ ≤ k; ℓ > k/2 is flagged out of regime.
pub fn known_subset_counting(
    oracle: &OracleInstance,
    hyp: &Hypotheses,
    ell: usize,
    charge: ReflectionCharge,
    rng: &mut impl Rng,
) -> Result<TrialOutcome> {
    let mut tally = QueryTally::default();
    let decision = known_subset_stage(oracle, hyp, ell, charge, &mut tally, rng)?;
    Ok(TrialOutcome::decided(
        decision,
        hyp.truth(oracle),
        tally,
        2 * ell <= hyp.k,
    ))
}

fn known_subset_stage(
    oracle: &OracleInstance,
    hyp: &Hypotheses,
    ell: usize,
    charge: ReflectionCharge,
    tally: &mut QueryTally,
    rng: &mut impl Rng,
) -> Result<Decision> {
    if ell == 0 || ell > hyp.k {
        return usage(format!("known subset size must lie in [1, {}], got {ell}", hyp.k));
    }
    let amp = |s: usize| (ell as f64 / s as f64).sqrt();
    estimate_and_decide(amp(oracle.size()), amp(hyp.k), amp(hyp.k_prime), charge, tally, rng)
}

/// ⌈k^{1/3} / (2ε^{2/3})⌉, at least 1.
pub fn sample_then_count_ell(hyp: &Hypotheses) -> usize {
    let v = (hyp.k as f64).cbrt() / (2.0 * hyp.eps.powf(2.0 / 3.0));
    (v.ceil() as usize).max(1)
}

/// Collects ℓ distinct samples from state-generation calls (at most 10ℓ
/// draws), then runs known-subset counting with each reflection built from
/// two state-generation calls.
pub fn sample_then_count(oracle: &OracleInstance, hyp: &Hypotheses, rng: &mut impl Rng) -> Result<TrialOutcome> {
    let ell = sample_then_count_ell(hyp);
    let in_regime = hyp.in_theorem_regime(oracle.n) && 2 * ell <= hyp.k;
    let mut tally = QueryTally::default();
    let mut seen = Vec::with_capacity(ell);
    while seen.len() < ell && tally.state_generation < 10 * ell as u64 {
        let s = oracle.sample(rng);
        tally.state_generation += 1;
        if !seen.contains(&s) {
            seen.push(s);
        }
    }
    if seen.len() < ell || ell > hyp.k {
        return Ok(TrialOutcome::aborted(tally, in_regime));
    }
    let decision = known_subset_stage(oracle, hyp, ell, ReflectionCharge::StateGeneration, &mut tally, rng)?;
    Ok(TrialOutcome::decided(decision, hyp.truth(oracle), tally, in_regime))
}

/// ⌈1/ε⌉.
pub fn bootstrap_target(hyp: &Hypotheses) -> usize {
    ((1.0 / hyp.eps).ceil() as usize).max(1)
}

/// One amplification stage growing a known set of `known` elements: start at
/// ψ_S, alternate reflections about ψ_x (charged) and ψ_S (free), measure.
/// Returns whether the measured element lies outside S.
///
/// Coordinates are in the basis (ψ_S, ψ_{x∖S}), where ψ_x = (c, √(1−c²))
/// with c = √(|S|/|x|). The iteration count uses k since |x| is unknown.
pub fn amplification_stage(
    known: usize,
    size: usize,
    k: usize,
    charge: ReflectionCharge,
    tally: &mut QueryTally,
    rng: &mut impl Rng,
) -> bool {
    let c = (known as f64 / size as f64).sqrt();
    let psi_x = [c, (1.0 - c * c).sqrt()];
    let iterations = (PI / 4.0 * (k as f64 / known as f64).sqrt()).ceil() as u64;
    let mut state = PlaneState([1.0, 0.0]);
    for _ in 0..iterations {
        state.reflect_about(psi_x);
        state.reflect_about([1.0, 0.0]);
    }
    charge.charge(tally, iterations);
    rng.gen_bool(state.probability(1).clamp(0.0, 1.0))
}

/// Starting from one free element of x, grows S to ⌈1/ε⌉ elements by
/// amplitude amplification (each stage retried up to `retries` times), then
/// runs known-subset counting with ℓ = |S|. All reflections share one tally.
pub fn bootstrap_reflection_counting(
    oracle: &OracleInstance,
    hyp: &Hypotheses,
    retries: usize,
    rng: &mut impl Rng,
) -> Result<TrialOutcome> {
    let charge = ReflectionCharge::Reflection;
    let target = bootstrap_target(hyp);
    let in_regime = hyp.in_theorem_regime(oracle.n) && 2 * target <= hyp.k;
    if target > hyp.k {
        return usage(format!("target known-set size {target} exceeds k = {}", hyp.k));
    }
    let mut tally = QueryTally::default();
    let mut known = 1;
    while known < target {
        let grown = (0..=retries).any(|_| amplification_stage(known, oracle.size(), hyp.k, charge, &mut tally, rng));
        if !grown {
            return Ok(TrialOutcome::aborted(tally, in_regime));
        }
        known += 1;
    }
    let decision = known_subset_stage(oracle, hyp, known, charge, &mut tally, rng)?;
    Ok(TrialOutcome::decided(decision, hyp.truth(oracle), tally, in_regime))
}
