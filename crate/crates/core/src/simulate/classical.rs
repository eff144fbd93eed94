use std::collections::{HashMap, HashSet};

use rand::Rng;

use super::oracle::{Decision, Hypotheses, OracleInstance, QueryTally, TrialOutcome};
use crate::error::{usage, Result};

/// Draws `budget` samples and answers k' iff more than k distinct elements
/// were seen. Never wrong when |x| = k.
pub fn coupon_test(oracle: &OracleInstance, hyp: &Hypotheses, budget: usize, rng: &mut impl Rng) -> TrialOutcome {
    let seen: HashSet<usize> = (0..budget).map(|_| oracle.sample(rng)).collect();
    let decision = if seen.len() > hyp.k {
        Decision::SizeKPrime
    } else {
        Decision::SizeK
    };
    let tally = QueryTally {
        copies: budget as u64,
        ..QueryTally::default()
    };
    TrialOutcome::decided(decision, hyp.truth(oracle), tally, true)
}

/// Number of unordered pairs of equal values.
pub fn count_equal_pairs(samples: &[usize]) -> u64 {
    let mut counts: HashMap<usize, u64> = HashMap::new();
    for &s in samples {
        *counts.entry(s).or_default() += 1;
    }
    counts.values().map(|c| c * (c - 1) / 2).sum()
}

/// Counts collisions among `sample_count` samples and answers k iff the
/// count exceeds the midpoint of ℓ(ℓ−1)/(2k) and ℓ(ℓ−1)/(2k').
pub fn collision_test(
    oracle: &OracleInstance,
    hyp: &Hypotheses,
    sample_count: usize,
    rng: &mut impl Rng,
) -> Result<TrialOutcome> {
    if sample_count < 2 {
        return usage(format!("collision test needs at least 2 samples, got {sample_count}"));
    }
    let samples: Vec<usize> = (0..sample_count).map(|_| oracle.sample(rng)).collect();
    let pairs = count_equal_pairs(&samples) as f64;
    let l = sample_count as f64;
    let total = l * (l - 1.0) / 2.0;
    let midpoint = 0.5 * (total / hyp.k as f64 + total / hyp.k_prime as f64);
    let decision = if pairs > midpoint {
        Decision::SizeK
    } else {
        Decision::SizeKPrime
    };
    let tally = QueryTally {
        copies: sample_count as u64,
        ..QueryTally::default()
    };
    Ok(TrialOutcome::decided(decision, hyp.truth(oracle), tally, true))
}

/// Measures each copy of ψ_x against the uniform superposition (success
/// probability |x|/n) and thresholds the success fraction at the midpoint
/// of k/n and k'/n.
pub fn overlap_test(
    oracle: &OracleInstance,
    hyp: &Hypotheses,
    copy_count: usize,
    rng: &mut impl Rng,
) -> Result<TrialOutcome> {
    if copy_count == 0 {
        return usage("overlap test needs at least one copy");
    }
    let n = oracle.n as f64;
    let p = oracle.size() as f64 / n;
    let hits = (0..copy_count).filter(|_| rng.gen_bool(p)).count() as f64;
    let midpoint = 0.5 * (hyp.k as f64 + hyp.k_prime as f64) / n;
    let decision = if hits / copy_count as f64 > midpoint {
        Decision::SizeKPrime
    } else {
        Decision::SizeK
    };
    let tally = QueryTally {
        copies: copy_count as u64,
        ..QueryTally::default()
    };
    Ok(TrialOutcome::decided(decision, hyp.truth(oracle), tally, true))
}
