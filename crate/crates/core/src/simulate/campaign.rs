use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::classical::{collision_test, coupon_test, overlap_test};
use super::counting::{
    bootstrap_reflection_counting, known_subset_counting, quantum_counting, sample_then_count, DEFAULT_STAGE_RETRIES,
};
use super::oracle::{trial_rng, Decision, Hypotheses, OracleInstance, QueryTally, ReflectionCharge, TrialOutcome};
use crate::error::{usage, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Procedure {
    Coupon,
    Collision,
    Overlap,
    Qcount,
    Subset,
    SampleCount,
    Bootstrap,
}

impl Procedure {
    pub const ALL: [Procedure; 7] = [
        Procedure::Coupon,
        Procedure::Collision,
        Procedure::Overlap,
        Procedure::Qcount,
        Procedure::Subset,
        Procedure::SampleCount,
        Procedure::Bootstrap,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Procedure::Coupon => "coupon",
            Procedure::Collision => "collision",
            Procedure::Overlap => "overlap",
            Procedure::Qcount => "qcount",
            Procedure::Subset => "subset",
            Procedure::SampleCount => "sample-count",
            Procedure::Bootstrap => "bootstrap",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.as_str() == s)
    }
}

/// Parameters of a simulation campaign. `budget` is the sample budget
/// (coupon), sample count (collision) or copy count (overlap); `ell` is the
/// known-subset size (subset). Unset values fall back to the defaults below.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimParams {
    pub n: usize,
    pub k: usize,
    pub eps: f64,
    pub budget: Option<usize>,
    pub ell: Option<usize>,
    pub charge: ReflectionCharge,
    /// Majority vote over this many independent runs per trial.
    pub repeats: usize,
    pub retries: usize,
}

impl SimParams {
    pub fn new(n: usize, k: usize, eps: f64) -> Self {
        Self {
            n,
            k,
            eps,
            budget: None,
            ell: None,
            charge: ReflectionCharge::Reflection,
            repeats: 1,
            retries: DEFAULT_STAGE_RETRIES,
        }
    }

    /// Budget actually used: 5k for coupon, ⌈8√k/ε⌉ for collision,
    /// ⌈64n/(kε²)⌉ for overlap.
    pub fn effective_budget(&self, procedure: Procedure) -> Option<usize> {
        let (n, k, e) = (self.n as f64, self.k as f64, self.eps);
        let default = match procedure {
            Procedure::Coupon => 5.0 * k,
            Procedure::Collision => (8.0 * k.sqrt() / e).ceil(),
            Procedure::Overlap => (64.0 * n / (k * e * e)).ceil(),
            _ => return None,
        };
        Some(self.budget.unwrap_or(default as usize))
    }

    /// Known-subset size: max(1, k/4) unless set.
    pub fn effective_ell(&self) -> usize {
        self.ell.unwrap_or((self.k / 4).max(1))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub index: u64,
    pub hidden_size: usize,
    pub outcome: TrialOutcome,
}

fn run_once(
    procedure: Procedure,
    params: &SimParams,
    oracle: &OracleInstance,
    hyp: &Hypotheses,
    rng: &mut ChaCha8Rng,
) -> Result<TrialOutcome> {
    let budget = params.effective_budget(procedure).unwrap_or(0);
    match procedure {
        Procedure::Coupon => Ok(coupon_test(oracle, hyp, budget, rng)),
        Procedure::Collision => collision_test(oracle, hyp, budget, rng),
        Procedure::Overlap => overlap_test(oracle, hyp, budget, rng),
        Procedure::Qcount => quantum_counting(oracle, hyp, params.charge, rng),
        Procedure::Subset => known_subset_counting(oracle, hyp, params.effective_ell(), params.charge, rng),
        Procedure::SampleCount => sample_then_count(oracle, hyp, rng),
        Procedure::Bootstrap => bootstrap_reflection_counting(oracle, hyp, params.retries, rng),
    }
}

/// Majority of `repeats` runs on the same oracle. Aborted runs do not vote;
/// ties go to size-k. Tallies add up across runs.
fn run_majority(
    procedure: Procedure,
    params: &SimParams,
    oracle: &OracleInstance,
    hyp: &Hypotheses,
    rng: &mut ChaCha8Rng,
) -> Result<TrialOutcome> {
    if params.repeats == 1 {
        return run_once(procedure, params, oracle, hyp, rng);
    }
    let mut tally = QueryTally::default();
    let (mut votes_k, mut votes_kp) = (0usize, 0usize);
    let mut in_regime = true;
    for _ in 0..params.repeats {
        let o = run_once(procedure, params, oracle, hyp, rng)?;
        tally.add(&o.tally);
        in_regime &= o.in_regime;
        if o.aborted {
            continue;
        }
        match o.decision {
            Decision::SizeK => votes_k += 1,
            Decision::SizeKPrime => votes_kp += 1,
        }
    }
    if votes_k + votes_kp == 0 {
        return Ok(TrialOutcome::aborted(tally, in_regime));
    }
    let decision = if votes_kp > votes_k {
        Decision::SizeKPrime
    } else {
        Decision::SizeK
    };
    Ok(TrialOutcome::decided(decision, hyp.truth(oracle), tally, in_regime))
}

/// Runs `trials` independent trials in parallel. Trial i draws a fresh hidden
/// set of size k (i even) or k' (i odd) from its own stream of `seed`.
pub fn run_trials(procedure: Procedure, params: &SimParams, trials: u64, seed: u64) -> Result<Vec<TrialRecord>> {
    if trials == 0 {
        return usage("need at least one trial");
    }
    if params.repeats == 0 {
        return usage("majority vote needs at least one repeat");
    }
    let hyp = Hypotheses::new(params.k, params.eps)?;
    if params.n < hyp.k_prime {
        return usage(format!("n = {} is smaller than k' = {}", params.n, hyp.k_prime));
    }
    (0..trials)
        .into_par_iter()
        .map(|index| {
            let mut rng = trial_rng(seed, index);
            let size = if index % 2 == 0 { hyp.k } else { hyp.k_prime };
            let oracle = OracleInstance::random(params.n, size, &mut rng)?;
            let outcome = run_majority(procedure, params, &oracle, &hyp, &mut rng)?;
            Ok(TrialRecord {
                index,
                hidden_size: size,
                outcome,
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct MeanTally {
    pub copies: f64,
    pub state_generation: f64,
    pub reflections: f64,
    pub membership: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Aggregate {
    pub trials: u64,
    pub successes: u64,
    pub success_rate: f64,
    /// Binomial standard error √(p(1−p)/N).
    pub std_error: f64,
    pub success_rate_size_k: f64,
    pub success_rate_size_k_prime: f64,
    pub aborted: u64,
    pub all_in_regime: bool,
    pub mean_tally: MeanTally,
}

pub fn aggregate(records: &[TrialRecord], k: usize) -> Aggregate {
    let trials = records.len() as u64;
    let successes = records.iter().filter(|r| r.outcome.correct).count() as u64;
    let rate = |pred: &dyn Fn(&TrialRecord) -> bool| {
        let (hits, total) = records
            .iter()
            .filter(|r| pred(r))
            .fold((0u64, 0u64), |(h, t), r| (h + r.outcome.correct as u64, t + 1));
        if total == 0 {
            0.0
        } else {
            hits as f64 / total as f64
        }
    };
    let p = if trials == 0 {
        0.0
    } else {
        successes as f64 / trials as f64
    };
    let mut sum = QueryTally::default();
    for r in records {
        sum.add(&r.outcome.tally);
    }
    let mean = |v: u64| if trials == 0 { 0.0 } else { v as f64 / trials as f64 };
    Aggregate {
        trials,
        successes,
        success_rate: p,
        std_error: if trials == 0 {
            0.0
        } else {
            (p * (1.0 - p) / trials as f64).sqrt()
        },
        success_rate_size_k: rate(&|r| r.hidden_size == k),
        success_rate_size_k_prime: rate(&|r| r.hidden_size != k),
        aborted: records.iter().filter(|r| r.outcome.aborted).count() as u64,
        all_in_regime: records.iter().all(|r| r.outcome.in_regime),
        mean_tally: MeanTally {
            copies: mean(sum.copies),
            state_generation: mean(sum.state_generation),
            reflections: mean(sum.reflections),
            membership: mean(sum.membership),
        },
    }
}
