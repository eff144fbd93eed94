use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{usage, Result};

/// A hidden subset of `[n]` (0-based elements here) behind the oracles.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleInstance {
    pub n: usize,
    elements: Vec<usize>,
}

impl OracleInstance {
    pub fn new(n: usize, elements: Vec<usize>) -> Result<Self> {
        if elements.is_empty() || elements.len() > n {
            return usage(format!("hidden set size {} must lie in [1, {n}]", elements.len()));
        }
        let mut sorted = elements.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != elements.len() || sorted.last().is_some_and(|&e| e >= n) {
            return usage("hidden set must hold distinct elements of [0, n)");
        }
        Ok(Self { n, elements })
    }

    /// A uniformly random hidden set of the given size.
    pub fn random(n: usize, size: usize, rng: &mut impl Rng) -> Result<Self> {
        if size == 0 || size > n {
            return usage(format!("hidden set size {size} must lie in [1, {n}]"));
        }
        Ok(Self {
            n,
            elements: sample(rng, n, size).into_vec(),
        })
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    /// One classical sample: a uniform element of the hidden set.
    pub fn sample(&self, rng: &mut impl Rng) -> usize {
        self.elements[rng.gen_range(0..self.elements.len())]
    }

    pub fn contains(&self, e: usize) -> bool {
        self.elements.contains(&e)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decision {
    SizeK,
    SizeKPrime,
}

impl Decision {
    pub fn as_str(self) -> &'static str {
        match self {
            Decision::SizeK => "size-k",
            Decision::SizeKPrime => "size-k-prime",
        }
    }
}

/// Oracle calls made by one run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct QueryTally {
    pub copies: u64,
    pub state_generation: u64,
    pub reflections: u64,
    pub membership: u64,
}

impl QueryTally {
    pub fn add(&mut self, other: &QueryTally) {
        self.copies += other.copies;
        self.state_generation += other.state_generation;
        self.reflections += other.reflections;
        self.membership += other.membership;
    }

    /// Σ w_i T^{(i)} with weights in the order copies, state generation,
    /// reflections, membership.
    pub fn weighted(&self, weights: [f64; 4]) -> f64 {
        weights[0] * self.copies as f64
            + weights[1] * self.state_generation as f64
            + weights[2] * self.reflections as f64
            + weights[3] * self.membership as f64
    }
}

/// Which oracle pays for a reflection about ψ_x.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReflectionCharge {
    /// One call to the reflecting oracle.
    Reflection,
    /// One membership query (phase flip on x, same action in the plane).
    Membership,
    /// Two state-generation calls, one direct and one reversed.
    StateGeneration,
}

impl ReflectionCharge {
    pub fn charge(self, tally: &mut QueryTally, count: u64) {
        match self {
            ReflectionCharge::Reflection => tally.reflections += count,
            ReflectionCharge::Membership => tally.membership += count,
            ReflectionCharge::StateGeneration => tally.state_generation += 2 * count,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub decision: Decision,
    pub correct: bool,
    pub tally: QueryTally,
    /// Parameters met the procedure's stated preconditions.
    pub in_regime: bool,
    /// The procedure gave up (sample budget or stage retries exhausted);
    /// such trials count as incorrect.
    pub aborted: bool,
}

impl TrialOutcome {
    pub(crate) fn decided(decision: Decision, truth: Decision, tally: QueryTally, in_regime: bool) -> Self {
        Self {
            decision,
            correct: decision == truth,
            tally,
            in_regime,
            aborted: false,
        }
    }

    pub(crate) fn aborted(tally: QueryTally, in_regime: bool) -> Self {
        Self {
            decision: Decision::SizeK,
            correct: false,
            tally,
            in_regime,
            aborted: true,
        }
    }
}

/// Sizes of the two hypotheses, k and k' = (1+ε)k.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Hypotheses {
    pub k: usize,
    pub k_prime: usize,
    pub eps: f64,
}

impl Hypotheses {
    /// Requires k ≥ 1, ε > 0 and (1+ε)k integral.
    pub fn new(k: usize, eps: f64) -> Result<Self> {
        if k == 0 || !(eps > 0.0) || !eps.is_finite() {
            return usage(format!("need k ≥ 1 and ε > 0, got k={k}, ε={eps}"));
        }
        let exact = (1.0 + eps) * k as f64;
        let k_prime = exact.round();
        if (exact - k_prime).abs() > 1e-9 * exact {
            return usage(format!("(1+ε)k = {exact} is not an integer"));
        }
        Ok(Self {
            k,
            k_prime: k_prime as usize,
            eps,
        })
    }

    pub fn truth(&self, oracle: &OracleInstance) -> Decision {
        if oracle.size() == self.k {
            Decision::SizeK
        } else {
            Decision::SizeKPrime
        }
    }

    /// n ≥ 5k and 1/k ≤ ε ≤ 1.
    pub fn in_theorem_regime(&self, n: usize) -> bool {
        n >= 5 * self.k && self.eps * self.k as f64 >= 1.0 - 1e-12 && self.eps <= 1.0
    }
}

/// Independent stream for trial `index` under a master seed.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
