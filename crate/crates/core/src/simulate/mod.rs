//! Upper-bound algorithms for approximate counting with exact query accounting.
//!
//! Classical samplers draw from the hidden set directly. Quantum procedures
//! are simulated in the two-dimensional planes their dynamics live in, and
//! phase-estimation outcomes are drawn from the closed-form distribution.

mod campaign;
mod classical;
mod counting;
mod estimation;
mod grover;
mod oracle;

pub use campaign::{aggregate, run_trials, Aggregate, MeanTally, Procedure, SimParams, TrialRecord};
pub use classical::{collision_test, count_equal_pairs, coupon_test, overlap_test};
pub use counting::{
    amplification_stage, bootstrap_reflection_counting, bootstrap_target, grid_size_for_gap, known_subset_counting,
    quantum_counting, sample_then_count, sample_then_count_ell, DEFAULT_STAGE_RETRIES,
};
pub use estimation::{
    amplitude_estimate, angle_from_outcome, fejer_kernel, phase_estimation_distribution, sample_phase_estimation,
};
pub use grover::{statevector_marked_probabilities, GroverRotation, PlaneState};
pub use oracle::{
    trial_rng, Decision, Hypotheses, OracleInstance, QueryTally, ReflectionCharge, TrialOutcome,
};
