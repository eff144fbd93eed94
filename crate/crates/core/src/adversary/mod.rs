//! Closed-form side of the adversary construction: the φ coefficient vectors,
//! the γ schedule, the transporter expansion of Γ, the norm formulas for
//! Γ∘Δ under each oracle type and the resulting lower-bound tradeoffs.

mod coefficients;
mod norms;
mod tradeoff;

pub use coefficients::{
    dot4, gamma_schedule, norm4, phi_table, phi_vector, tilde_table, GammaSchedule, PhiTable,
    ProblemInstance, TildeTable,
};
pub use norms::{
    assemble_adversary, hadamard_psi_step, norm_delta_membership, norm_delta_reflection,
    norm_delta_state_gen, overlap_d, psi_power_coefficients, psi_power_lower_bound,
};
pub use tradeoff::{
    dual_feasibility_report, theorem_tradeoff, BoundReport, DualFeasibilityReport, FifthCase,
    DEFAULT_CPRIME, DEFAULT_FEASIBILITY_THRESHOLD, FEASIBILITY_K_LIMIT,
};
