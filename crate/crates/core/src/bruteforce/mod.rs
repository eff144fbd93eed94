//! Explicit construction of every matrix in the adversary analysis and the
//! checks that compare them with the closed forms.

mod checks;
mod lifts;
mod xi;

pub use checks::{
    reflection_norm_factored, verify, verify_in, CheckId, DiscrepancyReport, InstanceContext,
    ToleranceClass, Tolerances, SIZE_CAP,
};
pub use lifts::{
    build_projection_pair, delta_membership_mask, lift, lifted_dimension, psi_gram, psi_vector,
    LiftKind,
};
pub use xi::{build_xi, LevelLift, XiBlock, XI_LABELS};
