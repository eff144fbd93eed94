//! Johnson-scheme combinatorics: subset bases, inclusion matrices, isotypic
//! projectors, transporters between the k'- and k-levels, and the explicit
//! reference vectors with their basis-change tables.

mod projectors;
mod reference;
mod subsets;
mod transporter;

pub use projectors::{irrep_projectors, ProjectorFamily};
pub use reference::{
    basis_change_tables, reference_v, reference_vectors, ReferenceVectors, TwoFixed,
};
pub use subsets::{
    binomial, elements_of, inclusion_between, inclusion_matrix, mask_of, subset_basis, Mask,
    SubsetBasis, MAX_GROUND_SET,
};
pub use transporter::{transporter, JohnsonPair, Transporter, DEGENERATE_TOL};
