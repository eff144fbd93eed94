//! Dense real linear algebra: matrices, symmetric eigensolvers, spectral norms
//! and orthonormal column bases.

mod eigen;
mod matrix;
mod norms;

pub use eigen::{jacobi_eig, symmetric_eig, symmetric_eigenvalues, SymmetricEigen, SYMMETRY_TOL};
pub use matrix::{dot, norm2, DenseMatrix};
pub use norms::{
    orthonormal_column_basis, spectral_norm, spectral_norm_of_product, DEFAULT_RANK_TOL,
};
