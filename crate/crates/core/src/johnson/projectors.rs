use super::subsets::{binomial, inclusion_between, subset_basis, SubsetBasis};
use crate::error::{usage, Result};
use crate::linalg::{orthonormal_column_basis, symmetric_eig, DenseMatrix, DEFAULT_RANK_TOL};

/// Isotypic projectors `E_0 … E_k` of the Johnson scheme on k-subsets of `[n]`.
#[derive(Clone, Debug)]
pub struct ProjectorFamily {
    pub n: usize,
    pub k: usize,
    /// `E_j`, each C(n,k) × C(n,k).
    pub projectors: Vec<DenseMatrix>,
    /// Orthonormal basis of the range of `E_j`, C(n,k) × d_j.
    pub bases: Vec<DenseMatrix>,
}

impl ProjectorFamily {
    /// Rank of `E_j` read off as its rounded trace.
    pub fn rank(&self, j: usize) -> usize {
        self.projectors[j].trace().round() as usize
    }

    /// Expected rank C(n,j) − C(n,j−1).
    pub fn expected_rank(&self, j: usize) -> usize {
        let below = if j == 0 { 0 } else { binomial(self.n, j - 1) };
        binomial(self.n, j) - below
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    /// Largest deviation from the projector-family identities: idempotence,
    /// symmetry, mutual orthogonality and completeness.
    pub fn identity_residual(&self) -> f64 {
        let dim = self.projectors.first().map_or(0, |e| e.rows());
        let mut worst: f64 = 0.0;
        let mut total = DenseMatrix::zeros(dim, dim);
        for (i, ei) in self.projectors.iter().enumerate() {
            worst = worst.max(ei.matmul(ei).max_abs_diff(ei));
            worst = worst.max(ei.asymmetry());
            for ej in &self.projectors[i + 1..] {
                worst = worst.max(ei.matmul(ej).max_abs());
            }
            total.add_scaled(1.0, ei);
        }
        worst.max(total.max_abs_diff(&DenseMatrix::identity(dim)))
    }
}

/// Projectors onto the irreducible components of the k-subset module.
///
/// `E_j = P_j − P_{j−1}` where `P_j` projects onto the column space of the
/// k-versus-j inclusion matrix.
pub fn irrep_projectors(n: usize, k: usize) -> Result<ProjectorFamily> {
    if n < 2 * k {
        return usage(format!("irrep decomposition needs n ≥ 2k, got n={n}, k={k}"));
    }
    let rows = subset_basis(n, k)?;
    projectors_for(&rows)
}

pub(crate) fn projectors_for(rows: &SubsetBasis) -> Result<ProjectorFamily> {
    let (n, k) = (rows.n(), rows.k());
    let dim = rows.len();
    let mut projectors = Vec::with_capacity(k + 1);
    let mut bases = Vec::with_capacity(k + 1);
    let mut previous = DenseMatrix::zeros(dim, dim);
    for j in 0..=k {
        let cols = subset_basis(n, j)?;
        let w = inclusion_between(rows, &cols);
        let q = orthonormal_column_basis(&w, DEFAULT_RANK_TOL)?;
        let p = q.mul_transpose(&q);
        let e = p.sub(&previous);
        let e = DenseMatrix::from_fn(dim, dim, |r, c| 0.5 * (e[(r, c)] + e[(c, r)]));
        bases.push(range_basis(&e)?);
        projectors.push(e);
        previous = p;
    }
    Ok(ProjectorFamily {
        n,
        k,
        projectors,
        bases,
    })
}

/// Orthonormal basis of the range of an orthogonal projector: its
/// eigenvectors with eigenvalue near 1 (the spectrum is {0, 1}).
fn range_basis(e: &DenseMatrix) -> Result<DenseMatrix> {
    let eig = symmetric_eig(e)?;
    let keep: Vec<usize> = (0..eig.values.len()).filter(|&i| eig.values[i] > 0.5).collect();
    Ok(eig.vectors.select_columns(&keep))
}
