use super::projectors::{projectors_for, ProjectorFamily};
use super::reference::reference_v;
use super::subsets::{inclusion_between, subset_basis, SubsetBasis};
use crate::error::{usage, Error, Result};
use crate::linalg::{dot, spectral_norm, DenseMatrix};

/// Scalars below this make the transporter sign or scale meaningless.
pub const DEGENERATE_TOL: f64 = 1e-8;

/// Norm-one equivariant map from the copy of irrep j over k'-subsets to the
/// copy over k-subsets; rows are k-subsets, columns k'-subsets.
#[derive(Clone, Debug)]
pub struct Transporter {
    pub j: usize,
    pub matrix: DenseMatrix,
}

/// Both levels of the scheme for one (n, k, k') together with their
/// projectors and the transporters Φ_0 … Φ_k.
#[derive(Clone, Debug)]
pub struct JohnsonPair {
    pub n: usize,
    pub k: usize,
    pub k_prime: usize,
    /// k-subsets (rows of Γ).
    pub x: SubsetBasis,
    /// k'-subsets (columns of Γ).
    pub y: SubsetBasis,
    pub ex: ProjectorFamily,
    pub ey: ProjectorFamily,
    pub transporters: Vec<Transporter>,
}

fn check_pair(n: usize, k: usize, k_prime: usize) -> Result<()> {
    if !(k < k_prime && 2 * k_prime <= n) {
        return usage(format!(
            "transporters need k < k' ≤ n − k', got (n,k,k')=({n},{k},{k_prime})"
        ));
    }
    Ok(())
}

impl JohnsonPair {
    pub fn new(n: usize, k: usize, k_prime: usize) -> Result<Self> {
        check_pair(n, k, k_prime)?;
        let x = subset_basis(n, k)?;
        let y = subset_basis(n, k_prime)?;
        let ex = projectors_for(&x)?;
        let ey = projectors_for(&y)?;
        let w = inclusion_between(&y, &x).transpose();
        let transporters = (0..=k)
            .map(|j| build_transporter(&x, &y, &ex, &ey, &w, j))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n,
            k,
            k_prime,
            x,
            y,
            ex,
            ey,
            transporters,
        })
    }

    /// d_j = rank of the irrep-j projector on the k-subset side.
    pub fn dim(&self, j: usize) -> usize {
        self.ex.bases[j].cols()
    }
}

/// Φ_j for (n, k, k'), built from scratch.
pub fn transporter(n: usize, k: usize, k_prime: usize, j: usize) -> Result<Transporter> {
    check_pair(n, k, k_prime)?;
    if j > k {
        return usage(format!("transporter index j={j} exceeds k={k}"));
    }
    let x = subset_basis(n, k)?;
    let y = subset_basis(n, k_prime)?;
    let ex = projectors_for(&x)?;
    let ey = projectors_for(&y)?;
    let w = inclusion_between(&y, &x).transpose();
    build_transporter(&x, &y, &ex, &ey, &w, j)
}

fn build_transporter(
    x: &SubsetBasis,
    y: &SubsetBasis,
    ex: &ProjectorFamily,
    ey: &ProjectorFamily,
    w: &DenseMatrix,
    j: usize,
) -> Result<Transporter> {
    let m = ex.projectors[j].matmul(w).matmul(&ey.projectors[j]);
    // a morphism between two copies of the same irrep is a multiple of a
    // partial isometry: every nonzero singular value equals the top one
    let top = spectral_norm(&m)?;
    if top < DEGENERATE_TOL {
        return Err(Error::Degenerate(format!(
            "E_j W Ê_j vanishes at j={j} (scale {top:e})"
        )));
    }
    let d = ex.bases[j].cols() as f64;
    let frob = m.frobenius_norm();
    if (frob * frob - d * top * top).abs() > 1e-8 * d * top * top {
        return Err(Error::Degenerate(format!(
            "E_j W Ê_j at j={j} is not a scaled partial isometry"
        )));
    }
    let mut phi = m.scale(1.0 / top);
    let v = reference_v(x, j)?;
    let v_hat = reference_v(y, j)?;
    let sign = dot(&v, &phi.mat_vec(&v_hat));
    if sign.abs() < DEGENERATE_TOL {
        return Err(Error::Degenerate(format!(
            "transporter sign undetermined at j={j} (⟨v, Φ v̂⟩ = {sign:e})"
        )));
    }
    if sign < 0.0 {
        phi = phi.scale(-1.0);
    }
    Ok(Transporter { j, matrix: phi })
}
