use super::lifts::{lift, LiftKind};
use crate::adversary::ProblemInstance;
use crate::error::{usage, Result};
use crate::johnson::{irrep_projectors, subset_basis, ProjectorFamily, SubsetBasis, DEGENERATE_TOL};
use crate::linalg::{spectral_norm, DenseMatrix};

/// The four (ℓ, m) labels, in the order matching the φ_{j,0..3} components.
pub const XI_LABELS: [(usize, isize); 4] = [(1, -1), (0, 0), (1, 0), (1, 1)];

/// Whether Ξ_j^{ℓ,m} is declared to be the zero operator.
fn declared_zero(j: usize, top: usize, label: (usize, isize)) -> bool {
    match label {
        (1, -1) => j == 0,
        (1, 0) => j == 0,
        (1, 1) => j == top,
        _ => false,
    }
}

/// (R·n) × d  →  R × (d·n), moving the element index next to the column.
fn to_wide(y: &DenseMatrix, n: usize) -> DenseMatrix {
    let (rn, d) = y.shape();
    let r = rn / n;
    DenseMatrix::from_fn(r, d * n, |x, ci| y[(x * n + ci % n, ci / n)])
}

fn from_wide(w: &DenseMatrix, n: usize) -> DenseMatrix {
    let (r, dn) = w.shape();
    let d = dn / n;
    DenseMatrix::from_fn(r * n, d, |xi, c| w[(xi / n, c * n + xi % n)])
}

/// (a ⊗ I_n) · y.
pub(crate) fn kron_identity_apply(a: &DenseMatrix, y: &DenseMatrix, n: usize) -> DenseMatrix {
    from_wide(&a.matmul(&to_wide(y, n)), n)
}

/// (Q Qᵀ ⊗ Π_ℓ) · y with Π₀ the uniform projector and Π₁ its complement.
fn project(q: &DenseMatrix, ell: usize, y: &DenseMatrix, n: usize) -> DenseMatrix {
    let mut w = to_wide(y, n);
    for r in 0..w.rows() {
        for seg in w.row_mut(r).chunks_mut(n) {
            let mean = seg.iter().sum::<f64>() / n as f64;
            for v in seg.iter_mut() {
                *v = if ell == 0 { mean } else { *v - mean };
            }
        }
    }
    let inner = q.transpose_mul(&w);
    from_wide(&q.matmul(&inner), n)
}

/// Ξ_j^{ℓ,m} restricted to the range of E_j: the matrix Ξ_j^{ℓ,m} Q_j
/// together with the norm that normalized it.
#[derive(Clone, Debug)]
pub struct XiBlock {
    pub label: (usize, isize),
    /// ‖(E_{j+m} ⊗ Π_ℓ) V E_j‖ as measured (0 for declared-zero blocks whose
    /// target irrep does not exist).
    pub norm: f64,
    /// `None` for the zero operator.
    pub restricted: Option<DenseMatrix>,
    pub declared_zero: bool,
}

/// V and its Ξ decomposition on one level of the scheme, all restricted to
/// the irrep bases Q_j.
#[derive(Clone, Debug)]
pub struct LevelLift {
    pub n: usize,
    pub size: usize,
    /// V Q_j for each j.
    pub v_restricted: Vec<DenseMatrix>,
    /// Four blocks per j, ordered as [`XI_LABELS`].
    pub xi: Vec<Vec<XiBlock>>,
}

impl LevelLift {
    pub fn build(basis: &SubsetBasis, family: &ProjectorFamily) -> Result<Self> {
        let (n, size) = (basis.n(), basis.k());
        let mut v_restricted = Vec::with_capacity(size + 1);
        let mut xi = Vec::with_capacity(size + 1);
        for j in 0..=size {
            let q = &family.bases[j];
            // (V Q_j)[(x,i), c] = ψ_x[i] Q_j[x, c]
            let vq = lift(q, LiftKind::RowPsi, basis)?;
            let mut blocks = Vec::with_capacity(4);
            for label in XI_LABELS {
                let (ell, m) = label;
                let zero = declared_zero(j, size, label);
                let target = j as isize + m;
                if target < 0 || target > size as isize {
                    blocks.push(XiBlock {
                        label,
                        norm: 0.0,
                        restricted: None,
                        declared_zero: zero,
                    });
                    continue;
                }
                let raw = project(&family.bases[target as usize], ell, &vq, n);
                let norm = spectral_norm(&raw)?;
                let restricted = (!zero && norm >= DEGENERATE_TOL).then(|| raw.scale(1.0 / norm));
                blocks.push(XiBlock {
                    label,
                    norm,
                    restricted,
                    declared_zero: zero,
                });
            }
            v_restricted.push(vq);
            xi.push(blocks);
        }
        Ok(Self {
            n,
            size,
            v_restricted,
            xi,
        })
    }

    pub fn block(&self, j: usize, label: (usize, isize)) -> Option<&XiBlock> {
        let idx = XI_LABELS.iter().position(|&l| l == label)?;
        self.xi.get(j).map(|b| &b[idx])
    }
}

/// Ξ_j^{ℓ,m} over k-subsets as a full (C(n,k)·n) × C(n,k) matrix; the zero
/// matrix for the border cases and out-of-range j.
pub fn build_xi(inst: &ProblemInstance, j: usize, ell: usize, m: isize) -> Result<DenseMatrix> {
    let label = (ell, m);
    if !XI_LABELS.contains(&label) {
        return usage(format!("(ℓ,m) = ({ell},{m}) is not one of the four transporter labels"));
    }
    let basis = subset_basis(inst.n, inst.k)?;
    let dim = basis.len();
    if j > inst.k {
        return Ok(DenseMatrix::zeros(dim * inst.n, dim));
    }
    let family = irrep_projectors(inst.n, inst.k)?;
    let level = LevelLift::build(&basis, &family)?;
    let block = level.block(j, label).expect("label and j checked");
    Ok(match &block.restricted {
        Some(r) => r.mul_transpose(&family.bases[j]),
        None => DenseMatrix::zeros(dim * inst.n, dim),
    })
}
