use crate::adversary::ProblemInstance;
use crate::error::{usage, Result};
use crate::johnson::{binomial, subset_basis, Mask, SubsetBasis};
use crate::linalg::DenseMatrix;

/// The six ways of replacing each entry A[r,c] by a ψ-valued block.
///
/// `Row*` kinds use ψ of the row subset, `Col*` kinds ψ of the column
/// subset. `*Psi` blocks are n×1, `*PsiAdj` are 1×n and `*PsiPsiAdj` are n×n.
/// Lifted indices are (subset, element) pairs, subset-major.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LiftKind {
    RowPsi,
    RowPsiAdj,
    RowPsiPsiAdj,
    ColPsi,
    ColPsiAdj,
    ColPsiPsiAdj,
}

impl LiftKind {
    pub const ALL: [LiftKind; 6] = [
        LiftKind::RowPsi,
        LiftKind::RowPsiAdj,
        LiftKind::RowPsiPsiAdj,
        LiftKind::ColPsi,
        LiftKind::ColPsiAdj,
        LiftKind::ColPsiPsiAdj,
    ];

    fn uses_rows(self) -> bool {
        matches!(self, LiftKind::RowPsi | LiftKind::RowPsiAdj | LiftKind::RowPsiPsiAdj)
    }

    fn expands_rows(self) -> bool {
        !matches!(self, LiftKind::RowPsiAdj | LiftKind::ColPsiAdj)
    }

    fn expands_cols(self) -> bool {
        !matches!(self, LiftKind::RowPsi | LiftKind::ColPsi)
    }
}

/// Uniform superposition over the elements of a subset, as an n-vector.
pub fn psi_vector(mask: Mask, n: usize) -> Vec<f64> {
    let size = mask.count_ones() as f64;
    (0..n)
        .map(|i| if mask & (1 << i) != 0 { 1.0 / size.sqrt() } else { 0.0 })
        .collect()
}

/// Lifts `m` by `kind`, taking ψ from `side` (row subsets for `Row*`
/// kinds, column subsets for `Col*` kinds).
pub fn lift(m: &DenseMatrix, kind: LiftKind, side: &SubsetBasis) -> Result<DenseMatrix> {
    let (rows, cols) = m.shape();
    let indexed = if kind.uses_rows() { rows } else { cols };
    if indexed != side.len() {
        return usage(format!(
            "{kind:?} lift needs {} {} to match the basis, got {indexed}",
            side.len(),
            if kind.uses_rows() { "rows" } else { "columns" }
        ));
    }
    let n = side.n();
    let psis: Vec<Vec<f64>> = side.masks().iter().map(|&s| psi_vector(s, n)).collect();
    let rn = if kind.expands_rows() { n } else { 1 };
    let cn = if kind.expands_cols() { n } else { 1 };
    let mut out = DenseMatrix::zeros(rows * rn, cols * cn);
    let out_cols = cols * cn;
    let data = out.data_mut();
    for r in 0..rows {
        for c in 0..cols {
            let a = m[(r, c)];
            if a == 0.0 {
                continue;
            }
            let psi = if kind.uses_rows() { &psis[r] } else { &psis[c] };
            for i in 0..rn {
                let pi = if rn == 1 { 1.0 } else { psi[i] };
                if pi == 0.0 {
                    continue;
                }
                let base = (r * rn + i) * out_cols + c * cn;
                for i2 in 0..cn {
                    let pj = if cn == 1 { 1.0 } else { psi[i2] };
                    data[base + i2] = a * pi * pj;
                }
            }
        }
    }
    Ok(out)
}

/// Ψ[x,y] = ⟨ψ_x, ψ_y⟩ = |x∩y|/√(k k').
pub fn psi_gram(inst: &ProblemInstance) -> Result<DenseMatrix> {
    let x = subset_basis(inst.n, inst.k)?;
    let y = subset_basis(inst.n, inst.k_prime)?;
    Ok(psi_gram_between(&x, &y))
}

pub(crate) fn psi_gram_between(x: &SubsetBasis, y: &SubsetBasis) -> DenseMatrix {
    let scale = 1.0 / ((x.k() * y.k()) as f64).sqrt();
    DenseMatrix::from_fn(x.len(), y.len(), |r, c| {
        (x.mask(r) & y.mask(c)).count_ones() as f64 * scale
    })
}

/// Δ_i[x,y] = 1 iff exactly one of x, y contains i (1-based).
pub fn delta_membership_mask(inst: &ProblemInstance, i: usize) -> Result<DenseMatrix> {
    let x = subset_basis(inst.n, inst.k)?;
    let y = subset_basis(inst.n, inst.k_prime)?;
    membership_mask_between(&x, &y, i)
}

pub(crate) fn membership_mask_between(x: &SubsetBasis, y: &SubsetBasis, i: usize) -> Result<DenseMatrix> {
    if i == 0 || i > x.n() {
        return usage(format!("element {i} outside [1, {}]", x.n()));
    }
    let bit: Mask = 1 << (i - 1);
    Ok(DenseMatrix::from_fn(x.len(), y.len(), |r, c| {
        if (x.mask(r) & bit != 0) != (y.mask(c) & bit != 0) {
            1.0
        } else {
            0.0
        }
    }))
}

/// Π₀ = uuᵀ with u uniform, and Π₁ = I − Π₀.
pub fn build_projection_pair(n: usize) -> Result<(DenseMatrix, DenseMatrix)> {
    if n < 2 {
        return usage(format!("projection pair needs n ≥ 2, got {n}"));
    }
    let p0 = DenseMatrix::from_fn(n, n, |_, _| 1.0 / n as f64);
    let p1 = DenseMatrix::identity(n).sub(&p0);
    Ok((p0, p1))
}

/// Largest lifted dimension any check builds for this instance: C(n,k')·n.
pub fn lifted_dimension(inst: &ProblemInstance) -> usize {
    binomial(inst.n, inst.k_prime) * inst.n
}
