use super::eigen::{symmetric_eig, symmetric_eigenvalues};
use super::matrix::{dot, DenseMatrix};
use crate::error::{usage, Result};

/// Default relative rank tolerance for column bases.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Largest singular value, via the eigenvalues of the smaller Gram matrix.
pub fn spectral_norm(m: &DenseMatrix) -> Result<f64> {
    if m.is_empty() {
        return usage("spectral norm of an empty matrix");
    }
    let gram = if m.rows() <= m.cols() {
        m.gram_rows()
    } else {
        m.gram_cols()
    };
    let top = symmetric_eigenvalues(&gram)?[0];
    Ok(top.max(0.0).sqrt())
}

/// `‖a·bᵀ‖` without forming the product.
///
/// Useful when `a` and `b` are tall and thin: only r×r matrices are
/// decomposed, where r is their shared column count.
pub fn spectral_norm_of_product(a: &DenseMatrix, b: &DenseMatrix) -> Result<f64> {
    if a.cols() != b.cols() {
        return usage(format!(
            "factor column counts differ: {} vs {}",
            a.cols(),
            b.cols()
        ));
    }
    if a.is_empty() || b.is_empty() {
        return usage("spectral norm of an empty product");
    }
    let r = a.cols();
    if r >= a.rows().min(b.rows()) {
        return spectral_norm(&a.mul_transpose(b));
    }
    // ‖a bᵀ‖² = λmax(F (bᵀb) Fᵀ) where aᵀa = Fᵀ F
    let eig = symmetric_eig(&a.gram_cols())?;
    let f = DenseMatrix::from_fn(r, r, |i, c| eig.values[i].max(0.0).sqrt() * eig.vectors[(c, i)]);
    let sb = b.gram_cols();
    let k = f.matmul(&sb).mul_transpose(&f);
    let k = DenseMatrix::from_fn(r, r, |i, j| 0.5 * (k[(i, j)] + k[(j, i)]));
    let top = symmetric_eigenvalues(&k)?[0];
    Ok(top.max(0.0).sqrt())
}

/// Orthonormal basis of the column space of `m`.
///
/// Singular values come from one-sided (Hestenes) Jacobi on the columns, so
/// they are accurate to working precision relative to the largest one and
/// `rank_tol` can sit far below √ε. A column is kept iff its singular value
/// exceeds `rank_tol` times the largest. Columns are ordered by decreasing
/// singular value.
pub fn orthonormal_column_basis(m: &DenseMatrix, rank_tol: f64) -> Result<DenseMatrix> {
    if m.is_empty() {
        return usage("column basis of an empty matrix");
    }
    if !(rank_tol > 0.0) {
        return usage("rank_tol must be positive");
    }
    let (rows, cols) = m.shape();
    // columns of m as contiguous rows
    let mut t = m.transpose();
    let mut norms: Vec<f64> = (0..cols).map(|c| dot(t.row(c), t.row(c))).collect();
    let eps = 1e-15;
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let alpha = norms[p];
                let beta = norms[q];
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma = dot(t.row(p), t.row(q));
                if gamma.abs() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let tan = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + tan * tan).sqrt();
                let s = c * tan;
                let data = t.data_mut();
                let (lo, hi) = data.split_at_mut(q * rows);
                let tp = &mut lo[p * rows..(p + 1) * rows];
                let tq = &mut hi[..rows];
                let (mut np, mut nq) = (0.0, 0.0);
                for k in 0..rows {
                    let a = tp[k];
                    let b = tq[k];
                    let na = c * a - s * b;
                    let nb = s * a + c * b;
                    tp[k] = na;
                    tq[k] = nb;
                    np += na * na;
                    nq += nb * nb;
                }
                norms[p] = np;
                norms[q] = nq;
            }
        }
        if !rotated {
            break;
        }
    }
    let sigma: Vec<f64> = (0..cols).map(|c| dot(t.row(c), t.row(c)).sqrt()).collect();
    let top = sigma.iter().cloned().fold(0.0, f64::max);
    let mut keep: Vec<usize> = (0..cols)
        .filter(|&c| top > 0.0 && sigma[c] > rank_tol * top)
        .collect();
    keep.sort_by(|&a, &b| sigma[b].total_cmp(&sigma[a]).then(a.cmp(&b)));
    Ok(DenseMatrix::from_fn(rows, keep.len(), |r, c| {
        t[(keep[c], r)] / sigma[keep[c]]
    }))
}
