use std::collections::HashMap;

use crate::error::{usage, Result};
use crate::linalg::DenseMatrix;

/// Largest ground set the enumerators accept.
pub const MAX_GROUND_SET: usize = 20;

/// Bitmask with bit `e − 1` set for each element `e` of a subset of `[n]`.
pub type Mask = u32;

pub fn mask_of(elements: &[usize]) -> Mask {
    elements.iter().fold(0, |m, &e| m | (1 << (e - 1)))
}

/// Sorted 1-based elements of a mask.
pub fn elements_of(mask: Mask) -> Vec<usize> {
    (0..32).filter(|b| mask & (1 << b) != 0).map(|b| b + 1).collect()
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// All k-subsets of `[n]` in lexicographic order with a reverse index.
#[derive(Clone, Debug)]
pub struct SubsetBasis {
    n: usize,
    k: usize,
    order: Vec<Mask>,
    index: HashMap<Mask, usize>,
}

impl SubsetBasis {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn masks(&self) -> &[Mask] {
        &self.order
    }

    pub fn mask(&self, i: usize) -> Mask {
        self.order[i]
    }

    pub fn elements(&self, i: usize) -> Vec<usize> {
        elements_of(self.order[i])
    }

    pub fn index_of(&self, mask: Mask) -> Option<usize> {
        self.index.get(&mask).copied()
    }

    pub fn index_of_elements(&self, elements: &[usize]) -> Option<usize> {
        if elements.iter().any(|&e| e == 0 || e > self.n) {
            return None;
        }
        self.index_of(mask_of(elements))
    }

    /// Position map of the permutation `perm` (1-based images, `perm[e-1]`)
    /// acting on subsets: `out[i]` is the index of `perm(subset i)`.
    pub fn permutation_action(&self, perm: &[usize]) -> Vec<usize> {
        self.order
            .iter()
            .map(|&m| {
                let image: Vec<usize> = elements_of(m).iter().map(|&e| perm[e - 1]).collect();
                self.index_of_elements(&image).expect("permutation maps k-subsets to k-subsets")
            })
            .collect()
    }
}

/// Enumerates the k-subsets of `[n]` lexicographically.
pub fn subset_basis(n: usize, k: usize) -> Result<SubsetBasis> {
    if n > MAX_GROUND_SET {
        return usage(format!("ground set size {n} exceeds cap {MAX_GROUND_SET}"));
    }
    if k > n {
        return usage(format!("subset size {k} exceeds ground set size {n}"));
    }
    let mut order = Vec::with_capacity(binomial(n, k));
    let mut current: Vec<usize> = (1..=k).collect();
    loop {
        order.push(mask_of(&current));
        // advance to the lexicographic successor
        let mut i = k;
        while i > 0 && current[i - 1] == n - k + i {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        current[i - 1] += 1;
        for t in i..k {
            current[t] = current[t - 1] + 1;
        }
    }
    let index = order.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    Ok(SubsetBasis { n, k, order, index })
}

/// `W[x, s] = 1` iff `s ⊆ x`, rows over k-subsets and columns over j-subsets.
pub fn inclusion_matrix(n: usize, k: usize, j: usize) -> Result<DenseMatrix> {
    if j > k || k > n {
        return usage(format!("inclusion matrix needs j ≤ k ≤ n, got ({n},{k},{j})"));
    }
    let rows = subset_basis(n, k)?;
    let cols = subset_basis(n, j)?;
    Ok(inclusion_between(&rows, &cols))
}

/// Inclusion matrix between two explicit bases: 1 where the column subset is
/// contained in the row subset.
pub fn inclusion_between(rows: &SubsetBasis, cols: &SubsetBasis) -> DenseMatrix {
    DenseMatrix::from_fn(rows.len(), cols.len(), |r, c| {
        let (x, s) = (rows.mask(r), cols.mask(c));
        if x & s == s {
            1.0
        } else {
            0.0
        }
    })
}
