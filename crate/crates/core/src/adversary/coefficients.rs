use serde::Serialize;

use crate::error::{usage, Result};

/// One counting instance: is the hidden subset of `[n]` of size k or k'?
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProblemInstance {
    pub n: usize,
    pub k: usize,
    pub k_prime: usize,
    /// Relative gap (k' − k)/k.
    pub eps: f64,
}

impl ProblemInstance {
    /// Requires 1 ≤ k < k' and n ≥ 2k' + 1.
    pub fn new(n: usize, k: usize, k_prime: usize) -> Result<Self> {
        if k == 0 || k >= k_prime {
            return usage(format!("need 1 ≤ k < k', got k={k}, k'={k_prime}"));
        }
        if n < 2 * k_prime + 1 {
            return usage(format!("need n ≥ 2k'+1, got n={n}, k'={k_prime}"));
        }
        Ok(Self::unchecked(n, k, k_prime))
    }

    /// The ε = 0 instance with k' = k. Only meaningful for the closed-form
    /// formulas, where it exposes the limit behaviour.
    pub fn degenerate(n: usize, k: usize) -> Result<Self> {
        if k == 0 || n < 2 * k + 1 {
            return usage(format!("need k ≥ 1 and n ≥ 2k+1, got n={n}, k={k}"));
        }
        Ok(Self::unchecked(n, k, k))
    }

    fn unchecked(n: usize, k: usize, k_prime: usize) -> Self {
        Self {
            n,
            k,
            k_prime,
            eps: (k_prime - k) as f64 / k as f64,
        }
    }

    /// n ≥ 5k and 1/k ≤ ε ≤ 1.
    pub fn in_theorem_regime(&self) -> bool {
        self.n >= 5 * self.k && self.eps * self.k as f64 >= 1.0 - 1e-12 && self.eps <= 1.0
    }
}

/// The 4-vector φ_j for subsets of size `size` in `[n]`; valid for
/// j ≤ size and n ≥ 2·size + 1.
pub fn phi_vector(n: usize, size: usize, j: usize) -> [f64; 4] {
    let (n, k, j) = (n as f64, size as f64, j as f64);
    let c0 = (j * (k - j + 1.0) * (n - k - j + 1.0)
        / ((n - 2.0 * j + 2.0) * (n - 2.0 * j + 1.0) * k))
        .sqrt();
    let c1 = (k / n).sqrt();
    let c2 = (n - 2.0 * k) / (n * k).sqrt()
        * (j * (n - j + 1.0) / ((n - 2.0 * j + 2.0) * (n - 2.0 * j))).sqrt();
    let c3 = ((n - j + 1.0) * (k - j) * (n - k - j)
        / ((n - 2.0 * j + 1.0) * (n - 2.0 * j) * k))
        .sqrt();
    [c0, c1, c2, c3]
}

pub fn dot4(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm4(a: &[f64; 4]) -> f64 {
    dot4(a, a).sqrt()
}

/// φ_j and φ'_j for j = 0 … k.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiTable {
    pub phi: Vec<[f64; 4]>,
    pub phi_prime: Vec<[f64; 4]>,
    /// φ'_{k+1}. Its first component couples Φ_k to the irrep just above
    /// the top one on the k-side, which matters whenever γ_k ≠ 0.
    pub phi_prime_above: [f64; 4],
}

pub fn phi_table(inst: &ProblemInstance) -> PhiTable {
    let k = inst.k;
    let phi = (0..=k).map(|j| phi_vector(inst.n, k, j)).collect();
    let phi_prime = (0..=k).map(|j| phi_vector(inst.n, inst.k_prime, j)).collect();
    let phi_prime_above = if inst.k_prime > k {
        phi_vector(inst.n, inst.k_prime, k + 1)
    } else {
        [0.0; 4]
    };
    PhiTable {
        phi,
        phi_prime,
        phi_prime_above,
    }
}

/// γ_j = max(1 − j/t, 0) for j = 0 … k, with γ_{k+1} = 0.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaSchedule {
    pub t: f64,
    pub k: usize,
    pub gammas: Vec<f64>,
}

impl GammaSchedule {
    /// γ_j, zero past k.
    pub fn at(&self, j: usize) -> f64 {
        self.gammas.get(j).copied().unwrap_or(0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.gammas.iter().fold(0.0, |m, g| m.max(g.abs()))
    }
}

pub fn gamma_schedule(t: f64, k: usize) -> Result<GammaSchedule> {
    if !(t >= 1.0) || !t.is_finite() {
        return usage(format!("schedule cutoff t must be ≥ 1, got {t}"));
    }
    let gammas = (0..=k).map(|j| (1.0 - j as f64 / t).max(0.0)).collect();
    Ok(GammaSchedule { t, k, gammas })
}

/// γ-weighted 4-vectors φ̃_j = (γ_{j−1}φ_{j,0}, γ_jφ_{j,1}, γ_jφ_{j,2}, γ_{j+1}φ_{j,3})
/// and the primed analogue, j = 0 … k, plus φ̃'_{k+1}.
#[derive(Clone, Debug, PartialEq)]
pub struct TildeTable {
    pub tilde: Vec<[f64; 4]>,
    pub tilde_prime: Vec<[f64; 4]>,
    pub tilde_prime_above: [f64; 4],
}

fn weight(sched: &GammaSchedule, phi: &[f64; 4], j: usize) -> [f64; 4] {
    let below = if j == 0 { 0.0 } else { sched.at(j - 1) * phi[0] };
    [below, sched.at(j) * phi[1], sched.at(j) * phi[2], sched.at(j + 1) * phi[3]]
}

pub fn tilde_table(sched: &GammaSchedule, table: &PhiTable) -> TildeTable {
    let tilde = table.phi.iter().enumerate().map(|(j, p)| weight(sched, p, j)).collect();
    let tilde_prime = table
        .phi_prime
        .iter()
        .enumerate()
        .map(|(j, p)| weight(sched, p, j))
        .collect();
    let tilde_prime_above = weight(sched, &table.phi_prime_above, table.phi.len());
    TildeTable {
        tilde,
        tilde_prime,
        tilde_prime_above,
    }
}
