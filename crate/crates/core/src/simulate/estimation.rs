use std::f64::consts::PI;

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;

use super::oracle::{QueryTally, ReflectionCharge};
use crate::error::{usage, Result};

/// |(1/M) Σ_m e^{2πimδ/M}|² = (sin πδ / (M sin(πδ/M)))², periodic in δ with
/// period M and equal to 1 at multiples of M.
pub fn fejer_kernel(delta: f64, m: usize) -> f64 {
    let mf = m as f64;
    let d = delta - mf * (delta / mf).round();
    if d.abs() < 1e-6 {
        let s = PI * d;
        return 1.0 - s * s * (mf * mf - 1.0) / (3.0 * mf * mf);
    }
    let r = (PI * d).sin() / (mf * (PI * d / mf).sin());
    r * r
}

/// Outcome distribution of M-point phase estimation run on the Grover
/// rotation by 2θ, started from the source state. The source has weight ½ on
/// each eigenvector e^{±2iθ}, so P(y) = ½F(y − Mθ/π) + ½F(y + Mθ/π).
pub fn phase_estimation_distribution(theta: f64, m: usize) -> Result<Vec<f64>> {
    if m < 2 {
        return usage(format!("phase estimation needs at least 2 grid points, got {m}"));
    }
    if !(0.0..=PI / 2.0).contains(&theta) {
        return usage(format!("rotation angle must lie in [0, π/2], got {theta}"));
    }
    let centre = m as f64 * theta / PI;
    Ok((0..m)
        .map(|y| {
            let y = y as f64;
            0.5 * fejer_kernel(y - centre, m) + 0.5 * fejer_kernel(y + centre, m)
        })
        .collect())
}

/// Estimated angle from a phase-estimation outcome, folded into [0, π/2].
pub fn angle_from_outcome(y: usize, m: usize) -> f64 {
    PI * y.min(m - y) as f64 / m as f64
}

/// Runs M-point phase estimation on the rotation with marked amplitude sinθ
/// and returns the outcome. The M−1 controlled iterates are charged.
pub fn sample_phase_estimation(
    theta: f64,
    m: usize,
    charge: ReflectionCharge,
    tally: &mut QueryTally,
    rng: &mut impl Rng,
) -> Result<usize> {
    let probs = phase_estimation_distribution(theta, m)?;
    let dist = WeightedIndex::new(&probs).map_err(|e| crate::Error::Degenerate(e.to_string()))?;
    charge.charge(tally, (m - 1) as u64);
    Ok(dist.sample(rng))
}

/// Amplitude estimation of `a_true` with M = 2^precision_bits grid points.
/// Returns â = sin²(πy/M).
pub fn amplitude_estimate(a_true: f64, precision_bits: u32, rng: &mut impl Rng) -> Result<(f64, QueryTally)> {
    if !(a_true > 0.0 && a_true < 1.0) {
        return usage(format!("amplitude must lie in (0, 1), got {a_true}"));
    }
    if !(1..=20).contains(&precision_bits) {
        return usage(format!("precision bits must lie in 1..=20, got {precision_bits}"));
    }
    let m = 1usize << precision_bits;
    let mut tally = QueryTally::default();
    let y = sample_phase_estimation(a_true.sqrt().asin(), m, ReflectionCharge::Reflection, &mut tally, rng)?;
    let s = (PI * y as f64 / m as f64).sin();
    Ok((s * s, tally))
}
