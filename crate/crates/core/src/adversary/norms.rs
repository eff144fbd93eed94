use super::coefficients::{
    dot4, norm4, phi_table, tilde_table, GammaSchedule, PhiTable, ProblemInstance,
};
use crate::error::{usage, Result};
use crate::johnson::Transporter;
use crate::linalg::{spectral_norm, DenseMatrix};

fn check_schedule(sched: &GammaSchedule, inst: &ProblemInstance) -> Result<()> {
    if sched.k != inst.k {
        return usage(format!(
            "schedule covers j ≤ {} but the instance has k = {}",
            sched.k, inst.k
        ));
    }
    Ok(())
}

/// Γ = Σ_j γ_j Φ_j.
pub fn assemble_adversary(sched: &GammaSchedule, transporters: &[Transporter]) -> Result<DenseMatrix> {
    if transporters.len() != sched.k + 1 {
        return usage(format!(
            "need {} transporters for the schedule, got {}",
            sched.k + 1,
            transporters.len()
        ));
    }
    let (rows, cols) = transporters[0].matrix.shape();
    let mut gamma = DenseMatrix::zeros(rows, cols);
    for (j, t) in transporters.iter().enumerate() {
        if t.j != j || t.matrix.shape() != (rows, cols) {
            return usage(format!("transporter {j} has the wrong index or shape"));
        }
        gamma.add_scaled(sched.at(j), &t.matrix);
    }
    Ok(gamma)
}

/// Coefficients of Γ∘Ψ in the transporter basis, given those of Γ.
pub fn hadamard_psi_step(coeffs: &[f64], table: &PhiTable) -> Result<Vec<f64>> {
    let k1 = table.phi.len();
    if coeffs.len() != k1 {
        return usage(format!("need {k1} coefficients, got {}", coeffs.len()));
    }
    let at = |j: usize| coeffs.get(j).copied().unwrap_or(0.0);
    Ok((0..k1)
        .map(|j| {
            let (p, q) = (&table.phi[j], &table.phi_prime[j]);
            let below = if j == 0 { 0.0 } else { at(j - 1) * p[0] * q[0] };
            below + at(j) * (p[1] * q[1] + p[2] * q[2]) + at(j + 1) * p[3] * q[3]
        })
        .collect())
}

/// Coefficients of Γ∘Ψ^∘ℓ, starting from the schedule.
pub fn psi_power_coefficients(sched: &GammaSchedule, table: &PhiTable, ell: usize) -> Result<Vec<f64>> {
    let mut c = sched.gammas.clone();
    for _ in 0..ell {
        c = hadamard_psi_step(&c, table)?;
    }
    Ok(c)
}

/// D_j = ⟨φ_j, φ'_j⟩.
pub fn overlap_d(inst: &ProblemInstance, j: usize) -> Result<f64> {
    if j > inst.k {
        return usage(format!("overlap index j={j} exceeds k={}", inst.k));
    }
    let table = phi_table(inst);
    Ok(dot4(&table.phi[j], &table.phi_prime[j]))
}

/// D^ℓ/2 with D the smallest overlap D_j over j ≤ min(ℓ, k).
pub fn psi_power_lower_bound(inst: &ProblemInstance, t: f64, ell: usize) -> Result<f64> {
    if t < 2.0 * ell as f64 {
        return usage(format!("the Ψ-power bound needs t ≥ 2ℓ, got t={t}, ℓ={ell}"));
    }
    let table = phi_table(inst);
    let d = (0..=ell.min(inst.k))
        .map(|j| dot4(&table.phi[j], &table.phi_prime[j]))
        .fold(f64::INFINITY, f64::min);
    Ok(d.powi(ell as i32) / 2.0)
}

fn diff4(a: &[f64; 4], b: &[f64; 4]) -> [f64; 4] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

fn scale4(c: f64, a: &[f64; 4]) -> [f64; 4] {
    [c * a[0], c * a[1], c * a[2], c * a[3]]
}

/// (‖Γ∘Δ_ψ‖, ‖Γ∘Δ_ψ*‖).
///
/// The first maximum also runs over j = k+1, where only γ_k φ'_{k+1,0}
/// survives.
pub fn norm_delta_state_gen(sched: &GammaSchedule, inst: &ProblemInstance) -> Result<(f64, f64)> {
    check_schedule(sched, inst)?;
    let table = phi_table(inst);
    let tilde = tilde_table(sched, &table);
    let mut forward = norm4(&tilde.tilde_prime_above);
    let mut adjoint: f64 = 0.0;
    for j in 0..=inst.k {
        let g = sched.at(j);
        forward = forward.max(norm4(&diff4(&tilde.tilde_prime[j], &scale4(g, &table.phi[j]))));
        adjoint = adjoint.max(norm4(&diff4(&scale4(g, &table.phi_prime[j]), &tilde.tilde[j])));
    }
    Ok((forward, adjoint))
}

fn outer_diff(a: &[f64; 4], b: &[f64; 4], c: &[f64; 4], d: &[f64; 4]) -> DenseMatrix {
    DenseMatrix::from_fn(4, 4, |r, s| a[r] * b[s] - c[r] * d[s])
}

/// ‖Γ∘Δ_ψψ*‖ as the largest spectral norm of φ'_j φ̃'_jᵀ − φ̃_j φ_jᵀ,
/// j = 0 … k+1.
pub fn norm_delta_reflection(sched: &GammaSchedule, inst: &ProblemInstance) -> Result<f64> {
    check_schedule(sched, inst)?;
    let table = phi_table(inst);
    let tilde = tilde_table(sched, &table);
    let mut worst = norm4(&table.phi_prime_above) * norm4(&tilde.tilde_prime_above);
    for j in 0..=inst.k {
        let m = outer_diff(&table.phi_prime[j], &tilde.tilde_prime[j], &tilde.tilde[j], &table.phi[j]);
        worst = worst.max(spectral_norm(&m)?);
    }
    Ok(worst)
}

/// ‖Γ∘Δ_i‖, the same for every i ∈ [n].
pub fn norm_delta_membership(sched: &GammaSchedule, inst: &ProblemInstance) -> Result<f64> {
    check_schedule(sched, inst)?;
    let (n, k, kp) = (inst.n as f64, inst.k as f64, inst.k_prime as f64);
    let mut worst: f64 = 0.0;
    for jj in 0..=inst.k {
        let j = jj as f64;
        let (g0, g1) = (sched.at(jj), sched.at(jj + 1));
        let a = ((k - j) * (n - kp - j)).sqrt();
        let b = ((kp - j) * (n - k - j)).sqrt();
        let branch = (a * g0 - b * g1).abs().max((b * g0 - a * g1).abs());
        worst = worst.max(branch / (n - 2.0 * j));
    }
    Ok(worst)
}
