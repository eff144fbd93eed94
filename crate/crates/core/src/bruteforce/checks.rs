use std::sync::OnceLock;
use std::time::Instant;

use serde::Serialize;

use super::lifts::{lift, lifted_dimension, membership_mask_between, psi_gram_between, LiftKind};
use super::xi::{kron_identity_apply, LevelLift, XI_LABELS};
use crate::adversary::{
    assemble_adversary, dot4, gamma_schedule, hadamard_psi_step, norm_delta_membership,
    norm_delta_reflection, norm_delta_state_gen, phi_table, phi_vector, psi_power_coefficients,
    psi_power_lower_bound, tilde_table, PhiTable, ProblemInstance,
};
use crate::error::{usage, Error, Result};
use crate::johnson::{basis_change_tables, reference_vectors, JohnsonPair, ProjectorFamily, SubsetBasis};
use crate::linalg::{dot, spectral_norm, spectral_norm_of_product, DenseMatrix};

/// Largest lifted dimension C(n,k')·n the checks will build.
pub const SIZE_CAP: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CheckId {
    PsiCoeffs,
    DeltaGen,
    DeltaRefl,
    DeltaMemb,
    VDecomp,
    PhiCommute,
    Tables,
    Projectors,
    NormGamma,
    PsiPower,
}

/// Whether a check compares spectral norms or exact algebraic identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ToleranceClass {
    Norm,
    Exact,
}

impl CheckId {
    pub const ALL: [CheckId; 10] = [
        CheckId::PsiCoeffs,
        CheckId::DeltaGen,
        CheckId::DeltaRefl,
        CheckId::DeltaMemb,
        CheckId::VDecomp,
        CheckId::PhiCommute,
        CheckId::Tables,
        CheckId::Projectors,
        CheckId::NormGamma,
        CheckId::PsiPower,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckId::PsiCoeffs => "PSI_COEFFS",
            CheckId::DeltaGen => "DELTA_GEN",
            CheckId::DeltaRefl => "DELTA_REFL",
            CheckId::DeltaMemb => "DELTA_MEMB",
            CheckId::VDecomp => "V_DECOMP",
            CheckId::PhiCommute => "PHI_COMMUTE",
            CheckId::Tables => "TABLES",
            CheckId::Projectors => "PROJECTORS",
            CheckId::NormGamma => "NORM_GAMMA",
            CheckId::PsiPower => "PSI_POWER",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.as_str().eq_ignore_ascii_case(s))
    }

    /// The identity or inequality the check establishes.
    pub fn statement(self) -> &'static str {
        match self {
            CheckId::PsiCoeffs => "Γ∘Ψ = Σ_j ⟨φ_j, φ̃'_j⟩ Φ_j = Σ_j ⟨φ'_j, φ̃_j⟩ Φ_j",
            CheckId::DeltaGen => {
                "‖Γ∘Δ_ψ‖ = max_j ‖φ̃'_j − γ_j φ_j‖ and ‖Γ∘Δ_ψ*‖ = max_j ‖γ_j φ'_j − φ̃_j‖"
            }
            CheckId::DeltaRefl => "‖Γ∘Δ_ψψ*‖ = max_j ‖φ'_j φ̃'_jᵀ − φ̃_j φ_jᵀ‖",
            CheckId::DeltaMemb => "‖Γ∘Δ_i‖ closed form, identical for all i ∈ [n]",
            CheckId::VDecomp => "V = Σ_j Σ_(ℓ,m) φ_{j,·} Ξ_j^{ℓ,m}",
            CheckId::PhiCommute => "(Φ_{j+m} ⊗ I) Ξ̂_j^{ℓ,m} = Ξ_j^{ℓ,m} Φ_j",
            CheckId::Tables => "one- and two-fixed-element basis-change tables",
            CheckId::Projectors => "E_j orthogonal projectors summing to I with rank C(n,j) − C(n,j−1)",
            CheckId::NormGamma => "‖Γ‖ = max_j |γ_j|",
            CheckId::PsiPower => "‖Γ∘Ψ^∘ℓ‖ ≥ D^ℓ/2",
        }
    }

    pub fn tolerance_class(self) -> ToleranceClass {
        match self {
            CheckId::DeltaGen
            | CheckId::DeltaRefl
            | CheckId::DeltaMemb
            | CheckId::NormGamma
            | CheckId::PsiPower => ToleranceClass::Norm,
            _ => ToleranceClass::Exact,
        }
    }

    /// Checks whose outcome does not depend on (t, ℓ).
    pub fn schedule_free(self) -> bool {
        matches!(
            self,
            CheckId::VDecomp | CheckId::PhiCommute | CheckId::Tables | CheckId::Projectors
        )
    }

    fn slot(self) -> usize {
        Self::ALL.iter().position(|&c| c == self).expect("listed")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub norm: f64,
    pub exact: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            norm: 1e-8,
            exact: 1e-10,
        }
    }
}

impl Tolerances {
    pub fn for_check(&self, check: CheckId) -> f64 {
        match check.tolerance_class() {
            ToleranceClass::Norm => self.norm,
            ToleranceClass::Exact => self.exact,
        }
    }
}

/// Closed-form vs explicit comparison for one (check, instance, t, ℓ).
///
/// For identity checks `closed_form` is the exact value 0 and `brute_force`
/// the measured residual.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscrepancyReport {
    pub check: CheckId,
    pub n: usize,
    pub k: usize,
    pub k_prime: usize,
    pub t: f64,
    pub ell: usize,
    pub closed_form: f64,
    pub brute_force: f64,
    pub discrepancy: f64,
    /// Largest minus smallest value across i ∈ [n] (membership check only).
    pub spread: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub millis: u128,
}

#[derive(Clone, Copy, Debug)]
struct Measured {
    closed_form: f64,
    brute_force: f64,
    discrepancy: f64,
    spread: Option<f64>,
}

impl Measured {
    fn residual(r: f64) -> Self {
        Self {
            closed_form: 0.0,
            brute_force: r,
            discrepancy: r,
            spread: None,
        }
    }
}

/// Everything about one instance that does not depend on the schedule,
/// built once and shared by all checks and all t.
pub struct InstanceContext {
    pub inst: ProblemInstance,
    pub pair: JohnsonPair,
    pub table: PhiTable,
    /// Ψ[x,y] = ⟨ψ_x, ψ_y⟩.
    pub psi: DenseMatrix,
    x_lift: OnceLock<Result<LevelLift>>,
    y_lift: OnceLock<Result<LevelLift>>,
    fixed: [OnceLock<Result<Measured>>; 10],
}

impl InstanceContext {
    pub fn new(inst: ProblemInstance) -> Result<Self> {
        let dim = lifted_dimension(&inst);
        if dim > SIZE_CAP {
            return Err(Error::SizeCap { dim, cap: SIZE_CAP });
        }
        let pair = JohnsonPair::new(inst.n, inst.k, inst.k_prime)?;
        let psi = psi_gram_between(&pair.x, &pair.y);
        Ok(Self {
            inst,
            table: phi_table(&inst),
            pair,
            psi,
            x_lift: OnceLock::new(),
            y_lift: OnceLock::new(),
            fixed: Default::default(),
        })
    }

    /// Γ for cutoff t.
    pub fn gamma(&self, t: f64) -> Result<DenseMatrix> {
        let sched = gamma_schedule(t, self.inst.k)?;
        assemble_adversary(&sched, &self.pair.transporters)
    }

    fn x_lift(&self) -> Result<&LevelLift> {
        self.x_lift
            .get_or_init(|| LevelLift::build(&self.pair.x, &self.pair.ex))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn y_lift(&self) -> Result<&LevelLift> {
        self.y_lift
            .get_or_init(|| LevelLift::build(&self.pair.y, &self.pair.ey))
            .as_ref()
            .map_err(Clone::clone)
    }
}

/// Runs one check on a freshly built instance context.
pub fn verify(check: CheckId, inst: &ProblemInstance, t: f64, ell: usize, tol: &Tolerances) -> Result<DiscrepancyReport> {
    let ctx = InstanceContext::new(*inst)?;
    verify_in(&ctx, check, t, ell, tol)
}

/// Runs one check against a shared context.
pub fn verify_in(
    ctx: &InstanceContext,
    check: CheckId,
    t: f64,
    ell: usize,
    tol: &Tolerances,
) -> Result<DiscrepancyReport> {
    let start = Instant::now();
    gamma_schedule(t, ctx.inst.k)?;
    if check == CheckId::PsiPower && t < 2.0 * ell as f64 {
        return usage(format!("PSI_POWER needs t ≥ 2ℓ, got t={t}, ℓ={ell}"));
    }
    let m = if check.schedule_free() {
        ctx.fixed[check.slot()]
            .get_or_init(|| measure(ctx, check, t, ell))
            .clone()?
    } else {
        measure(ctx, check, t, ell)?
    };
    let tolerance = tol.for_check(check);
    let spread_ok = m.spread.is_none_or(|s| s <= tol.exact);
    let inst = &ctx.inst;
    Ok(DiscrepancyReport {
        check,
        n: inst.n,
        k: inst.k,
        k_prime: inst.k_prime,
        t,
        ell,
        closed_form: m.closed_form,
        brute_force: m.brute_force,
        discrepancy: m.discrepancy,
        spread: m.spread,
        tolerance,
        pass: m.discrepancy <= tolerance && spread_ok,
        millis: start.elapsed().as_millis(),
    })
}

fn measure(ctx: &InstanceContext, check: CheckId, t: f64, ell: usize) -> Result<Measured> {
    match check {
        CheckId::PsiCoeffs => psi_coeffs(ctx, t, ell),
        CheckId::DeltaGen => delta_gen(ctx, t),
        CheckId::DeltaRefl => delta_refl(ctx, t),
        CheckId::DeltaMemb => delta_memb(ctx, t),
        CheckId::VDecomp => v_decomp(ctx),
        CheckId::PhiCommute => phi_commute(ctx),
        CheckId::Tables => tables(ctx),
        CheckId::Projectors => Ok(Measured::residual(projectors(ctx))),
        CheckId::NormGamma => {
            let sched = gamma_schedule(t, ctx.inst.k)?;
            let closed = sched.max_abs();
            let brute = spectral_norm(&ctx.gamma(t)?)?;
            Ok(Measured {
                closed_form: closed,
                brute_force: brute,
                discrepancy: (closed - brute).abs(),
                spread: None,
            })
        }
        CheckId::PsiPower => {
            let bound = psi_power_lower_bound(&ctx.inst, t, ell)?;
            let powered = ctx.psi.map(|v| v.powi(ell as i32));
            let brute = spectral_norm(&ctx.gamma(t)?.hadamard(&powered))?;
            Ok(Measured {
                closed_form: bound,
                brute_force: brute,
                discrepancy: (bound - brute).max(0.0),
                spread: None,
            })
        }
    }
}

/// tr(Φ_jᵀ M)/d_j for each j.
fn transporter_coefficients(ctx: &InstanceContext, m: &DenseMatrix) -> Vec<f64> {
    ctx.pair
        .transporters
        .iter()
        .map(|t| dot(t.matrix.data(), m.data()) / ctx.pair.dim(t.j) as f64)
        .collect()
}

fn psi_coeffs(ctx: &InstanceContext, t: f64, ell: usize) -> Result<Measured> {
    let sched = gamma_schedule(t, ctx.inst.k)?;
    let gamma = ctx.gamma(t)?;
    let table = &ctx.table;
    let tilde = tilde_table(&sched, table);
    let closed = hadamard_psi_step(&sched.gammas, table)?;
    let mut worst: f64 = 0.0;
    for j in 0..=ctx.inst.k {
        let a = dot4(&table.phi[j], &tilde.tilde_prime[j]);
        let b = dot4(&table.phi_prime[j], &tilde.tilde[j]);
        worst = worst.max((a - closed[j]).abs()).max((b - closed[j]).abs());
    }
    let brute = transporter_coefficients(ctx, &gamma.hadamard(&ctx.psi));
    for (c, b) in closed.iter().zip(&brute) {
        worst = worst.max((c - b).abs());
    }
    // the whole matrix, not only its projections, must match for every power
    let mut powered = gamma.clone();
    for s in 1..=ell.max(1) {
        powered = powered.hadamard(&ctx.psi);
        let coeffs = psi_power_coefficients(&sched, table, s)?;
        let mut expansion = DenseMatrix::zeros(gamma.rows(), gamma.cols());
        for (tr, c) in ctx.pair.transporters.iter().zip(&coeffs) {
            expansion.add_scaled(*c, &tr.matrix);
        }
        worst = worst.max(spectral_norm(&powered.sub(&expansion))?);
    }
    let top = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    Ok(Measured {
        closed_form: top(&closed),
        brute_force: top(&brute),
        discrepancy: worst,
        spread: None,
    })
}

fn delta_gen(ctx: &InstanceContext, t: f64) -> Result<Measured> {
    let sched = gamma_schedule(t, ctx.inst.k)?;
    let (fwd, adj) = norm_delta_state_gen(&sched, &ctx.inst)?;
    let gamma = ctx.gamma(t)?;
    let (x, y) = (&ctx.pair.x, &ctx.pair.y);
    let fwd_brute = spectral_norm(&lift(&gamma, LiftKind::RowPsi, x)?.sub(&lift(&gamma, LiftKind::ColPsi, y)?))?;
    let adj_brute =
        spectral_norm(&lift(&gamma, LiftKind::RowPsiAdj, x)?.sub(&lift(&gamma, LiftKind::ColPsiAdj, y)?))?;
    Ok(Measured {
        closed_form: fwd.max(adj),
        brute_force: fwd_brute.max(adj_brute),
        discrepancy: (fwd - fwd_brute).abs().max((adj - adj_brute).abs()),
        spread: None,
    })
}

/// ‖Γ∘Δ_ψψ*‖ from explicit lifts, as the norm of the product of the two
/// factors [V, −(Γ⊗I)V̂] and [(Γ⊗I)ᵀV, V̂].
pub fn reflection_norm_factored(gamma: &DenseMatrix, x: &SubsetBasis, y: &SubsetBasis) -> Result<f64> {
    let v = lift(&DenseMatrix::identity(x.len()), LiftKind::RowPsi, x)?;
    let v_hat = lift(&DenseMatrix::identity(y.len()), LiftKind::RowPsi, y)?;
    let g_vhat = lift(gamma, LiftKind::ColPsi, y)?.scale(-1.0);
    let gt_v = lift(&gamma.transpose(), LiftKind::ColPsi, x)?;
    let a = DenseMatrix::hstack(&[&v, &g_vhat])?;
    let b = DenseMatrix::hstack(&[&gt_v, &v_hat])?;
    spectral_norm_of_product(&a, &b)
}

fn delta_refl(ctx: &InstanceContext, t: f64) -> Result<Measured> {
    let sched = gamma_schedule(t, ctx.inst.k)?;
    let closed = norm_delta_reflection(&sched, &ctx.inst)?;
    let brute = reflection_norm_factored(&ctx.gamma(t)?, &ctx.pair.x, &ctx.pair.y)?;
    Ok(Measured {
        closed_form: closed,
        brute_force: brute,
        discrepancy: (closed - brute).abs(),
        spread: None,
    })
}

fn delta_memb(ctx: &InstanceContext, t: f64) -> Result<Measured> {
    let sched = gamma_schedule(t, ctx.inst.k)?;
    let closed = norm_delta_membership(&sched, &ctx.inst)?;
    let gamma = ctx.gamma(t)?;
    let mut values = Vec::with_capacity(ctx.inst.n);
    for i in 1..=ctx.inst.n {
        let mask = membership_mask_between(&ctx.pair.x, &ctx.pair.y, i)?;
        values.push(spectral_norm(&gamma.hadamard(&mask))?);
    }
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let discrepancy = values.iter().fold(0.0f64, |m, v| m.max((v - closed).abs()));
    Ok(Measured {
        closed_form: closed,
        brute_force: hi,
        discrepancy,
        spread: Some(hi - lo),
    })
}

fn family_residual(fam: &ProjectorFamily) -> f64 {
    let rank_ok = (0..fam.len()).all(|j| fam.rank(j) == fam.expected_rank(j) && fam.bases[j].cols() == fam.expected_rank(j));
    if rank_ok {
        fam.identity_residual()
    } else {
        f64::INFINITY
    }
}

fn projectors(ctx: &InstanceContext) -> f64 {
    family_residual(&ctx.pair.ex).max(family_residual(&ctx.pair.ey))
}

fn orthogonality_residual(t: &DenseMatrix) -> f64 {
    t.gram_cols().max_abs_diff(&DenseMatrix::identity(t.cols()))
}

fn level_tables(basis: &SubsetBasis) -> Result<f64> {
    let (n, size) = (basis.n(), basis.k());
    let mut worst: f64 = 0.0;
    for j in 0..=size {
        let r = reference_vectors(basis, j)?;
        let (one, two) = basis_change_tables(n, size, j)?;
        worst = worst.max(orthogonality_residual(&one));
        for (a, w) in r.one_fixed_w().iter().enumerate() {
            for (c, v) in r.one_fixed_v().iter().enumerate() {
                if let (Some(w), Some(v)) = (w, v) {
                    worst = worst.max((dot(w, v) - one[(a, c)]).abs());
                }
            }
        }
        if let (Some(t), Some(two)) = (&r.two_fixed, two) {
            worst = worst.max(orthogonality_residual(&two));
            for (a, w) in t.w_family().iter().enumerate() {
                for (c, v) in t.v_family(&r.v).iter().enumerate() {
                    if let (Some(w), Some(v)) = (w, v) {
                        worst = worst.max((dot(w, v) - two[(a, c)]).abs());
                    }
                }
            }
        }
    }
    Ok(worst)
}

fn tables(ctx: &InstanceContext) -> Result<Measured> {
    let r = level_tables(&ctx.pair.x)?.max(level_tables(&ctx.pair.y)?);
    Ok(Measured::residual(r))
}

/// Frobenius norm of V − Σ φ Ξ (basis-independent, and an upper bound on
/// every entry), plus the gap between each measured normalization and φ.
fn level_decomposition(level: &LevelLift) -> f64 {
    let mut sq = 0.0;
    let mut norm_gap: f64 = 0.0;
    for j in 0..=level.size {
        let phi = phi_vector(level.n, level.size, j);
        let mut r = level.v_restricted[j].clone();
        for (i, block) in level.xi[j].iter().enumerate() {
            if let Some(xi) = &block.restricted {
                r.add_scaled(-phi[i], xi);
            }
            let expected = if block.declared_zero { 0.0 } else { phi[i] };
            norm_gap = norm_gap.max((block.norm - expected).abs());
        }
        sq += r.data().iter().map(|v| v * v).sum::<f64>();
    }
    sq.sqrt().max(norm_gap)
}

fn v_decomp(ctx: &InstanceContext) -> Result<Measured> {
    let r = level_decomposition(ctx.x_lift()?).max(level_decomposition(ctx.y_lift()?));
    Ok(Measured::residual(r))
}

fn phi_commute(ctx: &InstanceContext) -> Result<Measured> {
    let (xl, yl) = (ctx.x_lift()?, ctx.y_lift()?);
    let pair = &ctx.pair;
    let n = ctx.inst.n;
    let k = ctx.inst.k;
    let mut worst: f64 = 0.0;
    for j in 0..=k {
        let (q, q_hat) = (&pair.ex.bases[j], &pair.ey.bases[j]);
        let phi_j = &pair.transporters[j].matrix;
        // Φ_j and Φ_jᵀ in the irrep bases
        let core = q.transpose_mul(&phi_j.matmul(q_hat));
        for (idx, &(_, m)) in XI_LABELS.iter().enumerate() {
            let target = j as isize + m;
            if target < 0 || target > k as isize {
                continue;
            }
            let phi_t = &pair.transporters[target as usize].matrix;
            let xb = &xl.xi[j][idx];
            let yb = &yl.xi[j][idx];
            let (xi, xi_hat) = match (&xb.restricted, &yb.restricted) {
                (None, None) => continue,
                (Some(a), Some(b)) => (a.clone(), b.clone()),
                (Some(a), None) => (a.clone(), DenseMatrix::zeros(pair.y.len() * n, q_hat.cols())),
                (None, Some(b)) => (DenseMatrix::zeros(pair.x.len() * n, q.cols()), b.clone()),
            };
            let forward = kron_identity_apply(phi_t, &xi_hat, n).sub(&xi.matmul(&core));
            let backward = kron_identity_apply(&phi_t.transpose(), &xi, n).sub(&xi_hat.mul_transpose(&core));
            worst = worst.max(spectral_norm(&forward)?).max(spectral_norm(&backward)?);
        }
    }
    Ok(Measured::residual(worst))
}
