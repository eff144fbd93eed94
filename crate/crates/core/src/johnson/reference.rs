//! Explicit spanning vectors of the irreducible components and the
//! closed-form basis-change tables relating the one- and two-fixed-element
//! families.
//!
//! Vectors are built as signed combinations of subsets: `R_j` is the product
//! of pair differences ({n}−{n−1})⊠({n−2}−{n−3})⊠…, `T^A_ℓ` is the sum of all
//! ℓ-subsets of A, and ⊠ is disjoint union extended bilinearly. The fixed
//! elements are b = n−2j (one fixed), d = n−2j+1 and c = n−2j+2 (two fixed).

use super::subsets::{binomial, mask_of, Mask, SubsetBasis};
use crate::error::{usage, Result};
use crate::linalg::DenseMatrix;

/// Signed formal combination of subsets.
#[derive(Clone, Debug, Default)]
struct Combo(Vec<(Mask, f64)>);

impl Combo {
    fn set(elements: &[usize]) -> Self {
        Combo(vec![(mask_of(elements), 1.0)])
    }

    /// {a} − {b}
    fn diff(a: usize, b: usize) -> Self {
        Combo(vec![(mask_of(&[a]), 1.0), (mask_of(&[b]), -1.0)])
    }

    /// Sum of all ℓ-subsets of `pool`.
    fn subsets_of(pool: &[usize], l: usize) -> Self {
        let mut out = Vec::new();
        let mut pick = Vec::with_capacity(l);
        fn walk(pool: &[usize], l: usize, start: usize, pick: &mut Vec<usize>, out: &mut Vec<(Mask, f64)>) {
            if pick.len() == l {
                out.push((mask_of(pick), 1.0));
                return;
            }
            for i in start..pool.len() {
                pick.push(pool[i]);
                walk(pool, l, i + 1, pick, out);
                pick.pop();
            }
        }
        walk(pool, l, 0, &mut pick, &mut out);
        Combo(out)
    }

    /// Disjoint-union product; overlapping pairs would not be k-subsets and
    /// never arise in the constructions below.
    fn boxtimes(&self, other: &Combo) -> Combo {
        let mut out = Vec::with_capacity(self.0.len() * other.0.len());
        for &(m1, a) in &self.0 {
            for &(m2, b) in &other.0 {
                assert_eq!(m1 & m2, 0, "⊠ of overlapping subsets");
                out.push((m1 | m2, a * b));
            }
        }
        Combo(out)
    }

    fn extend(&mut self, other: Combo) {
        self.0.extend(other.0);
    }

    fn to_vector(&self, basis: &SubsetBasis, scale: f64) -> Vec<f64> {
        let mut v = vec![0.0; basis.len()];
        for &(m, a) in &self.0 {
            let i = basis
                .index_of(m)
                .expect("constructed subsets have the basis size");
            v[i] += a;
        }
        v.iter_mut().for_each(|x| *x /= scale);
        v
    }
}

/// R_j = ({n}−{n−1}) ⊠ … ⊠ ({n−2j+2}−{n−2j+1}).
fn pair_product(n: usize, j: usize) -> Combo {
    let mut acc = Combo::set(&[]);
    for i in 0..j {
        acc = acc.boxtimes(&Combo::diff(n - 2 * i, n - 2 * i - 1));
    }
    acc
}

fn range(lo: usize, hi: usize) -> Vec<usize> {
    (lo..=hi).collect()
}

fn without(pool: &[usize], drop: &[usize]) -> Vec<usize> {
    pool.iter().copied().filter(|e| !drop.contains(e)).collect()
}

fn f(x: usize) -> f64 {
    x as f64
}

/// The unit vector v = R_j ⊠ T^{[n−2j]}_{k−j} / √(2^j C(n−2j,k−j)) spanning
/// the highest-weight line of irrep j inside the basis's module.
pub fn reference_v(basis: &SubsetBasis, j: usize) -> Result<Vec<f64>> {
    let (n, k) = (basis.n(), basis.k());
    if j > k || n < k + j {
        return usage(format!("reference vector needs j ≤ k and n ≥ k+j, got ({n},{k},{j})"));
    }
    let combo = pair_product(n, j).boxtimes(&Combo::subsets_of(&range(1, n - 2 * j), k - j));
    let beta = (2f64.powi(j as i32) * binomial(n - 2 * j, k - j) as f64).sqrt();
    Ok(combo.to_vector(basis, beta))
}

/// Vectors with two fixed elements c = n−2j+2, d = n−2j+1 (defined for j ≥ 1).
#[derive(Clone, Debug)]
pub struct TwoFixed {
    pub v_minus: Vec<f64>,
    pub v_zero: Vec<f64>,
    /// Absent at j = k (its defining sum is empty).
    pub v_plus: Option<Vec<f64>>,
    pub w_empty: Vec<f64>,
    pub w_c: Vec<f64>,
    pub w_d: Vec<f64>,
    /// Absent at j = k.
    pub w_cd: Option<Vec<f64>>,
}

impl TwoFixed {
    /// (v_−, v, v_0, v_+) in table column order.
    pub fn v_family<'a>(&'a self, v: &'a [f64]) -> [Option<&'a [f64]>; 4] {
        [
            Some(&self.v_minus),
            Some(v),
            Some(&self.v_zero),
            self.v_plus.as_deref(),
        ]
    }

    /// (w_∅, w_c, w_d, w_cd) in table row order.
    pub fn w_family(&self) -> [Option<&[f64]>; 4] {
        [
            Some(&self.w_empty),
            Some(&self.w_c),
            Some(&self.w_d),
            self.w_cd.as_deref(),
        ]
    }
}

/// All reference vectors for irrep j of the k-subset module.
#[derive(Clone, Debug)]
pub struct ReferenceVectors {
    pub n: usize,
    pub k: usize,
    pub j: usize,
    pub v: Vec<f64>,
    /// Component in irrep j+1 with b = n−2j fixed; absent at j = k.
    pub v_tilde: Option<Vec<f64>>,
    pub w_circ: Vec<f64>,
    /// Absent at j = k.
    pub w_bullet: Option<Vec<f64>>,
    /// Present for 1 ≤ j ≤ k.
    pub two_fixed: Option<TwoFixed>,
}

impl ReferenceVectors {
    /// (v, v_~) in table column order.
    pub fn one_fixed_v(&self) -> [Option<&[f64]>; 2] {
        [Some(&self.v), self.v_tilde.as_deref()]
    }

    /// (w_∘, w_•) in table row order.
    pub fn one_fixed_w(&self) -> [Option<&[f64]>; 2] {
        [Some(&self.w_circ), self.w_bullet.as_deref()]
    }
}

fn check_range(n: usize, k: usize, j: usize) -> Result<()> {
    if j > k || n < 2 * k + 1 {
        return usage(format!(
            "reference vectors need n ≥ 2k+1 ≥ 2j+1, got (n,k,j)=({n},{k},{j})"
        ));
    }
    Ok(())
}

/// Builds every reference vector for irrep j in the given k-subset basis.
pub fn reference_vectors(basis: &SubsetBasis, j: usize) -> Result<ReferenceVectors> {
    let (n, k) = (basis.n(), basis.k());
    check_range(n, k, j)?;
    let v = reference_v(basis, j)?;
    let r = pair_product(n, j);
    let beta2 = (2f64.powi(j as i32) * binomial(n - 2 * j, k - j) as f64).sqrt();
    let b = n - 2 * j;
    let below_b = range(1, b - 1);

    let v_tilde = (j < k).then(|| {
        let mut sum = Combo::default();
        for a in 1..b {
            let rest = Combo::subsets_of(&without(&below_b, &[a]), k - j - 1);
            sum.extend(Combo::diff(a, b).boxtimes(&rest));
        }
        let scale = beta2 * (f(k - j) * f(n - k - j)).sqrt();
        r.boxtimes(&sum).to_vector(basis, scale)
    });
    let w_circ = {
        let scale = beta2 * (f(n - k - j) / f(n - 2 * j)).sqrt();
        r.boxtimes(&Combo::subsets_of(&below_b, k - j))
            .to_vector(basis, scale)
    };
    let w_bullet = (j < k).then(|| {
        let scale = beta2 * (f(k - j) / f(n - 2 * j)).sqrt();
        r.boxtimes(&Combo::set(&[b]))
            .boxtimes(&Combo::subsets_of(&below_b, k - j - 1))
            .to_vector(basis, scale)
    });
    let two_fixed = (j >= 1).then(|| two_fixed_family(basis, j));

    Ok(ReferenceVectors {
        n,
        k,
        j,
        v,
        v_tilde,
        w_circ,
        w_bullet,
        two_fixed,
    })
}

fn two_fixed_family(basis: &SubsetBasis, j: usize) -> TwoFixed {
    let (n, k) = (basis.n(), basis.k());
    let r = pair_product(n, j - 1);
    let beta4 = (2f64.powi(j as i32 - 1) * binomial(n - 2 * j, k - j) as f64).sqrt();
    let c = n - 2 * j + 2;
    let d = n - 2 * j + 1;
    let low = range(1, n - 2 * j);
    let upto_c = range(1, c);

    let v_minus = {
        let scale = beta4
            * ((f(n - 2 * j + 2) * f(n - 2 * j + 1)) / (f(k - j + 1) * f(n - k - j + 1))).sqrt();
        r.boxtimes(&Combo::subsets_of(&upto_c, k - j + 1))
            .to_vector(basis, scale)
    };
    let v_zero = {
        let mut sum = Combo::default();
        for a in 1..=n - 2 * j {
            for fixed in [c, d] {
                let rest = Combo::subsets_of(&without(&upto_c, &[a, fixed]), k - j);
                sum.extend(Combo::diff(a, fixed).boxtimes(&rest));
            }
        }
        let scale = beta4 * (2.0 * f(n - 2 * j + 2) * f(n - 2 * j)).sqrt();
        r.boxtimes(&sum).to_vector(basis, scale)
    };
    let v_plus = (j < k).then(|| {
        let mut sum = Combo::default();
        for a in 1..=n - 2 * j {
            for a2 in 1..=n - 2 * j {
                if a == a2 {
                    continue;
                }
                let rest = Combo::subsets_of(&without(&low, &[a, a2]), k - j - 1);
                sum.extend(
                    Combo::diff(a, c)
                        .boxtimes(&Combo::diff(a2, d))
                        .boxtimes(&rest),
                );
            }
        }
        let scale = beta4
            * (f(n - 2 * j + 1) * f(n - 2 * j) * f(n - k - j) * f(k - j)).sqrt();
        r.boxtimes(&sum).to_vector(basis, scale)
    });
    let w_empty = {
        let scale = beta4 * (f(n - k - j) / f(k - j + 1)).sqrt();
        r.boxtimes(&Combo::subsets_of(&low, k - j + 1))
            .to_vector(basis, scale)
    };
    let w_single = |fixed: usize| {
        r.boxtimes(&Combo::set(&[fixed]))
            .boxtimes(&Combo::subsets_of(&low, k - j))
            .to_vector(basis, beta4)
    };
    let w_cd = (j < k).then(|| {
        let scale = beta4 * (f(k - j) / f(n - k - j + 1)).sqrt();
        r.boxtimes(&Combo::set(&[c, d]))
            .boxtimes(&Combo::subsets_of(&low, k - j - 1))
            .to_vector(basis, scale)
    });
    TwoFixed {
        v_minus,
        v_zero,
        v_plus,
        w_empty,
        w_c: w_single(c),
        w_d: w_single(d),
        w_cd,
    }
}

/// Closed-form basis-change tables at (n, k, j).
///
/// The 2×2 table has rows (w_∘, w_•) and columns (v, v_~); the 4×4 table has
/// rows (w_∅, w_c, w_d, w_cd) and columns (v_−, v, v_0, v_+). Entry (a, b) is
/// ⟨w_a, v_b⟩. The 4×4 table exists only for j ≥ 1.
pub fn basis_change_tables(
    n: usize,
    k: usize,
    j: usize,
) -> Result<(DenseMatrix, Option<DenseMatrix>)> {
    check_range(n, k, j)?;
    let q = |num: f64, den: f64| (num / den).sqrt();
    let m = f(n - 2 * j);
    let one = DenseMatrix::from_rows(&[
        vec![q(f(n - k - j), m), q(f(k - j), m)],
        vec![q(f(k - j), m), -q(f(n - k - j), m)],
    ])?;
    if j == 0 {
        return Ok((one, None));
    }
    let (nn, kk, jj) = (f(n), f(k), f(j));
    let a = nn - 2.0 * jj + 2.0; // n−2j+2
    let b = nn - 2.0 * jj + 1.0; // n−2j+1
    let c = nn - 2.0 * jj; // n−2j
    let up = nn - kk - jj + 1.0; // n−k−j+1
    let lo = nn - kk - jj; // n−k−j
    let kp = kk - jj + 1.0; // k−j+1
    let km = kk - jj; // k−j
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let w_c_row = |sign: f64| {
        vec![
            q(kp * up, a * b),
            sign * h,
            -(nn - 2.0 * kk) / (2.0 * a * c).sqrt(),
            -q(km * lo, b * c),
        ]
    };
    let two = DenseMatrix::from_rows(&[
        vec![q(up * lo, a * b), 0.0, q(2.0 * kp * lo, a * c), q(kp * km, b * c)],
        w_c_row(1.0),
        w_c_row(-1.0),
        vec![q(kp * km, a * b), 0.0, -q(2.0 * km * up, a * c), q(up * lo, b * c)],
    ])?;
    Ok((one, Some(two)))
}
