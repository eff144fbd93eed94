use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use workbench::johnson::*;
use workbench::linalg::{dot, norm2, DenseMatrix};

const SWEEP: [(usize, usize, usize); 8] = [
    (6, 1, 2),
    (7, 1, 2),
    (8, 2, 3),
    (9, 2, 3),
    (10, 2, 3),
    (10, 3, 4),
    (12, 2, 4),
    (12, 3, 4),
];

fn project(e: &DenseMatrix, v: &[f64]) -> Vec<f64> {
    e.mat_vec(v)
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

#[test]
fn subset_basis_small_cases() {
    let b = subset_basis(3, 2).unwrap();
    let listed: Vec<Vec<usize>> = (0..b.len()).map(|i| b.elements(i)).collect();
    assert_eq!(listed, vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
    let e = subset_basis(4, 0).unwrap();
    assert_eq!(e.len(), 1);
    assert!(e.elements(0).is_empty());
}

#[test]
fn subset_basis_matches_brute_enumeration() {
    let b = subset_basis(8, 3).unwrap();
    assert_eq!(b.len(), 56);
    // recount: every 8-bit mask with three bits, sorted by element list
    let mut all: Vec<Vec<usize>> = (0u32..256)
        .filter(|m| m.count_ones() == 3)
        .map(|m| (1..=8).filter(|e| m & (1 << (e - 1)) != 0).collect())
        .collect();
    all.sort();
    for (i, s) in all.iter().enumerate() {
        assert_eq!(&b.elements(i), s);
        assert_eq!(b.index_of_elements(s), Some(i));
    }
    let pos = all.iter().position(|s| s == &vec![2, 5, 8]).unwrap();
    assert_eq!(b.index_of_elements(&[2, 5, 8]), Some(pos));
    assert!(b.masks().windows(2).all(|w| elements_of(w[0]) < elements_of(w[1])));
}

#[test]
fn subset_basis_rejects_bad_sizes() {
    assert!(subset_basis(3, 4).is_err());
    assert!(subset_basis(MAX_GROUND_SET + 1, 2).is_err());
}

#[test]
fn inclusion_matrix_cases() {
    let id = inclusion_matrix(6, 3, 3).unwrap();
    assert_eq!(id, DenseMatrix::identity(20));
    let ones = inclusion_matrix(6, 2, 0).unwrap();
    assert_eq!(ones.shape(), (15, 1));
    assert!(ones.data().iter().all(|&v| v == 1.0));
    let w = inclusion_matrix(4, 2, 1).unwrap();
    for r in 0..w.rows() {
        assert_eq!(w.row(r).iter().sum::<f64>(), 2.0);
    }
    for c in 0..w.cols() {
        assert_eq!(w.col(c).iter().sum::<f64>(), binomial(3, 1) as f64);
    }
    assert!(inclusion_matrix(4, 2, 3).is_err());
}

#[test]
fn trivial_projector_is_uniform_average() {
    let p = irrep_projectors(8, 2).unwrap();
    let want = DenseMatrix::from_fn(28, 28, |_, _| 1.0 / 28.0);
    assert!(p.projectors[0].max_abs_diff(&want) < 1e-14);
}

#[test]
fn projector_traces_at_8_2() {
    let p = irrep_projectors(8, 2).unwrap();
    let traces: Vec<f64> = p.projectors.iter().map(|e| e.trace()).collect();
    for (t, want) in traces.iter().zip([1.0, 7.0, 20.0]) {
        assert!((t - want).abs() < 1e-10);
    }
}

#[test]
fn projectors_complete_at_6_3() {
    let p = irrep_projectors(6, 3).unwrap();
    let mut total = DenseMatrix::zeros(20, 20);
    for e in &p.projectors {
        total = total.add(e);
    }
    assert!(total.max_abs_diff(&DenseMatrix::identity(20)) < 1e-10);
    assert!(irrep_projectors(5, 3).is_err());
}

#[test]
fn projector_identities_and_ranks_on_sweep() {
    for &(n, k, kp) in &SWEEP {
        for kk in [k, kp] {
            let p = irrep_projectors(n, kk).unwrap();
            assert!(p.identity_residual() < 1e-10, "({n},{kk})");
            for j in 0..=kk {
                assert_eq!(p.rank(j), p.expected_rank(j), "({n},{kk},{j})");
                assert_eq!(p.bases[j].cols(), p.expected_rank(j));
            }
        }
    }
}

#[test]
fn trivial_transporter_is_constant() {
    let t = transporter(8, 2, 3, 0).unwrap();
    let c = 1.0 / ((28 * 56) as f64).sqrt();
    assert!(t.matrix.data().iter().all(|&v| (v - c).abs() < 1e-14));
}

#[test]
fn transporter_rejects_bad_ranges() {
    assert!(transporter(8, 3, 3, 0).is_err());
    assert!(transporter(8, 2, 5, 0).is_err());
    assert!(transporter(8, 2, 3, 3).is_err());
}

#[test]
fn transporters_map_reference_vectors_and_are_partial_isometries() {
    for &(n, k, kp) in &SWEEP {
        let pair = JohnsonPair::new(n, k, kp).unwrap();
        for j in 0..=k {
            let phi = &pair.transporters[j].matrix;
            let v = reference_v(&pair.x, j).unwrap();
            let v_hat = reference_v(&pair.y, j).unwrap();
            assert!(dist(&phi.mat_vec(&v_hat), &v) < 1e-9, "({n},{k},{kp}) j={j}");
            assert!(phi.transpose_mul(phi).max_abs_diff(&pair.ey.projectors[j]) < 1e-10);
            assert!(phi.mul_transpose(phi).max_abs_diff(&pair.ex.projectors[j]) < 1e-10);
        }
    }
}

#[test]
fn transporters_are_permutation_invariant() {
    let pair = JohnsonPair::new(8, 2, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let mut perm: Vec<usize> = (1..=8).collect();
        perm.shuffle(&mut rng);
        let rows = pair.x.permutation_action(&perm);
        let cols = pair.y.permutation_action(&perm);
        for t in &pair.transporters {
            let moved = t.matrix.permuted(&rows, &cols);
            assert!(moved.max_abs_diff(&t.matrix) < 1e-10, "j={}", t.j);
        }
    }
}

#[test]
fn reference_vectors_at_j0_are_uniform() {
    let b = subset_basis(8, 2).unwrap();
    let r = reference_vectors(&b, 0).unwrap();
    let u = 1.0 / (28f64).sqrt();
    assert!(r.v.iter().all(|&x| (x - u).abs() < 1e-15));
    assert!(r.two_fixed.is_none());
}

#[test]
fn reference_vectors_at_8_2_1() {
    let b = subset_basis(8, 2).unwrap();
    let r = reference_vectors(&b, 1).unwrap();
    let w_bullet = r.w_bullet.as_ref().unwrap();
    let v_tilde = r.v_tilde.as_ref().unwrap();
    assert!(dot(&r.w_circ, w_bullet).abs() < 1e-12);
    assert!(dot(&r.v, v_tilde).abs() < 1e-12);
    assert!((dot(w_bullet, &r.v) - (1.0f64 / 6.0).sqrt()).abs() < 1e-12);
}

#[test]
fn reference_vectors_reject_bad_ranges() {
    let b = subset_basis(8, 3).unwrap();
    assert!(reference_vectors(&b, 4).is_err());
    let tight = subset_basis(6, 3).unwrap();
    assert!(reference_vectors(&tight, 1).is_err());
}

fn all_vectors(r: &ReferenceVectors) -> Vec<(&'static str, &[f64])> {
    let mut out: Vec<(&'static str, &[f64])> = vec![("v", &r.v), ("w_circ", &r.w_circ)];
    if let Some(v) = &r.v_tilde {
        out.push(("v_tilde", v));
    }
    if let Some(v) = &r.w_bullet {
        out.push(("w_bullet", v));
    }
    if let Some(t) = &r.two_fixed {
        out.push(("v_minus", &t.v_minus));
        out.push(("v_zero", &t.v_zero));
        out.push(("w_empty", &t.w_empty));
        out.push(("w_c", &t.w_c));
        out.push(("w_d", &t.w_d));
        if let Some(v) = &t.v_plus {
            out.push(("v_plus", v));
        }
        if let Some(v) = &t.w_cd {
            out.push(("w_cd", v));
        }
    }
    out
}

#[test]
fn reference_vectors_are_unit_and_in_their_irreps() {
    for &(n, k, kp) in &SWEEP {
        for kk in [k, kp] {
            if n < 2 * kk + 1 {
                continue;
            }
            let b = subset_basis(n, kk).unwrap();
            let p = irrep_projectors(n, kk).unwrap();
            let e = |j: usize| &p.projectors[j];
            for j in 0..=kk {
                let r = reference_vectors(&b, j).unwrap();
                for (name, v) in all_vectors(&r) {
                    assert!((norm2(v) - 1.0).abs() < 1e-12, "({n},{kk},{j}) {name}");
                }
                assert!(dist(&project(e(j), &r.v), &r.v) < 1e-10);
                if let Some(vt) = &r.v_tilde {
                    assert!(dist(&project(e(j + 1), vt), vt) < 1e-10);
                }
                if let Some(t) = &r.two_fixed {
                    assert!(dist(&project(e(j - 1), &t.v_minus), &t.v_minus) < 1e-10);
                    assert!(dist(&project(e(j), &t.v_zero), &t.v_zero) < 1e-10);
                    if let Some(vp) = &t.v_plus {
                        assert!(dist(&project(e(j + 1), vp), vp) < 1e-10);
                    }
                }
            }
        }
    }
}

fn residual_outside_span(v: &[f64], span: &[&[f64]]) -> f64 {
    let mut r = v.to_vec();
    for w in span {
        let c = dot(&r, w);
        for (x, y) in r.iter_mut().zip(w.iter()) {
            *x -= c * y;
        }
    }
    norm2(&r)
}

#[test]
fn families_span_the_same_subspaces() {
    for &(n, k, _) in &SWEEP {
        if n < 2 * k + 1 {
            continue;
        }
        let b = subset_basis(n, k).unwrap();
        for j in 0..=k {
            let r = reference_vectors(&b, j).unwrap();
            let ws: Vec<&[f64]> = r.one_fixed_w().into_iter().flatten().collect();
            for v in r.one_fixed_v().into_iter().flatten() {
                assert!(residual_outside_span(v, &ws) < 1e-10);
            }
            if let Some(t) = &r.two_fixed {
                let ws: Vec<&[f64]> = t.w_family().into_iter().flatten().collect();
                for v in t.v_family(&r.v).into_iter().flatten() {
                    assert!(residual_outside_span(v, &ws) < 1e-10, "({n},{k},{j})");
                }
            }
        }
    }
}

#[test]
fn one_fixed_table_is_a_reflection() {
    for &(n, k, j) in &[(8, 2, 0), (8, 2, 1), (8, 2, 2), (13, 4, 3)] {
        let (t, _) = basis_change_tables(n, k, j).unwrap();
        let det = t[(0, 0)] * t[(1, 1)] - t[(0, 1)] * t[(1, 0)];
        assert!((det + 1.0).abs() < 1e-12);
    }
}

#[test]
fn two_fixed_table_entry_and_orthogonality() {
    let (_, t) = basis_change_tables(8, 2, 1).unwrap();
    let t = t.unwrap();
    assert!((t[(1, 1)] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    let (_, t) = basis_change_tables(10, 3, 2).unwrap();
    let t = t.unwrap();
    assert!(t.gram_cols().max_abs_diff(&DenseMatrix::identity(4)) < 1e-12);
    assert!(basis_change_tables(8, 2, 0).unwrap().1.is_none());
}

#[test]
fn tables_match_reference_inner_products_on_sweep() {
    for &(n, k, kp) in &SWEEP {
        for kk in [k, kp] {
            if n < 2 * kk + 1 {
                continue;
            }
            let b = subset_basis(n, kk).unwrap();
            for j in 0..=kk {
                let r = reference_vectors(&b, j).unwrap();
                let (one, two) = basis_change_tables(n, kk, j).unwrap();
                assert!(one.gram_cols().max_abs_diff(&DenseMatrix::identity(2)) < 1e-12);
                for (a, w) in r.one_fixed_w().iter().enumerate() {
                    for (c, v) in r.one_fixed_v().iter().enumerate() {
                        if let (Some(w), Some(v)) = (w, v) {
                            let got = dot(w, v);
                            assert!((got - one[(a, c)]).abs() < 1e-10, "({n},{kk},{j}) 2x2 [{a},{c}]");
                        }
                    }
                }
                if let (Some(t), Some(two)) = (&r.two_fixed, two) {
                    assert!(two.gram_cols().max_abs_diff(&DenseMatrix::identity(4)) < 1e-12);
                    for (a, w) in t.w_family().iter().enumerate() {
                        for (c, v) in t.v_family(&r.v).iter().enumerate() {
                            if let (Some(w), Some(v)) = (w, v) {
                                let got = dot(w, v);
                                assert!(
                                    (got - two[(a, c)]).abs() < 1e-10,
                                    "({n},{kk},{j}) 4x4 [{a},{c}]: {got} vs {}",
                                    two[(a, c)]
                                );
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn transporters_act_on_reference_families() {
    for &(n, k, kp) in &SWEEP {
        let pair = JohnsonPair::new(n, k, kp).unwrap();
        if n < 2 * kp + 1 {
            continue;
        }
        let phi = |j: usize| &pair.transporters[j].matrix;
        for j in 0..=k {
            let r = reference_vectors(&pair.x, j).unwrap();
            let rh = reference_vectors(&pair.y, j).unwrap();
            assert!(dist(&phi(j).mat_vec(&rh.v), &r.v) < 1e-9);
            if j < k {
                let (vt, vth) = (r.v_tilde.as_ref().unwrap(), rh.v_tilde.as_ref().unwrap());
                assert!(dist(&phi(j + 1).mat_vec(vth), vt) < 1e-9, "({n},{k},{kp}) j={j}");
            }
            if let (Some(t), Some(th)) = (&r.two_fixed, &rh.two_fixed) {
                assert!(dist(&phi(j - 1).mat_vec(&th.v_minus), &t.v_minus) < 1e-9);
                assert!(dist(&phi(j).mat_vec(&th.v_zero), &t.v_zero) < 1e-9);
                if let (Some(vp), Some(vph)) = (&t.v_plus, &th.v_plus) {
                    assert!(dist(&phi(j + 1).mat_vec(vph), vp) < 1e-9);
                }
            }
        }
    }
}
