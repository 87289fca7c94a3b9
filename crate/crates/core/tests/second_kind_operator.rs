mod common;

use common::{max_abs_diff, random_orthogonal, sorted};
use curv2k_core::curvature::{decompose, metric_product, norm_sq, SymTensor};
use curv2k_core::eigen::jacobi_eigen;
use curv2k_core::extremum::theta;
use curv2k_core::models::{constant_curvature, fubini_study, product_spheres, random_einstein};
use curv2k_core::rng::SplitMix64;
use curv2k_core::second_kind::{
    rbar_apply, second_kind_matrix, sjw_norms, sjw_norms_with_eigenbasis, spectrum,
    traceless_basis, traceless_dim,
};

#[test]
fn basis_is_orthonormal_and_traceless() {
    for n in 2..=8 {
        let b = traceless_basis(n).unwrap();
        assert_eq!(b.len(), traceless_dim(n));
        let g = b.gram();
        let dim = b.len();
        for a in 0..dim {
            assert!(b.elements()[a].trace().abs() < 1e-15);
            for c in 0..dim {
                let want = if a == c { 1.0 } else { 0.0 };
                assert!((g[a * dim + c] - want).abs() < 1e-14);
            }
        }
    }
}

#[test]
fn sphere_spectrum_is_constant() {
    let op = second_kind_matrix(&constant_curvature(4, 1.0).unwrap());
    let s = spectrum(&op).unwrap();
    assert_eq!(s.dim, 9);
    assert!(s.eigenvalues.iter().all(|l| (l - 1.0).abs() < 1e-12));
    assert!((s.mean - 1.0).abs() < 1e-12);
    assert!(s.trace_check);

    let s = spectrum(&second_kind_matrix(&constant_curvature(5, 2.0).unwrap())).unwrap();
    assert!(s.eigenvalues.iter().all(|l| (l - 2.0).abs() < 1e-12));
}

#[test]
fn flat_spectrum_is_zero() {
    let s = spectrum(&second_kind_matrix(&metric_product(6).scale(0.0))).unwrap();
    assert!(s.eigenvalues.iter().all(|l| *l == 0.0));
    assert!(s.is_flat_like());
    assert_eq!(s.min_over_mean(), None);
}

#[test]
fn product_spectrum_and_trace() {
    let r = product_spheres(2, 2, 1.0, 1.0).unwrap();
    let s = spectrum(&second_kind_matrix(&r)).unwrap();
    let want = [-1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0];
    assert!(max_abs_diff(&s.eigenvalues, &want) < 1e-12);
    assert!((s.eigenvalues.iter().sum::<f64>() - 3.0).abs() < 1e-12);
    assert!((s.mean - 1.0 / 3.0).abs() < 1e-12);
    let th = theta(4).unwrap().value;
    assert!(s.min() / s.mean < -th - 1e-6);
}

#[test]
fn complex_projective_plane_spectrum() {
    let r = fubini_study(2, 4.0).unwrap();
    let s = spectrum(&second_kind_matrix(&r)).unwrap();
    let want = [-2.0, -2.0, -2.0, 4.0, 4.0, 4.0, 4.0, 4.0, 4.0];
    assert!(max_abs_diff(&s.eigenvalues, &want) < 1e-12);
    assert!((s.mean - 2.0).abs() < 1e-12);
    assert!(s.min() / s.mean < -theta(4).unwrap().value - 1e-6);
}

#[test]
fn trace_identity_on_random_tensors() {
    for n in 4..=8 {
        for seed in 0..6 {
            let r = random_einstein(n, seed, 1.0).unwrap();
            let op = second_kind_matrix(&r);
            let s = spectrum(&op).unwrap();
            assert!(s.trace_check, "n={n} seed={seed}");
            let rel = (op.trace() - op.expected_trace()).abs() / op.expected_trace().abs();
            assert!(rel < 1e-9);
        }
    }
}

#[test]
fn operator_matches_its_definition() {
    let r = random_einstein(5, 11, 0.7).unwrap();
    let op = second_kind_matrix(&r);
    let b = traceless_basis(5).unwrap();
    for (a, sa) in b.elements().iter().enumerate() {
        let image = rbar_apply(&r, sa).unwrap();
        for (c, sc) in b.elements().iter().enumerate() {
            assert!((op.entry(a, c) - image.inner(sc).unwrap()).abs() < 1e-13);
        }
    }
}

#[test]
fn frobenius_matches_sum_of_squares() {
    for n in [4, 6, 8] {
        let op = second_kind_matrix(&random_einstein(n, 3, 0.5).unwrap());
        let s = spectrum(&op).unwrap();
        let f2 = op.frobenius().powi(2);
        assert!((s.sum_sq() - f2).abs() < 1e-10 * f2);
    }
}

#[test]
fn spectrum_is_frame_invariant() {
    for (n, seed) in [(4, 1u64), (6, 2), (8, 3)] {
        let r = random_einstein(n, seed, 1.0).unwrap();
        let rq = r.conjugate(&random_orthogonal(n, seed + 10));
        let a = spectrum(&second_kind_matrix(&r)).unwrap();
        let b = spectrum(&second_kind_matrix(&rq)).unwrap();
        assert!(max_abs_diff(&a.eigenvalues, &b.eigenvalues) < 1e-8, "n={n}");
    }
}

#[test]
fn jacobi_matches_reference_solver() {
    let mut rng = SplitMix64::new(42);
    for dim in [1usize, 2, 5, 9, 20, 35] {
        let mut m = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in i..dim {
                let v = rng.next_normal();
                m[i * dim + j] = v;
                m[j * dim + i] = v;
            }
        }
        let e = jacobi_eigen(&m, dim).unwrap();
        let oracle = nalgebra::DMatrix::from_row_slice(dim, dim, &m).symmetric_eigen();
        let want = sorted(oracle.eigenvalues.iter().copied().collect());
        assert!(max_abs_diff(&e.values, &want) < 1e-10, "dim={dim}");
        // V diag(λ) Vᵀ reconstructs M
        let mut err: f64 = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                let s: f64 = (0..dim)
                    .map(|k| e.vectors[i * dim + k] * e.values[k] * e.vectors[j * dim + k])
                    .sum();
                err = err.max((s - m[i * dim + j]).abs());
            }
        }
        assert!(err < 1e-9, "dim={dim} err={err}");
    }
}

#[test]
fn sjw_sum_ratios() {
    for (n, ratio) in [(4usize, 6.0), (5, 8.8), (6, 34.0 / 3.0), (7, 96.0 / 7.0)] {
        let r = random_einstein(n, 5, 1.0).unwrap();
        let w = decompose(&r).unwrap().weyl;
        let norms = sjw_norms(&r, &traceless_basis(n).unwrap()).unwrap();
        let rel = (norms.sum() - ratio * norm_sq(&w)).abs() / (ratio * norm_sq(&w));
        assert!(rel < 1e-9, "n={n} rel={rel}");
        assert!(!norms.degenerate);
        assert_eq!(norms.individual().unwrap().len(), traceless_dim(n));
    }
}

#[test]
fn sjw_aggregates_ignore_eigenbasis_choice() {
    // S²×S² has eigenspaces of dimension 4, so individual norms depend on the basis.
    let r = product_spheres(2, 2, 1.0, 1.0).unwrap();
    let basis = traceless_basis(4).unwrap();
    let op = second_kind_matrix(&r);
    let e = op.eigen().unwrap();
    let w = decompose(&r).unwrap().weyl;
    let base = sjw_norms_with_eigenbasis(&w, &basis, &e.values, &e.vectors);
    assert!(base.degenerate);
    assert!(base.individual().is_err());

    let dim = e.dim;
    for seed in 0..4 {
        // rotate the vectors within each degenerate block
        let mut vectors = e.vectors.clone();
        let mut start = 0;
        while start < dim {
            let mut end = start + 1;
            while end < dim && (e.values[end] - e.values[start]).abs() < 1e-9 {
                end += 1;
            }
            let k = end - start;
            let q = random_orthogonal(k, seed * 31 + start as u64);
            for row in 0..dim {
                for c in 0..k {
                    vectors[row * dim + start + c] = (0..k)
                        .map(|d| e.vectors[row * dim + start + d] * q[d * k + c])
                        .sum();
                }
            }
            start = end;
        }
        let rotated = sjw_norms_with_eigenbasis(&w, &basis, &e.values, &vectors);
        assert!((rotated.sum() - base.sum()).abs() < 1e-10 * base.sum().max(1.0));
        assert!((rotated.weighted_sum() - base.weighted_sum()).abs() < 1e-10 * base.sum().max(1.0));
    }
}

#[test]
fn sym_conjugation_preserves_traceless_inner_products() {
    let q = random_orthogonal(5, 8);
    let b = traceless_basis(5).unwrap();
    let x = b.elements()[3].conjugate(&q);
    let y = b.elements()[7].conjugate(&q);
    assert!(x.trace().abs() < 1e-14);
    assert!(x.inner(&y).unwrap().abs() < 1e-14);
    assert!((x.norm() - 1.0).abs() < 1e-14);
    assert!(
        SymTensor::metric(5)
            .conjugate(&q)
            .sub(&SymTensor::metric(5))
            .unwrap()
            .norm()
            < 1e-14
    );
}
