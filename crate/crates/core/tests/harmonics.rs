mod common;

use common::examples::*;
use common::*;
use monogenic::harmonics::*;
use monogenic::sphere_quad::{QuadratureRule, SpherePoint};
use rand::Rng;

#[test]
fn labels_skip_one() {
    assert_eq!(harmonic_labels(0), vec![0]);
    assert_eq!(harmonic_labels(2), vec![0, 2, 3, 4, 5]);
    assert!(eval_h(2, 1, &SpherePoint::<f64>::north(), 1.0).is_err());
    assert!(eval_h(2, 6, &SpherePoint::<f64>::north(), 1.0).is_err());
}

#[test]
fn orthonormal_basis_up_to_degree_eight() {
    for k in 0..=8 {
        let b = HarmonicBasis::new(k);
        let q = QuadratureRule::<f64>::product_rule(k + 2);
        let vals: Vec<_> = (0..b.len()).map(|i| q.sample_real(|p| b.eval(i, p).unwrap())).collect();
        for i in 0..b.len() {
            for j in 0..b.len() {
                let g = q.inner_sampled_real(&vals[i], &vals[j]) / (4.0 * std::f64::consts::PI);
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g - want).abs() < 1e-9, "k {k} ({i},{j}): {g}");
            }
        }
    }
}

#[test]
fn raw_norms_match_closed_form() {
    for k in 0..=6 {
        let q = QuadratureRule::<f64>::product_rule(k + 2);
        for n in harmonic_labels(k) {
            let got = q.integrate(|p| eval_h(k, n, p, 1.0).unwrap().powi(2));
            let want: f64 = harmonic_norm_sq(k, n).unwrap();
            assert!((got - want).abs() < 1e-12 * want.max(1.0), "k {k} n {n}");
        }
    }
}

#[test]
fn polynomials_are_harmonic_and_homogeneous() {
    let mut r = rng(8);
    for k in 0..=6 {
        for n in harmonic_labels(k) {
            let h = harmonic_to_poly::<f64>(k, n).unwrap();
            assert!(h.laplacian().max_coeff() < 1e-10, "k {k} n {n}");
            assert!((h.euler() - h.scale(k as f64)).max_coeff() < 1e-12);
            for _ in 0..10 {
                let p = random_point(&mut r);
                let d = h.eval(&p.xyz).scalar_part() - eval_h(k, n, &p, 1.0).unwrap();
                assert!(d.abs() < 1e-10);
            }
        }
    }
}

#[test]
fn radial_factor_scales_by_power() {
    let p = SpherePoint::from_angles(0.7, 1.2);
    let v1: f64 = eval_h(3, 4, &p, 1.0).unwrap();
    let v2: f64 = eval_h(3, 4, &p, 2.0).unwrap();
    assert!((v2 - 8.0 * v1).abs() < 1e-12);
}

#[test]
fn kernel_reproduces_random_combinations() {
    let mut r = rng(9);
    for k in 0..=5 {
        let b = HarmonicBasis::new(k);
        let q = QuadratureRule::<f64>::product_rule(k + 2);
        let coeffs: Vec<f64> = (0..b.len()).map(|_| r.random_range(-1.0..1.0)).collect();
        let f = q.sample_real(|p| b.combination(&coeffs, p).unwrap());
        for _ in 0..20 {
            let x = random_point(&mut r);
            let kern = q.sample_real(|y| kernel_r3(k, &x, y));
            let got = q.inner_sampled_real(&kern, &f) / (4.0 * std::f64::consts::PI);
            let want = b.combination(&coeffs, &x).unwrap();
            assert!((got - want).abs() < 1e-7, "k {k}");
        }
    }
}

#[test]
fn kernel_is_sum_of_products() {
    let mut r = rng(10);
    for k in 0..=6 {
        let b = HarmonicBasis::new(k);
        for _ in 0..10 {
            let (x, y) = (random_point(&mut r), random_point(&mut r));
            let s: f64 = (0..b.len()).map(|i| b.eval(i, &x).unwrap() * b.eval(i, &y).unwrap()).sum();
            assert!((s - kernel_r3(k, &x, &y)).abs() < 1e-10);
        }
    }
    assert!(kernel_r::<f64>(2, 1, &SpherePoint::north(), &SpherePoint::north()).is_err());
}

#[test]
fn general_dimension_kernel_agrees_in_three_dimensions() {
    let mut r = rng(12);
    for k in 0..6 {
        let (x, y) = (random_point(&mut r), random_point(&mut r));
        assert!((kernel_r(3, k, &x, &y).unwrap() - kernel_r3(k, &x, &y)).abs() < 1e-12);
    }
}

#[test]
fn reference_points_reproduce_coefficient_matrix() {
    let pts = points(&HARMONIC_POINTS);
    let z = ZonalHarmonicBasis::build(2, &pts).unwrap();
    for i in 0..5 {
        for j in 0..5 {
            assert!((z.a.get(i, j) - HARMONIC_A[i][j]).abs() < 2e-3, "({i},{j})");
        }
    }
    assert!(z.is_diagonally_dominant());
    assert!(z.min_gram_eigenvalue().unwrap() > 0.0);
}

#[test]
fn zonal_basis_is_orthonormal() {
    let mut r = rng(13);
    for k in 1..=4 {
        let pts: Vec<SpherePoint<f64>> = (0..2 * k + 1).map(|_| random_point(&mut r)).collect();
        let z = ZonalHarmonicBasis::build(k, &pts).unwrap();
        let q = QuadratureRule::<f64>::product_rule(k + 2);
        let vals: Vec<_> = (0..z.len()).map(|t| q.sample_real(|p| z.eval(t, p).unwrap())).collect();
        for s in 0..z.len() {
            for t in 0..z.len() {
                let g = q.inner_sampled_real(&vals[s], &vals[t]) / (4.0 * std::f64::consts::PI);
                assert!((g - if s == t { 1.0 } else { 0.0 }).abs() < 1e-8);
            }
        }
    }
}

#[test]
fn zonal_basis_rejects_bad_input() {
    let p = SpherePoint::<f64>::from_angles(0.2, 0.9);
    assert!(ZonalHarmonicBasis::build(1, &[p, p]).is_err());
    assert!(matches!(ZonalHarmonicBasis::build(1, &[p, p, p]), Err(monogenic::Error::SingularGram { .. })));
}

#[test]
fn deviation_matches_quadrature_and_bundle_shape() {
    let pts = points(&HARMONIC_POINTS);
    let z = ZonalHarmonicBasis::build(2, &pts).unwrap();
    let q = QuadratureRule::<f64>::product_rule(4);
    for t in 0..5 {
        let direct = q.integrate(|p| (z.eval(t, p).unwrap() - kernel_r3(2, p, &z.points[t]) * z.a.get(t, t)).powi(2)) / (4.0 * std::f64::consts::PI);
        assert!((direct - z.zonality_deviation(t).unwrap()).abs() < 1e-10);
    }
    let v = serde_json::to_value(z.bundle()).unwrap();
    for key in ["k", "points", "G", "A", "objective", "deviations", "diagonally_dominant"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert!((v["objective"].as_f64().unwrap() - HARMONIC_OBJECTIVE).abs() < 1e-3);
}
