mod common;

use common::*;
use monogenic::clifford3::Multivector3;
use monogenic::orthopoly::*;
use monogenic::sphere_quad::*;
use proptest::prelude::*;
use rand::Rng;

#[test]
fn recurrence_matches_explicit_sum() {
    let mut r = rng(1);
    for n in 0..=10 {
        for &a in &[0.0, 1.0, 2.0, 3.5] {
            for &b in &[0.0, 1.0, 2.0, 3.5] {
                let p = JacobiParams::new(n, a, b).unwrap();
                for _ in 0..100 {
                    let x: f64 = r.random_range(-1.0..1.0);
                    let want = jacobi_explicit(n, a, b, x);
                    let got = jacobi(&p, x).unwrap();
                    assert!((got - want).abs() <= 1e-10 * want.abs().max(1.0), "n {n} a {a} b {b} x {x}");
                }
            }
        }
    }
}

#[test]
fn small_cases() {
    let p = JacobiParams::new(1, 1.0f64, 1.0).unwrap();
    assert!((jacobi(&p, 0.3).unwrap() - 0.6).abs() < 1e-15);
    assert!((jacobi(&JacobiParams::new(2, 0.0f64, 0.0).unwrap(), 0.0).unwrap() + 0.5).abs() < 1e-15);
    assert!((jacobi_deriv(&JacobiParams::new(2, 0.0f64, 0.0).unwrap(), 0.3).unwrap() - 0.9).abs() < 1e-14);
    assert!(JacobiParams::new(2, -1.0, 0.0).is_err());
    assert_eq!(legendre(3, 0.0), 0.0);
    assert!((gegenbauer(1, 1.5, 0.2) - 0.6f64).abs() < 1e-15);
    assert_eq!(gegenbauer(-1, 1.5, 0.2f64), 0.0);
    assert_eq!(gegenbauer_deriv(0, 0.5, 0.2f64), 0.0);
}

#[test]
fn derivative_recurrence_in_x_and_theta() {
    let mut r = rng(2);
    for n in 1..=10usize {
        let a = n as f64;
        let p = JacobiParams::new(n, a, a).unwrap();
        let q = JacobiParams::new(n - 1, a, a).unwrap();
        let nf = n as f64;
        let s = 2.0 * nf + 2.0 * a;
        for _ in 0..50 {
            let x: f64 = r.random_range(-0.99..0.99);
            let lhs = s * (1.0 - x * x) * jacobi_deriv(&p, x).unwrap();
            let rhs = nf * (-s * x) * jacobi(&p, x).unwrap() + 2.0 * (nf + a) * (nf + a) * jacobi(&q, x).unwrap();
            assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1.0), "x-form n {n}");

            let th: f64 = r.random_range(0.01..std::f64::consts::PI - 0.01);
            let d_theta = central_diff(|t| jacobi(&p, t.cos()).unwrap(), th, 1e-5);
            let analytic = -th.sin() * jacobi_deriv(&p, th.cos()).unwrap();
            assert!((d_theta - analytic).abs() <= 1e-6 * analytic.abs().max(1.0));
            let lhs = -s * th.sin() * analytic;
            let rhs = nf * (-s * th.cos()) * jacobi(&p, th.cos()).unwrap() + 2.0 * (nf + a) * (nf + a) * jacobi(&q, th.cos()).unwrap();
            assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1.0), "theta-form n {n}");
        }
    }
}

#[test]
fn derivatives_match_finite_differences() {
    let mut r = rng(3);
    for _ in 0..100 {
        let k = r.random_range(0..=8i64);
        let mu = [0.5, 1.5, 2.0][r.random_range(0..3)];
        let x: f64 = r.random_range(-0.95..0.95);
        let fd = central_diff(|t| gegenbauer(k, mu, t), x, 1e-5);
        let an = gegenbauer_deriv(k, mu, x);
        assert!((fd - an).abs() <= 1e-6 * an.abs().max(1.0), "k {k} mu {mu}");
        let p = JacobiParams::new(k as usize, 1.0, 2.5).unwrap();
        let fd = central_diff(|t| jacobi(&p, t).unwrap(), x, 1e-5);
        assert!((fd - jacobi_deriv(&p, x).unwrap()).abs() <= 1e-6 * fd.abs().max(1.0));
    }
}

#[test]
fn endpoint_derivative_is_finite() {
    for n in 1..8 {
        let p = JacobiParams::new(n, 2.0f64, 2.0).unwrap();
        let near = jacobi_deriv(&p, 1.0 - 1e-9).unwrap();
        let at = jacobi_deriv(&p, 1.0).unwrap();
        assert!((near - at).abs() < 1e-5 * at.abs().max(1.0));
    }
}

#[test]
fn monomial_coefficients_reproduce_values() {
    let mut r = rng(4);
    for n in 0..=8 {
        let p = JacobiParams::new(n, 1.5, 0.5).unwrap();
        let c = jacobi_coeffs(&p).unwrap();
        for _ in 0..10 {
            let x: f64 = r.random_range(-1.0..1.0);
            let v = c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci);
            assert!((v - jacobi(&p, x).unwrap()).abs() < 1e-11);
        }
    }
}

proptest! {
    #[test]
    fn symmetric_parity(n in 0usize..12, a in 0usize..6, x in -1.0f64..1.0) {
        let p = JacobiParams::<f64>::symmetric(n, a);
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let lhs = jacobi(&p, -x).unwrap();
        let rhs = sign * jacobi(&p, x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0));
    }

    #[test]
    fn gegenbauer_half_is_legendre(k in 0usize..=10, x in -1.0f64..1.0) {
        prop_assert!((gegenbauer(k as i64, 0.5, x) - legendre(k, x)).abs() < 1e-13);
    }

    #[test]
    fn geodesic_steps_stay_on_sphere(th in 0.0f64..std::f64::consts::TAU, ph in 0.0f64..std::f64::consts::PI, v in prop::array::uniform3(-1.0f64..1.0), t in -3.0f64..3.0) {
        let p = SpherePoint::from_angles(th, ph);
        let w = tangent_project(&p, &v);
        let n = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
        prop_assume!(n > 1e-6);
        let w = w.map(|c| c / n);
        let q = geodesic_step(&p, &w, t).unwrap();
        let len = q.xyz.iter().map(|c| c * c).sum::<f64>().sqrt();
        prop_assert!((len - 1.0).abs() < 1e-12);
        prop_assert!((p.dot(&q) - t.cos()).abs() < 1e-12);
    }
}

fn double_factorial(n: i64) -> f64 {
    if n <= 0 { 1.0 } else { (n as f64) * double_factorial(n - 2) }
}

fn monomial_integral(a: u32, b: u32, c: u32) -> f64 {
    if a % 2 == 1 || b % 2 == 1 || c % 2 == 1 {
        return 0.0;
    }
    4.0 * std::f64::consts::PI * double_factorial(a as i64 - 1) * double_factorial(b as i64 - 1) * double_factorial(c as i64 - 1)
        / double_factorial((a + b + c) as i64 + 1)
}

#[test]
fn product_rule_integrates_monomials_exactly() {
    for deg in [1usize, 3, 6, 10] {
        let q = QuadratureRule::<f64>::product_rule(deg);
        let top = 2 * deg as u32;
        for a in 0..=top {
            for b in 0..=top - a {
                for c in 0..=top - a - b {
                    let got = q.integrate(|p| p.xyz[0].powi(a as i32) * p.xyz[1].powi(b as i32) * p.xyz[2].powi(c as i32));
                    let want = monomial_integral(a, b, c);
                    assert!((got - want).abs() <= 1e-10 * 4.0 * std::f64::consts::PI, "deg {deg}: x^{a} y^{b} z^{c}");
                }
            }
        }
    }
}

#[test]
fn weights_sum_to_area() {
    let q = QuadratureRule::<f64>::product_rule(5);
    let total: f64 = q.weights.iter().sum();
    assert!((total - 4.0 * std::f64::consts::PI).abs() < 1e-12);
    assert!(q.weights.iter().all(|&w| w > 0.0));
}

#[test]
fn inner_product_is_conjugate_symmetric() {
    let mut r = rng(5);
    let q = QuadratureRule::<f64>::product_rule(4);
    let (a, b, c, d) = (random_mv(&mut r), random_mv(&mut r), random_mv(&mut r), random_mv(&mut r));
    let f = |p: &SpherePoint<f64>| a.scale(p.xyz[0]) + b * Multivector3::vector(p.xyz);
    let g = |p: &SpherePoint<f64>| c.scale(p.xyz[2] * p.xyz[1]) + d;
    let fg = q.inner(f, g);
    let gf = q.inner(g, f);
    assert!((fg - gf.conj()).max_abs() < 1e-12);
}

#[test]
fn gauss_legendre_nodes() {
    let (x, w) = gauss_legendre::<f64>(5);
    assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    for &xi in &x {
        assert!(legendre(5, xi).abs() < 1e-13);
    }
}

#[test]
fn point_constructors() {
    assert!(SpherePoint::<f64>::from_cartesian([0.0, 0.0, 0.0]).is_err());
    let p = SpherePoint::from_cartesian([0.0, 2.0, 0.0]).unwrap();
    assert!((p.theta - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    assert!((p.phi - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    let q = SpherePoint::from_angles(p.theta, p.phi);
    assert!((q.xyz[1] - 1.0).abs() < 1e-15);
    let json = serde_json::to_string(&q).unwrap();
    let back: SpherePoint<f64> = serde_json::from_str(&json).unwrap();
    assert!((back.dot(&q) - 1.0).abs() < 1e-15);
}
