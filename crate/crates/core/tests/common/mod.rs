//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

pub mod examples;

use monogenic::clifford3::Multivector3;
use monogenic::qlinalg::{ComplexMatrix, SquareMatrix};
use num_complex::Complex;
use monogenic::sphere_quad::SpherePoint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn binom(n: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i as f64) / (i as f64 + 1.0))
}

/// `2^{-n} sum_s C(n+a, n-s) C(n+b, s) (x-1)^s (x+1)^{n-s}`.
pub fn jacobi_explicit(n: usize, a: f64, b: f64, x: f64) -> f64 {
    let mut s = 0.0;
    for k in 0..=n {
        s += binom(n as f64 + a, n - k) * binom(n as f64 + b, k) * (x - 1.0).powi(k as i32) * (x + 1.0).powi((n - k) as i32);
    }
    s / 2f64.powi(n as i32)
}

pub fn random_point(r: &mut ChaCha8Rng) -> SpherePoint<f64> {
    SpherePoint::random(r)
}

/// A point away from both poles.
pub fn random_interior_point(r: &mut ChaCha8Rng) -> SpherePoint<f64> {
    SpherePoint::from_angles(r.random_range(0.0..std::f64::consts::TAU), r.random_range(0.05..std::f64::consts::PI - 0.05))
}

pub fn random_mv(r: &mut ChaCha8Rng) -> Multivector3<f64> {
    let mut c = [0.0; 8];
    for x in c.iter_mut() {
        *x = r.random_range(-1.0..1.0);
    }
    Multivector3::from_coeffs(c)
}

pub fn random_even(r: &mut ChaCha8Rng) -> Multivector3<f64> {
    let m = random_mv(r);
    m.even_part().to_multivector()
}

/// Random rotation matrix from a normalized Gaussian quaternion.
pub fn random_rotation(r: &mut ChaCha8Rng) -> [[f64; 3]; 3] {
    let mut q: [f64; 4] = [0.0; 4];
    for x in q.iter_mut() {
        *x = r.sample(rand_distr::StandardNormal);
    }
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let [w, x, y, z] = q.map(|v| v / n);
    [
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
        [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
        [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
    ]
}

pub fn rotate(m: &[[f64; 3]; 3], p: &SpherePoint<f64>) -> SpherePoint<f64> {
    let v = p.xyz;
    let out = [0, 1, 2].map(|i| m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2]);
    SpherePoint::from_cartesian(out).unwrap()
}

/// Central difference of a scalar function of one variable.
pub fn central_diff<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Gauss-Jordan inverse with partial pivoting; independent of the eigensolver.
pub fn complex_inverse(m: &ComplexMatrix<f64>) -> ComplexMatrix<f64> {
    let n = m.dim();
    let zero = Complex::new(0.0, 0.0);
    let mut a: Vec<Vec<Complex<f64>>> = m.rows();
    let mut inv: Vec<Vec<Complex<f64>>> = (0..n).map(|i| (0..n).map(|j| if i == j { Complex::new(1.0, 0.0) } else { zero }).collect()).collect();
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| a[x][c].norm().partial_cmp(&a[y][c].norm()).unwrap()).unwrap();
        a.swap(c, p);
        inv.swap(c, p);
        let d = a[c][c];
        for j in 0..n {
            a[c][j] /= d;
            inv[c][j] /= d;
        }
        for i in 0..n {
            if i != c {
                let f = a[i][c];
                for j in 0..n {
                    let (ac, ic) = (a[c][j], inv[c][j]);
                    a[i][j] -= f * ac;
                    inv[i][j] -= f * ic;
                }
            }
        }
    }
    SquareMatrix::from_fn(n, |i, j| inv[i][j])
}
