//! Points on the unit sphere, product quadrature, and Clifford-valued inner
//! products over S^2.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::clifford3::Multivector3;
use crate::error::{Error, Result};
use crate::scalar::{dot, norm, Real, Vec3};

/// A unit vector on S^2 together with its chart coordinates.
///
/// `xyz = (cos(theta) sin(phi), sin(theta) sin(phi), cos(phi))` with
/// `theta` in `[0, 2 pi)` and `phi` in `[0, pi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[T; 3]", into = "[T; 3]")]
#[serde(bound = "T: Real")]
pub struct SpherePoint<T> {
    pub theta: T,
    pub phi: T,
    pub xyz: Vec3<T>,
}

impl<T: Real> SpherePoint<T> {
    pub fn from_angles(theta: T, phi: T) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self { theta: wrap_angle(theta), phi, xyz: [ct * sp, st * sp, cp] }
    }

    /// Normalizes `v` onto the sphere.
    pub fn from_cartesian(v: Vec3<T>) -> Result<Self> {
        let r = norm(&v);
        if !(r > T::epsilon()) || !r.is_finite() {
            return Err(Error::DegeneratePoint("cannot project the zero vector onto the sphere"));
        }
        let xyz = [v[0] / r, v[1] / r, v[2] / r];
        let phi = xyz[2].max(-T::one()).min(T::one()).acos();
        let theta = wrap_angle(xyz[1].atan2(xyz[0]));
        Ok(Self { theta, phi, xyz })
    }

    pub fn north() -> Self {
        Self::from_angles(T::zero(), T::zero())
    }

    /// A point drawn uniformly from S^2 (normalized Gaussian triple).
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let v: Vec3<f64> = [rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal)];
            if let Ok(p) = Self::from_cartesian([T::lit(v[0]), T::lit(v[1]), T::lit(v[2])]) {
                return p;
            }
        }
    }

    /// The Clifford vector `x1 e1 + x2 e2 + x3 e3` of this point.
    pub fn vector(&self) -> Multivector3<T> {
        Multivector3::vector(self.xyz)
    }

    pub fn dot(&self, other: &Self) -> T {
        dot(&self.xyz, &other.xyz)
    }
}

impl<T: Real> TryFrom<[T; 3]> for SpherePoint<T> {
    type Error = Error;
    fn try_from(v: [T; 3]) -> Result<Self> {
        Self::from_cartesian(v)
    }
}

impl<T: Real> From<SpherePoint<T>> for [T; 3] {
    fn from(p: SpherePoint<T>) -> Self {
        p.xyz
    }
}

/// Reduces an angle to `[0, 2 pi)`.
pub fn wrap_angle<T: Real>(a: T) -> T {
    let two_pi = T::PI() + T::PI();
    let mut m = a % two_pi;
    if m < T::zero() {
        m = m + two_pi;
    }
    if m >= two_pi {
        m = T::zero();
    }
    m
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // work in f64 and convert; the f32 rule is the rounded f64 rule
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_deriv(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_deriv(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = T::lit(-x);
        nodes[n - 1 - i] = T::lit(x);
        weights[i] = T::lit(w);
        weights[n - 1 - i] = T::lit(w);
    }
    if n % 2 == 1 {
        nodes[n / 2] = T::zero();
    }
    (nodes, weights)
}

fn legendre_with_deriv(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    (p1, nf * (x * p1 - p0) / (x * x - 1.0))
}

/// A positive-weight quadrature rule on S^2 for the surface measure.
#[derive(Debug, Clone)]
pub struct QuadratureRule<T> {
    pub nodes: Vec<SpherePoint<T>>,
    pub weights: Vec<T>,
    /// Spherical polynomials of total degree up to `2 * degree` are integrated exactly.
    pub degree: usize,
}

impl<T: Real> QuadratureRule<T> {
    /// Gauss-Legendre in `cos(phi)` (`deg + 1` nodes) crossed with a
    /// `2 deg + 2` point trapezoid rule in `theta`.
    pub fn product_rule(deg: usize) -> Self {
        let (u, wu) = gauss_legendre::<T>(deg + 1);
        let nt = 2 * deg + 2;
        let two_pi = T::PI() + T::PI();
        let dtheta = two_pi / T::from_usize_lossy(nt);
        let mut nodes = Vec::with_capacity(u.len() * nt);
        let mut weights = Vec::with_capacity(u.len() * nt);
        for (&ui, &wi) in u.iter().zip(&wu) {
            let phi = ui.acos();
            for j in 0..nt {
                nodes.push(SpherePoint::from_angles(T::from_usize_lossy(j) * dtheta, phi));
                weights.push(wi * dtheta);
            }
        }
        Self { nodes, weights, degree: deg }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: Fn(&SpherePoint<T>) -> T>(&self, f: F) -> T {
        self.nodes.iter().zip(&self.weights).fold(T::zero(), |acc, (p, &w)| acc + w * f(p))
    }

    pub fn integrate_mv<F: Fn(&SpherePoint<T>) -> Multivector3<T>>(&self, f: F) -> Multivector3<T> {
        self.nodes.iter().zip(&self.weights).fold(Multivector3::zero(), |acc, (p, &w)| acc + f(p).scale(w))
    }

    /// `sum_i w_i conj(f(p_i)) g(p_i)`: the Clifford-valued inner product for
    /// the surface measure (total mass `4 pi`).
    pub fn inner<F, G>(&self, f: F, g: G) -> Multivector3<T>
    where
        F: Fn(&SpherePoint<T>) -> Multivector3<T>,
        G: Fn(&SpherePoint<T>) -> Multivector3<T>,
    {
        self.integrate_mv(|p| f(p).conj() * g(p))
    }

    /// The inner product for the normalized measure `d sigma / (4 pi)`, under
    /// which the reproducing kernels reproduce.
    pub fn normalized_inner<F, G>(&self, f: F, g: G) -> Multivector3<T>
    where
        F: Fn(&SpherePoint<T>) -> Multivector3<T>,
        G: Fn(&SpherePoint<T>) -> Multivector3<T>,
    {
        self.inner(f, g).scale(T::one() / surface_area::<T>())
    }

    /// Values of `f` at every node, for reuse across many inner products.
    pub fn sample<F: Fn(&SpherePoint<T>) -> Multivector3<T>>(&self, f: F) -> Vec<Multivector3<T>> {
        self.nodes.iter().map(f).collect()
    }

    pub fn sample_real<F: Fn(&SpherePoint<T>) -> T>(&self, f: F) -> Vec<T> {
        self.nodes.iter().map(f).collect()
    }

    /// Inner product (surface measure) of pre-sampled functions.
    pub fn inner_sampled(&self, f: &[Multivector3<T>], g: &[Multivector3<T>]) -> Multivector3<T> {
        self.weights
            .iter()
            .zip(f.iter().zip(g))
            .fold(Multivector3::zero(), |acc, (&w, (a, b))| acc + (a.conj() * *b).scale(w))
    }

    pub fn inner_sampled_real(&self, f: &[T], g: &[T]) -> T {
        self.weights.iter().zip(f.iter().zip(g)).fold(T::zero(), |acc, (&w, (&a, &b))| acc + w * a * b)
    }
}

/// Area of the unit sphere, `4 pi`.
pub fn surface_area<T: Real>() -> T {
    T::lit(4.0) * T::PI()
}

/// Removes the normal component: `v - <v, p> p`.
pub fn tangent_project<T: Real>(p: &SpherePoint<T>, v: &Vec3<T>) -> Vec3<T> {
    let c = dot(v, &p.xyz);
    [v[0] - c * p.xyz[0], v[1] - c * p.xyz[1], v[2] - c * p.xyz[2]]
}

/// Moves along the great circle through `p` with unit tangent `w`:
/// `cos(t) p + sin(t) w`, renormalized.
pub fn geodesic_step<T: Real>(p: &SpherePoint<T>, w: &Vec3<T>, t: T) -> Result<SpherePoint<T>> {
    let inner = dot(&p.xyz, w);
    let wn = norm(w);
    let tol = T::tol(1e-10);
    if inner.abs() > tol || (wn - T::one()).abs() > tol {
        return Err(Error::NotUnitTangent { inner: inner.abs().as_f64(), norm: wn.as_f64() });
    }
    let (s, c) = t.sin_cos();
    SpherePoint::from_cartesian([
        c * p.xyz[0] + s * w[0],
        c * p.xyz[1] + s * w[1],
        c * p.xyz[2] + s * w[2],
    ])
}
