//! Dirac and spherical Dirac operators, the explicit basis of spherical
//! monogenics, the monogenic reproducing kernel, and the equator sums.
//!
//! A monogenic basis of degree `d` has `d + 1` members `F_d^n` obtained by
//! applying the Dirac operator to degree `d + 1` harmonics:
//! `F^0 = dirac(H^0)` and `F^n = dirac(H^{2n}) - dirac(H^{2n+1}) e12`.
//! Closed forms in the `(theta, phi)` chart are evaluated directly; the
//! polynomial route through [`PolyField`] serves as an independent oracle.

use serde::{Deserialize, Serialize};

use crate::clifford3::{exp_e12, Multivector3};
use crate::error::{Error, Result};
use crate::harmonics::{harmonic_norm_sq, harmonic_to_poly};
use crate::orthopoly::{gegenbauer, jacobi_unchecked, legendre, legendre_deriv, JacobiParams};
use crate::polyfield::PolyField;
use crate::qlinalg::{min_eigenvalue, EvenMatrix, SquareMatrix};
use crate::scalar::{factorial, Real};
use crate::sphere_quad::{surface_area, SpherePoint};

/// Left Dirac derivative of a polynomial field.
pub fn dirac<T: Real>(f: &PolyField<T>) -> PolyField<T> {
    f.dirac()
}

/// Spherical Dirac operator applied to a polynomial field.
pub fn spherical_dirac<T: Real>(f: &PolyField<T>) -> PolyField<T> {
    f.spherical_dirac()
}

/// Step for the central differences in [`gamma_op`].
pub const GAMMA_STEP: f64 = 1e-6;
/// Points closer than this to a pole (in `phi`) are rejected by [`gamma_op`].
pub const POLE_GUARD: f64 = 1e-8;

/// Spherical Dirac operator in the `(theta, phi)` chart:
/// `(1/sin phi) e23 e^{-e12 theta} e^{phi e13 e^{-e12 theta}} d_theta f + e13 e^{-e12 theta} d_phi f`,
/// with both partials taken by central differences.
pub fn gamma_op<T, F>(f: F, p: &SpherePoint<T>) -> Result<Multivector3<T>>
where
    T: Real,
    F: Fn(T, T) -> Multivector3<T>,
{
    let guard = T::lit(POLE_GUARD);
    if p.phi < guard || T::PI() - p.phi < guard {
        return Err(Error::NearPole { phi: p.phi.as_f64(), tol: POLE_GUARD });
    }
    let h = T::lit(GAMMA_STEP);
    let two_h = h + h;
    let (th, ph) = (p.theta, p.phi);
    let d_theta = (f(th + h, ph) - f(th - h, ph)).scale(T::one() / two_h);
    let d_phi = (f(th, ph + h) - f(th, ph - h)).scale(T::one() / two_h);
    Ok(gamma_from_partials(th, ph, &d_theta, &d_phi))
}

/// The chart form of the spherical Dirac operator given both partials.
pub fn gamma_from_partials<T: Real>(theta: T, phi: T, d_theta: &Multivector3<T>, d_phi: &Multivector3<T>) -> Multivector3<T> {
    let rot = exp_e12(-theta);
    let e13r = Multivector3::e13() * rot;
    let tilt = exp_tilt(phi, theta);
    let first = (Multivector3::e23() * rot * tilt * *d_theta).scale(T::one() / phi.sin());
    first + e13r * *d_phi
}

/// `e^{phi e13 e^{-e12 theta}} = cos(phi) + sin(phi) e13 e^{-e12 theta}`.
fn exp_tilt<T: Real>(phi: T, theta: T) -> Multivector3<T> {
    let mu = Multivector3::e13() * exp_e12(-theta);
    Multivector3::scalar(phi.cos()) + mu.scale(phi.sin())
}

fn check_index(degree: usize, n: usize) -> Result<()> {
    if n > degree {
        return Err(Error::IndexOutOfRange { what: "monogenic basis index", index: n });
    }
    Ok(())
}

/// Closed form of the raw monogenic `F_degree^n` at `p`, `0 <= n <= degree`.
pub fn eval_f<T: Real>(degree: usize, n: usize, p: &SpherePoint<T>) -> Result<Multivector3<T>> {
    check_index(degree, n)?;
    Ok(eval_f_unchecked(degree + 1, n, p))
}

/// `k` is the degree of the underlying harmonics.
fn eval_f_unchecked<T: Real>(k: usize, n: usize, p: &SpherePoint<T>) -> Multivector3<T> {
    let omega = p.vector();
    let (theta, phi) = (p.theta, p.phi);
    let (sp, cp) = phi.sin_cos();
    let kf = T::from_usize_lossy(k);
    let mu = Multivector3::e13() * exp_e12(-theta);
    if n == 0 {
        let c = T::one() / (T::lit(8.0) * T::PI()).sqrt();
        let bracket = Multivector3::scalar(kf * c * legendre(k, cp)) - mu.scale(c * legendre_deriv(k, cp) * sp);
        return omega * bracket;
    }
    let nf = T::from_usize_lossy(n);
    let lead = T::from_usize_lossy(k - n) * jacobi_unchecked(&JacobiParams::symmetric(k - n, n), cp);
    let tail = if k > n { kf * jacobi_unchecked(&JacobiParams::symmetric(k - n - 1, n), cp) } else { T::zero() };
    let first = mu * exp_tilt(-phi, theta) * exp_e12(-nf * theta);
    let second = Multivector3::e13() * exp_e12(-(nf + T::one()) * theta);
    let c = sp.powi(n as i32 - 1) / (T::lit(2.0).powi(n as i32 + 1) * T::PI().sqrt());
    omega * (first.scale(lead) - second.scale(tail)).scale(c)
}

/// The additional function `dirac(H_k^{2k})` of a degree `k - 1` basis, in
/// closed form:
/// `omega k sin^{k-1}(phi) / (2^{k+1} sqrt(pi)) e^{e12 theta} e^{-phi e13 e^{e12 theta}} e^{-e12 k theta} e13`.
pub fn eval_f_top<T: Real>(degree: usize, p: &SpherePoint<T>) -> Multivector3<T> {
    let k = degree + 1;
    let kf = T::from_usize_lossy(k);
    let (theta, phi) = (p.theta, p.phi);
    let c = kf * phi.sin().powi(k as i32 - 1) / (T::lit(2.0).powi(k as i32 + 1) * T::PI().sqrt());
    let nu = Multivector3::e13() * exp_e12(theta);
    let tilt = Multivector3::scalar(phi.cos()) - nu.scale(phi.sin());
    p.vector() * (exp_e12(theta) * tilt * exp_e12(-kf * theta) * Multivector3::e13()).scale(c)
}

/// Exact `||F_degree^n||^2` for the surface measure.
pub fn monogenic_norm_sq<T: Real>(degree: usize, n: usize) -> Result<T> {
    check_index(degree, n)?;
    let k = degree + 1;
    if n == 0 {
        return Ok(T::from_usize_lossy(k) / T::lit(2.0));
    }
    let kf = factorial::<T>(k);
    Ok(kf * kf / (factorial::<T>(k + n) * factorial::<T>(k - n - 1)))
}

/// Polynomial form of `F_degree^n` through the exact Dirac operator.
pub fn monogenic_to_poly<T: Real>(degree: usize, n: usize) -> Result<PolyField<T>> {
    check_index(degree, n)?;
    let k = degree + 1;
    if n == 0 {
        return Ok(harmonic_to_poly::<T>(k, 0)?.dirac());
    }
    let even = harmonic_to_poly::<T>(k, 2 * n)?.dirac();
    let odd = harmonic_to_poly::<T>(k, 2 * n + 1)?.dirac();
    Ok(even - odd.right_mul(&Multivector3::e12()))
}

/// The degree-`degree` monogenic basis `F^0, ..., F^degree`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonogenicBasis {
    pub degree: usize,
}

impl MonogenicBasis {
    pub fn new(degree: usize) -> Self {
        Self { degree }
    }

    pub fn len(&self) -> usize {
        self.degree + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Degree `k = degree + 1` of the harmonics the basis is built from.
    pub fn harmonic_degree(&self) -> usize {
        self.degree + 1
    }

    /// Ratio `||dirac H||^2 / ||H||^2 = k (2k + 1)` for harmonics of degree `k`.
    pub fn norm_theorem_ratio<T: Real>(&self) -> T {
        let k = self.harmonic_degree();
        T::from_usize_lossy(k * (2 * k + 1))
    }

    pub fn eval_raw<T: Real>(&self, n: usize, p: &SpherePoint<T>) -> Result<Multivector3<T>> {
        eval_f(self.degree, n, p)
    }

    pub fn norm_sq<T: Real>(&self, n: usize) -> Result<T> {
        monogenic_norm_sq(self.degree, n)
    }

    /// Factor turning the raw function into one of unit norm for the
    /// normalized measure.
    pub fn scale<T: Real>(&self, n: usize) -> Result<T> {
        Ok((surface_area::<T>() / self.norm_sq::<T>(n)?).sqrt())
    }

    /// Orthonormal basis function for the normalized measure.
    pub fn eval<T: Real>(&self, n: usize, p: &SpherePoint<T>) -> Result<Multivector3<T>> {
        Ok(self.eval_raw(n, p)?.scale(self.scale(n)?))
    }

    pub fn poly<T: Real>(&self, n: usize) -> Result<PolyField<T>> {
        monogenic_to_poly(self.degree, n)
    }

    /// Raw additional function `dirac(H_k^{2k})`.
    pub fn eval_top_raw<T: Real>(&self, p: &SpherePoint<T>) -> Multivector3<T> {
        eval_f_top(self.degree, p)
    }

    /// Exact squared norm of the additional function, `k (2k+1) ||H_k^{2k}||^2`.
    pub fn top_norm_sq<T: Real>(&self) -> T {
        let k = self.harmonic_degree();
        self.norm_theorem_ratio::<T>() * harmonic_norm_sq::<T>(k, 2 * k).expect("label 2k is valid")
    }

    pub fn eval_top<T: Real>(&self, p: &SpherePoint<T>) -> Multivector3<T> {
        self.eval_top_raw(p).scale((surface_area::<T>() / self.top_norm_sq::<T>()).sqrt())
    }

    /// Evaluates `sum_n F~^n(p) c_n` with coefficients on the right.
    pub fn combination<T: Real>(&self, coeffs: &[Multivector3<T>], p: &SpherePoint<T>) -> Result<Multivector3<T>> {
        let mut s = Multivector3::zero();
        for (n, c) in coeffs.iter().enumerate() {
            s += self.eval(n, p)? * *c;
        }
        Ok(s)
    }
}

/// The monogenic reproducing kernel in dimension `m`, with `mu = m/2 - 1`:
/// `(k + m - 2)/(m - 2) C_k^mu(<x, y>) + (x ^ y) C_{k-1}^{mu+1}(<x, y>)`.
///
/// It reproduces degree-`k` monogenics for the normalized surface measure.
pub fn kernel_k<T: Real>(m: usize, k: usize, x: &SpherePoint<T>, y: &SpherePoint<T>) -> Result<Multivector3<T>> {
    if m < 3 {
        return Err(Error::DimensionTooSmall(m));
    }
    let mf = T::from_usize_lossy(m);
    let two = T::lit(2.0);
    let mu = mf / two - T::one();
    let t = x.dot(y);
    let c = (T::from_usize_lossy(k) + mf - two) / (mf - two);
    let scalar = Multivector3::scalar(c * gegenbauer(k as i64, mu, t));
    Ok(scalar + Multivector3::wedge(&x.xyz, &y.xyz).scale(gegenbauer(k as i64 - 1, mu + T::one(), t)))
}

/// `(k+1) P_k(<x, y>) + (x ^ y) C_{k-1}^{3/2}(<x, y>)`, the three-dimensional kernel.
pub fn kernel_k3<T: Real>(k: usize, x: &SpherePoint<T>, y: &SpherePoint<T>) -> Multivector3<T> {
    let t = x.dot(y);
    let scalar = Multivector3::scalar(T::from_usize_lossy(k + 1) * legendre(k, t));
    scalar + Multivector3::wedge(&x.xyz, &y.xyz).scale(gegenbauer(k as i64 - 1, T::lit(1.5), t))
}

/// Result of the extra-function consistency checks for one degree.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtraRelationReport {
    /// Degree `k` of the underlying harmonics.
    pub k: usize,
    /// max |closed form of dirac(H^{2k}) - polynomial dirac(H^{2k})|
    pub closed_vs_poly: f64,
    /// max |dirac(H^{2k}) - dirac(H^{2k+1}) e12|
    pub even_vs_odd: f64,
    /// max |normalized top function - normalized F^{k-1} e13|
    pub normalized_relation: f64,
    /// Scalar `c` with raw top function `= c F^{k-1} e13`.
    pub raw_factor: f64,
    /// max |raw top function - raw_factor F^{k-1} e13|
    pub raw_relation: f64,
}

impl ExtraRelationReport {
    pub fn max_deviation(&self) -> f64 {
        self.closed_vs_poly.max(self.even_vs_odd).max(self.normalized_relation).max(self.raw_relation)
    }
}

/// Checks the extra function of the degree `k - 1` basis at the given
/// points: its closed form against the polynomial oracle, the identity
/// `dirac(H^{2k}) = dirac(H^{2k+1}) e12`, and its proportionality to
/// `F^{k-1} e13`.
pub fn extra_relation_check<T: Real>(k: usize, points: &[SpherePoint<T>]) -> Result<ExtraRelationReport> {
    if k == 0 {
        return Err(Error::IndexOutOfRange { what: "harmonic degree for the extra relation", index: 0 });
    }
    let basis = MonogenicBasis::new(k - 1);
    let even = harmonic_to_poly::<T>(k, 2 * k)?.dirac();
    let odd = harmonic_to_poly::<T>(k, 2 * k + 1)?.dirac().right_mul(&Multivector3::e12());
    let raw_factor = (basis.top_norm_sq::<T>() / basis.norm_sq::<T>(k - 1)?).sqrt();
    let mut report = ExtraRelationReport {
        k,
        closed_vs_poly: 0.0,
        even_vs_odd: 0.0,
        normalized_relation: 0.0,
        raw_factor: raw_factor.as_f64(),
        raw_relation: 0.0,
    };
    for p in points {
        let top = basis.eval_top_raw(p);
        let poly = even.eval(&p.xyz);
        report.closed_vs_poly = report.closed_vs_poly.max((top - poly).max_abs().as_f64());
        report.even_vs_odd = report.even_vs_odd.max((poly - odd.eval(&p.xyz)).max_abs().as_f64());
        let rhs_raw = basis.eval_raw(k - 1, p)? * Multivector3::e13();
        report.raw_relation = report.raw_relation.max((top - rhs_raw.scale(raw_factor)).max_abs().as_f64());
        let rhs = basis.eval(k - 1, p)? * Multivector3::e13();
        report.normalized_relation = report.normalized_relation.max((basis.eval_top(p) - rhs).max_abs().as_f64());
    }
    Ok(report)
}

/// Sums of products of basis functions over `k + 1` equally spaced equator points.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct EquatorGram<T> {
    pub degree: usize,
    pub entries: Vec<Vec<Multivector3<T>>>,
}

impl<T: Real> EquatorGram<T> {
    pub fn max_off_diagonal(&self) -> T {
        let mut m = T::zero();
        for (i, row) in self.entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                if i != j {
                    m = m.max(e.max_abs());
                }
            }
        }
        m
    }

    /// Largest off-diagonal scalar part.
    pub fn max_off_diagonal_scalar(&self) -> T {
        let mut m = T::zero();
        for (i, row) in self.entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                if i != j {
                    m = m.max(e.scalar_part().abs());
                }
            }
        }
        m
    }

    /// The entries as a matrix over the even subalgebra. Products of two
    /// odd functions are even, so nothing is discarded.
    pub fn to_even_matrix(&self) -> EvenMatrix<T> {
        SquareMatrix::from_fn(self.entries.len(), |i, j| self.entries[i][j].even_part())
    }

    /// Smallest eigenvalue of the complex adjoint of the sum, which is
    /// positive exactly when the sampled basis is linearly independent.
    pub fn min_eigenvalue(&self) -> Result<T> {
        min_eigenvalue(&self.to_even_matrix())
    }

    /// Diagonal scalar parts.
    pub fn diagonal(&self) -> Vec<T> {
        self.entries.iter().enumerate().map(|(i, r)| r[i].scalar_part()).collect()
    }

    /// Largest non-scalar component on the diagonal.
    pub fn diagonal_residue(&self) -> T {
        self.entries.iter().enumerate().fold(T::zero(), |acc, (i, r)| {
            let mut d = r[i];
            d.c[0] = T::zero();
            acc.max(d.max_abs())
        })
    }
}

fn equator_points<T: Real>(degree: usize) -> Vec<SpherePoint<T>> {
    let count = T::from_usize_lossy(degree + 1);
    let two_pi = T::PI() + T::PI();
    (0..=degree).map(|j| SpherePoint::from_angles(two_pi * T::from_usize_lossy(j) / count, T::FRAC_PI_2())).collect()
}

/// `entry(n, l) = sum_j conj(F^n(eta_j)) F^l(eta_j)` over the equator points
/// `eta_j = (2 pi j / (degree + 1), pi / 2)`, for the orthonormal basis.
///
/// Scalar parts off the diagonal always vanish. For odd `degree` the
/// discrete sum aliases: entries with `n + l = degree` keep an `e13`
/// component, so the full entries are diagonal only for even `degree`.
pub fn equator_gram<T: Real>(degree: usize) -> Result<EquatorGram<T>> {
    equator_gram_with(degree, |n, p| MonogenicBasis::new(degree).eval(n, p))
}

/// As [`equator_gram`] for the raw basis.
pub fn equator_gram_raw<T: Real>(degree: usize) -> Result<EquatorGram<T>> {
    equator_gram_with(degree, |n, p| eval_f(degree, n, p))
}

fn equator_gram_with<T: Real, F>(degree: usize, f: F) -> Result<EquatorGram<T>>
where
    F: Fn(usize, &SpherePoint<T>) -> Result<Multivector3<T>>,
{
    let pts = equator_points::<T>(degree);
    let mut vals = Vec::with_capacity(degree + 1);
    for n in 0..=degree {
        vals.push(pts.iter().map(|p| f(n, p)).collect::<Result<Vec<_>>>()?);
    }
    let entries = (0..=degree)
        .map(|n| (0..=degree).map(|l| vals[n].iter().zip(&vals[l]).map(|(a, b)| a.conj() * *b).sum()).collect())
        .collect();
    Ok(EquatorGram { degree, entries })
}

/// Closed-form diagonal of [`equator_gram_raw`] for `1 <= n <= degree`:
/// `(d+1)/(2^{2n+2} pi) [(d+1-n)^2 P_{d+1-n}^{(n,n)}(0)^2 + (d+1)^2 P_{d-n}^{(n,n)}(0)^2]`.
/// For `n = 0` the raw sum is half of this expression.
pub fn equator_diagonal_closed_form<T: Real>(degree: usize, n: usize) -> Result<T> {
    check_index(degree, n)?;
    let kk = degree + 1;
    let a = T::from_usize_lossy(kk - n) * jacobi_unchecked(&JacobiParams::symmetric(kk - n, n), T::zero());
    let b = if kk > n { T::from_usize_lossy(kk) * jacobi_unchecked(&JacobiParams::symmetric(kk - n - 1, n), T::zero()) } else { T::zero() };
    let c = T::from_usize_lossy(kk) / (T::lit(2.0).powi(2 * n as i32 + 2) * T::PI());
    let full = c * (a * a + b * b);
    Ok(if n == 0 { full / T::lit(2.0) } else { full })
}

/// Sampled basis values for export.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct BasisSamples<T> {
    pub k: usize,
    pub n: usize,
    pub samples: Vec<Sample<T>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Sample<T> {
    pub theta: T,
    pub phi: T,
    pub value: Multivector3<T>,
}

/// Samples the orthonormal `F_degree^n` at the given points.
pub fn sample_basis<T: Real>(degree: usize, n: usize, points: &[SpherePoint<T>]) -> Result<BasisSamples<T>> {
    let basis = MonogenicBasis::new(degree);
    let samples = points
        .iter()
        .map(|p| Ok(Sample { theta: p.theta, phi: p.phi, value: basis.eval(n, p)? }))
        .collect::<Result<_>>()?;
    Ok(BasisSamples { k: degree, n, samples })
}
