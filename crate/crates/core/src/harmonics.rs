//! Real spherical harmonics of degree `k` on R^3, their Cartesian polynomial
//! forms, the harmonic reproducing kernel, and zonal-harmonic bases.
//!
//! Basis functions are labelled `0, 2, 3, ..., 2k+1`: label `0` is the zonal
//! Legendre term, label `2m` carries `cos(m theta)` and label `2m+1` carries
//! `sin(m theta)` for `1 <= m <= k`. The raw functions keep their classical
//! constants; [`HarmonicBasis::eval`] rescales them to be orthonormal for the
//! normalized surface measure `d sigma / (4 pi)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orthopoly::{gegenbauer, jacobi_coeffs, jacobi_unchecked, JacobiParams};
use crate::polyfield::PolyField;
use crate::qlinalg::{symmetric_eigenvalues, symmetric_inv_sqrt, RealMatrix, SquareMatrix, SYMMETRIC_FLOOR};
use crate::scalar::{factorial, Real};
use crate::sphere_opt::{objective_harmonic, Ensemble};
use crate::sphere_quad::{surface_area, SpherePoint};
use crate::clifford3::Multivector3;

/// Labels `0, 2, 3, ..., 2k+1` of the degree-`k` basis, in storage order.
pub fn harmonic_labels(k: usize) -> Vec<usize> {
    std::iter::once(0).chain(2..=2 * k + 1).collect()
}

fn check_label(k: usize, n: usize) -> Result<usize> {
    if n == 1 || n > 2 * k + 1 {
        return Err(Error::IndexOutOfRange { what: "harmonic label", index: n });
    }
    Ok(n / 2)
}

fn prefactor<T: Real>(m: usize) -> T {
    let sqrt_pi = T::PI().sqrt();
    if m == 0 {
        T::one() / (T::lit(8.0) * T::PI()).sqrt()
    } else {
        T::one() / (T::lit(2.0).powi(m as i32 + 1) * sqrt_pi)
    }
}

/// Raw harmonic `H_k^n` at radius `r` in direction `p`.
pub fn eval_h<T: Real>(k: usize, n: usize, p: &SpherePoint<T>, r: T) -> Result<T> {
    let m = check_label(k, n)?;
    let (sp, cp) = p.phi.sin_cos();
    let radial = r.powi(k as i32) * prefactor::<T>(m) * sp.powi(m as i32) * jacobi_unchecked(&JacobiParams::symmetric(k - m, m), cp);
    let mf = T::from_usize_lossy(m);
    Ok(match n {
        0 => radial,
        _ if n % 2 == 0 => radial * (mf * p.theta).cos(),
        _ => radial * (mf * p.theta).sin(),
    })
}

/// Exact `||H_k^n||^2` for the surface measure on S^2.
pub fn harmonic_norm_sq<T: Real>(k: usize, n: usize) -> Result<T> {
    let m = check_label(k, n)?;
    let base = T::one() / (T::lit(2.0) * T::from_usize_lossy(2 * k + 1));
    if m == 0 {
        return Ok(base);
    }
    let kf = factorial::<T>(k);
    Ok(base * kf * kf / (factorial::<T>(k + m) * factorial::<T>(k - m)))
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// `(x1^2 + x2^2 + x3^2)^q` as a polynomial.
fn radius_power<T: Real>(q: u32) -> PolyField<T> {
    let mut out = PolyField::zero();
    for a in 0..=q {
        for b in 0..=q - a {
            let c = q - a - b;
            let coef = binomial(q, a) * binomial(q - a, b);
            out.add_term([2 * a, 2 * b, 2 * c], Multivector3::scalar(T::lit(coef)));
        }
    }
    out
}

/// Cartesian form of `H_k^n` as a homogeneous polynomial of degree `k`.
pub fn harmonic_to_poly<T: Real>(k: usize, n: usize) -> Result<PolyField<T>> {
    let m = check_label(k, n)?;
    // (r sin phi)^m e^{i m theta} = (x1 + i x2)^m
    let mut angular = PolyField::zero();
    let mu = m as u32;
    for j in 0..=mu {
        let keep = match (n, j % 2) {
            (0, _) => j == 0,
            (_, 0) => n % 2 == 0,
            _ => n % 2 == 1,
        };
        if !keep {
            continue;
        }
        let sign = if (j / 2) % 2 == 0 { 1.0 } else { -1.0 };
        angular.add_term([mu - j, j, 0], Multivector3::scalar(T::lit(sign * binomial(mu, j))));
    }
    // r^{k-m} P_{k-m}^{(m,m)}(x3 / r): only powers of matching parity survive
    let coeffs = jacobi_coeffs(&JacobiParams::symmetric(k - m, m))?;
    let deg = (k - m) as u32;
    let mut radial = PolyField::zero();
    for (p, &c) in coeffs.iter().enumerate() {
        let p = p as u32;
        if (deg - p) % 2 != 0 || c == T::zero() {
            continue;
        }
        let term = PolyField::monomial([0, 0, p], Multivector3::scalar(c)) * radius_power((deg - p) / 2);
        radial = radial + term;
    }
    Ok((angular * radial).scale(prefactor::<T>(m)))
}

/// The harmonic reproducing kernel in dimension `m`:
/// `(2k + m - 2)/(m - 2) C_k^{m/2 - 1}(<x, y>)`.
///
/// It reproduces degree-`k` harmonics for the normalized surface measure.
pub fn kernel_r<T: Real>(m: usize, k: usize, x: &SpherePoint<T>, y: &SpherePoint<T>) -> Result<T> {
    if m < 3 {
        return Err(Error::DimensionTooSmall(m));
    }
    let mf = T::from_usize_lossy(m);
    let two = T::lit(2.0);
    let c = (T::from_usize_lossy(2 * k) + mf - two) / (mf - two);
    Ok(c * gegenbauer(k as i64, mf / two - T::one(), x.dot(y)))
}

/// `(2k+1) P_k(<x, y>)`, the three-dimensional harmonic kernel.
pub fn kernel_r3<T: Real>(k: usize, x: &SpherePoint<T>, y: &SpherePoint<T>) -> T {
    T::from_usize_lossy(2 * k + 1) * crate::orthopoly::legendre(k, x.dot(y))
}

/// The degree-`k` harmonic basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HarmonicBasis {
    pub k: usize,
}

impl HarmonicBasis {
    pub fn new(k: usize) -> Self {
        Self { k }
    }

    pub fn len(&self) -> usize {
        2 * self.k + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> Vec<usize> {
        harmonic_labels(self.k)
    }

    fn label(&self, i: usize) -> Result<usize> {
        if i >= self.len() {
            return Err(Error::IndexOutOfRange { what: "harmonic basis position", index: i });
        }
        Ok(if i == 0 { 0 } else { i + 1 })
    }

    /// Raw function at position `i` (label `0` for `i = 0`, else `i + 1`).
    pub fn eval_raw<T: Real>(&self, i: usize, p: &SpherePoint<T>) -> Result<T> {
        eval_h(self.k, self.label(i)?, p, T::one())
    }

    /// Orthonormal function at position `i` for the normalized measure.
    pub fn eval<T: Real>(&self, i: usize, p: &SpherePoint<T>) -> Result<T> {
        Ok(self.eval_raw(i, p)? * self.scale::<T>(i)?)
    }

    /// Factor turning the raw function into the orthonormal one.
    pub fn scale<T: Real>(&self, i: usize) -> Result<T> {
        Ok((surface_area::<T>() / harmonic_norm_sq::<T>(self.k, self.label(i)?)?).sqrt())
    }

    pub fn norm_sq<T: Real>(&self, i: usize) -> Result<T> {
        harmonic_norm_sq(self.k, self.label(i)?)
    }

    pub fn poly<T: Real>(&self, i: usize) -> Result<PolyField<T>> {
        harmonic_to_poly(self.k, self.label(i)?)
    }

    /// Evaluates `sum_i c_i * orthonormal_i(p)`.
    pub fn combination<T: Real>(&self, coeffs: &[T], p: &SpherePoint<T>) -> Result<T> {
        let mut s = T::zero();
        for (i, &c) in coeffs.iter().enumerate() {
            s = s + c * self.eval(i, p)?;
        }
        Ok(s)
    }
}

/// An orthonormal basis `Z_t(x) = sum_j R(x, eta_j) a_{jt}` of degree-`k`
/// harmonics built from `2k+1` points with `A = G^{-1/2}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ZonalHarmonicBasis<T> {
    pub k: usize,
    pub points: Vec<SpherePoint<T>>,
    #[serde(rename = "G")]
    pub g: RealMatrix<T>,
    #[serde(rename = "A")]
    pub a: RealMatrix<T>,
}

/// Kernel Gram matrix `G_ij = (2k+1) P_k(<eta_i, eta_j>)`.
pub fn harmonic_gram<T: Real>(k: usize, points: &[SpherePoint<T>]) -> RealMatrix<T> {
    SquareMatrix::from_fn(points.len(), |i, j| kernel_r3(k, &points[i], &points[j]))
}

impl<T: Real> ZonalHarmonicBasis<T> {
    pub fn build(k: usize, points: &[SpherePoint<T>]) -> Result<Self> {
        let expected = 2 * k + 1;
        if points.len() != expected {
            return Err(Error::WrongEnsembleSize { k, expected, got: points.len() });
        }
        let g = harmonic_gram(k, points);
        let a = symmetric_inv_sqrt(&g, T::lit(SYMMETRIC_FLOOR))?;
        Ok(Self { k, points: points.to_vec(), g, a })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn eval(&self, t: usize, x: &SpherePoint<T>) -> Result<T> {
        if t >= self.len() {
            return Err(Error::IndexOutOfRange { what: "zonal basis index", index: t });
        }
        Ok(self.points.iter().enumerate().fold(T::zero(), |acc, (j, eta)| acc + kernel_r3(self.k, x, eta) * self.a.get(j, t)))
    }

    pub fn min_gram_eigenvalue(&self) -> Result<T> {
        Ok(symmetric_eigenvalues(&self.g)?.first().copied().unwrap_or(T::zero()))
    }

    /// True when every `|a_ii|` exceeds the sum of the other magnitudes in its row.
    pub fn is_diagonally_dominant(&self) -> bool {
        diagonally_dominant(&self.a)
    }

    /// `b^T G b` with `b` row `t` of `A` and entry `t` zeroed: the squared
    /// norm of `Z_t - R(., eta_t) a_tt` (normalized measure). `A` is symmetric.
    pub fn zonality_deviation(&self, t: usize) -> Result<T> {
        if t >= self.len() {
            return Err(Error::IndexOutOfRange { what: "zonal basis index", index: t });
        }
        let n = self.len();
        let b = |j: usize| if j == t { T::zero() } else { self.a.get(t, j) };
        let mut s = T::zero();
        for i in 0..n {
            for j in 0..n {
                s = s + b(i) * self.g.get(i, j) * b(j);
            }
        }
        Ok(s)
    }

    pub fn bundle(&self) -> HarmonicBundle<T> {
        HarmonicBundle {
            k: self.k,
            points: self.points.clone(),
            g: self.g.clone(),
            a: self.a.clone(),
            objective: objective_harmonic(self.k, &Ensemble::new(self.points.clone())).expect("size checked at build"),
            deviations: (0..self.len()).map(|t| self.zonality_deviation(t).expect("index in range")).collect(),
            diagonally_dominant: self.is_diagonally_dominant(),
        }
    }
}

/// Serialized form of a zonal harmonic basis with its diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct HarmonicBundle<T> {
    pub k: usize,
    pub points: Vec<SpherePoint<T>>,
    #[serde(rename = "G")]
    pub g: RealMatrix<T>,
    #[serde(rename = "A")]
    pub a: RealMatrix<T>,
    pub objective: T,
    pub deviations: Vec<T>,
    pub diagonally_dominant: bool,
}

pub(crate) fn diagonally_dominant<T: Real>(a: &RealMatrix<T>) -> bool {
    (0..a.dim()).all(|i| {
        let off = (0..a.dim()).filter(|&j| j != i).fold(T::zero(), |s, j| s + a.get(i, j).abs());
        a.get(i, i).abs() > off
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn labels_skip_one() {
        assert_eq!(harmonic_labels(0), vec![0]);
        assert_eq!(harmonic_labels(2), vec![0, 2, 3, 4, 5]);
        assert!(eval_h(2, 1, &SpherePoint::<f64>::north(), 1.0).is_err());
        assert!(eval_h(2, 6, &SpherePoint::<f64>::north(), 1.0).is_err());
    }

    #[test]
    fn constant_and_polar_values() {
        let c = 1.0 / (8.0 * PI).sqrt();
        let p = SpherePoint::from_angles(0.4, 1.3);
        assert!((eval_h(0, 0, &p, 1.0).unwrap() - c).abs() < 1e-15);
        for k in 0..7 {
            assert!((eval_h(k, 0, &SpherePoint::north(), 1.0).unwrap() - c).abs() < 1e-14);
        }
    }

    #[test]
    fn degree_one_polynomials() {
        let h0 = harmonic_to_poly::<f64>(1, 0).unwrap();
        let want = PolyField::monomial([0, 0, 1], Multivector3::scalar(1.0 / (8.0 * PI).sqrt()));
        assert!((h0 - want).max_coeff() < 1e-16);
        let h2 = harmonic_to_poly::<f64>(1, 2).unwrap();
        let want = PolyField::monomial([1, 0, 0], Multivector3::scalar(1.0 / (4.0 * PI.sqrt())));
        assert!((h2 - want).max_coeff() < 1e-16);
    }

    #[test]
    fn kernel_values() {
        let x = SpherePoint::<f64>::from_angles(0.2, 0.9);
        let y = SpherePoint::<f64>::from_angles(2.0, 2.1);
        assert!((kernel_r(3, 4, &x, &x).unwrap() - 9.0).abs() < 1e-13);
        assert!((kernel_r(3, 1, &x, &y).unwrap() - 3.0 * x.dot(&y)).abs() < 1e-15);
        assert!((kernel_r(3, 5, &x, &y).unwrap() - kernel_r3(5, &x, &y)).abs() < 1e-13);
        assert_eq!(kernel_r(2, 1, &x, &y), Err(Error::DimensionTooSmall(2)));
    }

    #[test]
    fn wrong_ensemble_size() {
        let pts = vec![SpherePoint::<f64>::north(); 3];
        assert!(matches!(ZonalHarmonicBasis::build(2, &pts), Err(Error::WrongEnsembleSize { expected: 5, .. })));
    }

    #[test]
    fn coincident_points_are_singular() {
        let pts = vec![SpherePoint::<f64>::north(); 3];
        assert!(matches!(ZonalHarmonicBasis::build(1, &pts), Err(Error::SingularGram { .. })));
    }
}
