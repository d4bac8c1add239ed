//! Orthonormal monogenic bases assembled from kernel translates at a point
//! ensemble, and measures of how close each member is to a single translate.

use serde::{Deserialize, Serialize};

use crate::clifford3::{EvenElement, Multivector3};
use crate::error::{Error, Result};
use crate::monogenics::{kernel_k3, MonogenicBasis};
use crate::qlinalg::{coefficient_matrix, min_eigenvalue, whitening_residual, EvenMatrix, SquareMatrix};
use crate::scalar::Real;
use crate::sphere_opt::{objective_monogenic, Ensemble};
use crate::sphere_quad::{QuadratureRule, SpherePoint};

/// `Z_t(x) = sum_j K_k(x, eta_j) a_{jt}` with `A* G A = I`, so the `Z_t` are
/// orthonormal for the normalized surface measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct NearZonalBasis<T> {
    pub k: usize,
    pub points: Vec<SpherePoint<T>>,
    #[serde(rename = "G")]
    pub g: EvenMatrix<T>,
    #[serde(rename = "A")]
    pub a: EvenMatrix<T>,
}

fn even<T: Real>(m: Multivector3<T>) -> EvenElement<T> {
    EvenElement::from_multivector(&m)
}

/// Kernel Gram matrix `G_ij = K_k(eta_i, eta_j)`.
pub fn monogenic_gram<T: Real>(k: usize, points: &[SpherePoint<T>]) -> EvenMatrix<T> {
    SquareMatrix::from_fn(points.len(), |i, j| even(kernel_k3(k, &points[i], &points[j])))
}

/// Scalar part of `<b, G b> = sum_{j,l} conj(b_j) G_jl b_l`.
pub fn quadratic_form<T: Real>(g: &EvenMatrix<T>, b: &[EvenElement<T>]) -> T {
    let mut s = EvenElement::zero();
    for (j, bj) in b.iter().enumerate() {
        for (l, bl) in b.iter().enumerate() {
            s = s + bj.conj() * g.get(j, l) * *bl;
        }
    }
    s.s
}

impl<T: Real> NearZonalBasis<T> {
    pub fn build(k: usize, points: &[SpherePoint<T>]) -> Result<Self> {
        let expected = k + 1;
        if points.len() != expected {
            return Err(Error::WrongEnsembleSize { k, expected, got: points.len() });
        }
        let g = monogenic_gram(k, points);
        let a = coefficient_matrix(&g)?;
        Ok(Self { k, points: points.to_vec(), g, a })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn check_index(&self, t: usize) -> Result<()> {
        if t >= self.len() {
            return Err(Error::IndexOutOfRange { what: "near-zonal basis index", index: t });
        }
        Ok(())
    }

    /// `sum_j K_k(x, eta_j) b_j`.
    pub fn translate_sum(&self, b: &[EvenElement<T>], x: &SpherePoint<T>) -> Multivector3<T> {
        self.points
            .iter()
            .zip(b)
            .fold(Multivector3::zero(), |acc, (eta, bj)| acc + kernel_k3(self.k, x, eta) * bj.to_multivector())
    }

    pub fn column(&self, t: usize) -> Vec<EvenElement<T>> {
        (0..self.len()).map(|j| self.a.get(j, t)).collect()
    }

    pub fn row(&self, t: usize) -> Vec<EvenElement<T>> {
        (0..self.len()).map(|j| self.a.get(t, j)).collect()
    }

    pub fn eval(&self, t: usize, x: &SpherePoint<T>) -> Result<Multivector3<T>> {
        self.check_index(t)?;
        Ok(self.translate_sum(&self.column(t), x))
    }

    /// Off-diagonal weight of basis member `t`: the scalar part of
    /// `<b, G b>` where `b` is row `t` of `A` with entry `t` set to zero.
    /// Since `A` is self-adjoint, row `t` holds the conjugates of column `t`.
    pub fn zonality_deviation(&self, t: usize) -> Result<T> {
        self.check_index(t)?;
        let mut b = self.row(t);
        b[t] = EvenElement::zero();
        Ok(quadratic_form(&self.g, &b))
    }

    /// `||Z_t - K_k(., eta_t) a_tt||^2` (normalized measure), from column `t`.
    pub fn residual_norm_sq(&self, t: usize) -> Result<T> {
        self.check_index(t)?;
        let mut b = self.column(t);
        b[t] = EvenElement::zero();
        Ok(quadratic_form(&self.g, &b))
    }

    pub fn deviations(&self) -> Vec<T> {
        (0..self.len()).map(|t| self.zonality_deviation(t).expect("index in range")).collect()
    }

    pub fn objective(&self) -> T {
        objective_monogenic(self.k, &Ensemble::new(self.points.clone())).expect("size checked at build")
    }

    /// Smallest eigenvalue of `chi(tau(G))`.
    pub fn min_gram_eigenvalue(&self) -> Result<T> {
        min_eigenvalue(&self.g)
    }

    /// `max |A* G A - I|`.
    pub fn whitening_residual(&self) -> Result<T> {
        whitening_residual(&self.a, &self.g)
    }

    /// Quadrature Gram matrix `<Z_s, Z_t>` in the normalized measure.
    pub fn quadrature_gram(&self, rule: &QuadratureRule<T>) -> Vec<Vec<Multivector3<T>>> {
        let samples: Vec<Vec<Multivector3<T>>> =
            (0..self.len()).map(|t| rule.sample(|p| self.eval(t, p).expect("index in range"))).collect();
        let area = T::lit(4.0) * T::PI();
        samples
            .iter()
            .map(|zs| samples.iter().map(|zt| rule.inner_sampled(zs, zt).scale(T::one() / area)).collect())
            .collect()
    }

    /// Right coefficients `c_n = <F_n, Z_t>` of `Z_t` in the orthonormal
    /// degree-`k` monogenic basis.
    pub fn expand(&self, t: usize, rule: &QuadratureRule<T>) -> Result<Vec<Multivector3<T>>> {
        self.check_index(t)?;
        let basis = MonogenicBasis::new(self.k);
        (0..basis.len())
            .map(|n| Ok(rule.normalized_inner(|p| basis.eval(n, p).expect("index in range"), |p| self.eval(t, p).expect("index in range"))))
            .collect()
    }

    pub fn bundle(&self) -> BasisBundle<T> {
        BasisBundle {
            k: self.k,
            points: self.points.clone(),
            g: self.g.clone(),
            a: self.a.clone(),
            objective: self.objective(),
            deviations: self.deviations(),
        }
    }
}

/// Serialized form of a near-zonal basis with its diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct BasisBundle<T> {
    pub k: usize,
    pub points: Vec<SpherePoint<T>>,
    #[serde(rename = "G")]
    pub g: EvenMatrix<T>,
    #[serde(rename = "A")]
    pub a: EvenMatrix<T>,
    pub objective: T,
    pub deviations: Vec<T>,
}
