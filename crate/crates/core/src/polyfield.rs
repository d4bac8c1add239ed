//! Polynomials in `x1, x2, x3` with Clifford coefficients.
//!
//! Differentiation is exact, so these fields act as an oracle for the
//! closed-form spherical evaluators.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use crate::clifford3::{Multivector3, E1, E2, E3};
use crate::scalar::{Real, Vec3};

/// Exponents `(a, b, c)` of the monomial `x1^a x2^b x3^c`.
pub type Exponent = [u32; 3];

#[derive(Clone, PartialEq)]
pub struct PolyField<T> {
    pub terms: BTreeMap<Exponent, Multivector3<T>>,
}

impl<T: Real> std::fmt::Debug for PolyField<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl<T: Real> PolyField<T> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn constant(c: Multivector3<T>) -> Self {
        Self::monomial([0, 0, 0], c)
    }

    pub fn monomial(exp: Exponent, c: Multivector3<T>) -> Self {
        let mut f = Self::zero();
        f.add_term(exp, c);
        f
    }

    /// The coordinate function `x_j` (`j` in `0..3`).
    pub fn coordinate(j: usize) -> Self {
        let mut e = [0; 3];
        e[j] = 1;
        Self::monomial(e, Multivector3::one())
    }

    /// The Clifford vector variable `x = x1 e1 + x2 e2 + x3 e3`.
    pub fn vector_variable() -> Self {
        let mut f = Self::zero();
        for (j, slot) in [E1, E2, E3].into_iter().enumerate() {
            let mut e = [0; 3];
            e[j] = 1;
            f.add_term(e, Multivector3::blade(slot));
        }
        f
    }

    pub fn add_term(&mut self, exp: Exponent, c: Multivector3<T>) {
        let entry = self.terms.entry(exp).or_insert_with(Multivector3::zero);
        *entry += c;
        if entry.max_abs() == T::zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn scale(&self, s: T) -> Self {
        self.map_coeffs(|c| c.scale(s))
    }

    /// Multiplies every coefficient by `m` on the right.
    pub fn right_mul(&self, m: &Multivector3<T>) -> Self {
        self.map_coeffs(|c| c * *m)
    }

    /// Multiplies every coefficient by `m` on the left.
    pub fn left_mul(&self, m: &Multivector3<T>) -> Self {
        self.map_coeffs(|c| *m * c)
    }

    fn map_coeffs<F: Fn(Multivector3<T>) -> Multivector3<T>>(&self, f: F) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            out.add_term(*e, f(*c));
        }
        out
    }

    /// `d/dx_j`.
    pub fn partial(&self, j: usize) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            if e[j] == 0 {
                continue;
            }
            let mut d = *e;
            d[j] -= 1;
            out.add_term(d, c.scale(T::lit(e[j] as f64)));
        }
        out
    }

    /// Left Dirac derivative `sum_j e_j d/dx_j f`.
    pub fn dirac(&self) -> Self {
        let mut out = Self::zero();
        for (j, slot) in [E1, E2, E3].into_iter().enumerate() {
            out = out + self.partial(j).left_mul(&Multivector3::blade(slot));
        }
        out
    }

    pub fn laplacian(&self) -> Self {
        (0..3).fold(Self::zero(), |acc, j| acc + self.partial(j).partial(j))
    }

    /// Euler operator `sum_j x_j d/dx_j`.
    pub fn euler(&self) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let deg = e[0] + e[1] + e[2];
            out.add_term(*e, c.scale(T::lit(deg as f64)));
        }
        out
    }

    /// Spherical Dirac operator `-sum_{i<j} e_ij (x_i d_j - x_j d_i)`.
    pub fn spherical_dirac(&self) -> Self {
        let pairs = [(0, 1, Multivector3::e12()), (0, 2, Multivector3::e13()), (1, 2, Multivector3::e23())];
        let mut out = Self::zero();
        for (i, j, eij) in pairs {
            let rot = Self::coordinate(i) * self.partial(j) - Self::coordinate(j) * self.partial(i);
            out = out - rot.left_mul(&eij);
        }
        out
    }

    pub fn eval(&self, x: &Vec3<T>) -> Multivector3<T> {
        let mut out = Multivector3::zero();
        for (e, c) in &self.terms {
            let m = x[0].powi(e[0] as i32) * x[1].powi(e[1] as i32) * x[2].powi(e[2] as i32);
            out += c.scale(m);
        }
        out
    }

    /// Largest absolute coefficient over all terms.
    pub fn max_coeff(&self) -> T {
        self.terms.values().fold(T::zero(), |acc, c| acc.max(c.max_abs()))
    }

    /// Total degrees present, ascending.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(|e| e[0] + e[1] + e[2]).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degrees().len() <= 1
    }
}

impl<T: Real> Add for PolyField<T> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl<T: Real> Sub for PolyField<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Real> Neg for PolyField<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-T::one())
    }
}

impl<T: Real> Mul for PolyField<T> {
    type Output = Self;
    /// Pointwise Clifford product, `self` on the left.
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term([ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]], *ca * *cb);
            }
        }
        out
    }
}
