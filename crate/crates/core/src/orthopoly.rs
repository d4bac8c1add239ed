//! Jacobi, Legendre and Gegenbauer polynomials.
//!
//! Evaluation uses the three-term recurrences. Derivatives use the
//! parameter-shift identities, which hold on the closed interval.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Degree and weight parameters of `P_n^{(alpha, beta)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct JacobiParams<T> {
    pub n: usize,
    pub alpha: T,
    pub beta: T,
}

impl<T: Real> JacobiParams<T> {
    pub fn new(n: usize, alpha: T, beta: T) -> Result<Self> {
        if !(alpha > -T::one()) || !(beta > -T::one()) {
            return Err(Error::InvalidJacobiParams { alpha: alpha.as_f64(), beta: beta.as_f64() });
        }
        Ok(Self { n, alpha, beta })
    }

    /// Symmetric parameters `alpha = beta = a`, as used by the spherical bases.
    pub fn symmetric(n: usize, a: usize) -> Self {
        let a = T::from_usize_lossy(a);
        Self { n, alpha: a, beta: a }
    }

    /// Coefficients `(a, b, c)` with `P_{m+1} = (a x + b) P_m - c P_{m-1}`, for `m >= 1`.
    fn step(&self, m: usize) -> (T, T, T) {
        let (al, be) = (self.alpha, self.beta);
        let two = T::lit(2.0);
        let m = T::from_usize_lossy(m);
        let s = two * m + al + be;
        let den = two * (m + T::one()) * (m + al + be + T::one()) * s;
        let lead = s + T::one();
        let a = lead * (s + two) * s / den;
        let b = lead * (al * al - be * be) / den;
        let c = two * (m + al) * (m + be) * (s + two) / den;
        (a, b, c)
    }

    fn first(&self) -> (T, T) {
        // P_1 = (alpha + 1) + (alpha + beta + 2)(x - 1)/2 = slope * x + offset
        let two = T::lit(2.0);
        let slope = (self.alpha + self.beta + two) / two;
        (slope, self.alpha + T::one() - slope)
    }
}

/// `P_n^{(alpha, beta)}(x)` by the three-term recurrence.
pub fn jacobi<T: Real>(p: &JacobiParams<T>, x: T) -> Result<T> {
    JacobiParams::new(p.n, p.alpha, p.beta)?;
    Ok(jacobi_unchecked(p, x))
}

pub(crate) fn jacobi_unchecked<T: Real>(p: &JacobiParams<T>, x: T) -> T {
    if p.n == 0 {
        return T::one();
    }
    let (slope, offset) = p.first();
    let mut prev = T::one();
    let mut cur = slope * x + offset;
    for m in 1..p.n {
        let (a, b, c) = p.step(m);
        let next = (a * x + b) * cur - c * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `d/dx P_n^{(alpha, beta)}(x) = (n + alpha + beta + 1)/2 * P_{n-1}^{(alpha+1, beta+1)}(x)`.
pub fn jacobi_deriv<T: Real>(p: &JacobiParams<T>, x: T) -> Result<T> {
    JacobiParams::new(p.n, p.alpha, p.beta)?;
    Ok(jacobi_deriv_unchecked(p, x))
}

pub(crate) fn jacobi_deriv_unchecked<T: Real>(p: &JacobiParams<T>, x: T) -> T {
    if p.n == 0 {
        return T::zero();
    }
    let n = T::from_usize_lossy(p.n);
    let shifted = JacobiParams { n: p.n - 1, alpha: p.alpha + T::one(), beta: p.beta + T::one() };
    (n + p.alpha + p.beta + T::one()) / T::lit(2.0) * jacobi_unchecked(&shifted, x)
}

/// Monomial coefficients of `P_n^{(alpha, beta)}`, lowest power first.
pub fn jacobi_coeffs<T: Real>(p: &JacobiParams<T>) -> Result<Vec<T>> {
    JacobiParams::new(p.n, p.alpha, p.beta)?;
    let mut prev = vec![T::one()];
    if p.n == 0 {
        return Ok(prev);
    }
    let (slope, offset) = p.first();
    let mut cur = vec![offset, slope];
    for m in 1..p.n {
        let (a, b, c) = p.step(m);
        let mut next = vec![T::zero(); cur.len() + 1];
        for (i, &ci) in cur.iter().enumerate() {
            next[i + 1] = next[i + 1] + a * ci;
            next[i] = next[i] + b * ci;
        }
        for (i, &pi) in prev.iter().enumerate() {
            next[i] = next[i] - c * pi;
        }
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Legendre polynomial `P_k(x) = P_k^{(0,0)}(x)`.
pub fn legendre<T: Real>(k: usize, x: T) -> T {
    jacobi_unchecked(&JacobiParams { n: k, alpha: T::zero(), beta: T::zero() }, x)
}

/// `P_k'(x)`.
pub fn legendre_deriv<T: Real>(k: usize, x: T) -> T {
    jacobi_deriv_unchecked(&JacobiParams { n: k, alpha: T::zero(), beta: T::zero() }, x)
}

/// Gegenbauer polynomial `C_k^mu(x)`; negative degrees evaluate to zero.
pub fn gegenbauer<T: Real>(k: i64, mu: T, x: T) -> T {
    if k < 0 {
        return T::zero();
    }
    let two = T::lit(2.0);
    let mut prev = T::one();
    if k == 0 {
        return prev;
    }
    let mut cur = two * mu * x;
    for m in 1..k {
        let mf = T::from_i64(m).expect("small integer");
        let next = (two * (mf + mu) * x * cur - (mf + two * mu - T::one()) * prev) / (mf + T::one());
        prev = cur;
        cur = next;
    }
    cur
}

/// `d/dx C_k^mu(x) = 2 mu C_{k-1}^{mu+1}(x)`.
pub fn gegenbauer_deriv<T: Real>(k: i64, mu: T, x: T) -> T {
    if k <= 0 {
        return T::zero();
    }
    T::lit(2.0) * mu * gegenbauer(k - 1, mu + T::one(), x)
}
