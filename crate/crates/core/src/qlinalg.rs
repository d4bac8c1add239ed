//! Small dense matrices over the reals, complex numbers, quaternions and
//! the even subalgebra, the complex adjoint embedding, and Hermitian
//! inverse square roots by cyclic Jacobi rotations.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::clifford3::{tau, tau_inv, EvenElement, Quaternion};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Scalar types usable as matrix entries.
pub trait Entry<T: Real>:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self> + PartialEq
{
    fn zero() -> Self;
    fn one() -> Self;
    fn conj(&self) -> Self;
    /// Euclidean magnitude of the entry.
    fn magnitude(&self) -> T;
}

impl<T: Real> Entry<T> for T {
    fn zero() -> Self {
        T::zero()
    }
    fn one() -> Self {
        T::one()
    }
    fn conj(&self) -> Self {
        *self
    }
    fn magnitude(&self) -> T {
        self.abs()
    }
}

impl<T: Real> Entry<T> for Complex<T> {
    fn zero() -> Self {
        Complex::new(T::zero(), T::zero())
    }
    fn one() -> Self {
        Complex::new(T::one(), T::zero())
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn magnitude(&self) -> T {
        self.norm()
    }
}

impl<T: Real> Entry<T> for Quaternion<T> {
    fn zero() -> Self {
        Quaternion::zero()
    }
    fn one() -> Self {
        Quaternion::one()
    }
    fn conj(&self) -> Self {
        Quaternion::conj(self)
    }
    fn magnitude(&self) -> T {
        self.norm()
    }
}

impl<T: Real> Entry<T> for EvenElement<T> {
    fn zero() -> Self {
        EvenElement::zero()
    }
    fn one() -> Self {
        EvenElement::one()
    }
    fn conj(&self) -> Self {
        EvenElement::conj(self)
    }
    fn magnitude(&self) -> T {
        self.norm()
    }
}

/// Row-major `n x n` matrix. Serializes as a list of rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "Vec<Vec<E>>", try_from = "Vec<Vec<E>>")]
#[serde(bound(serialize = "E: Serialize + Clone", deserialize = "E: Deserialize<'de> + Clone"))]
pub struct SquareMatrix<E> {
    n: usize,
    data: Vec<E>,
}

pub type RealMatrix<T> = SquareMatrix<T>;
pub type ComplexMatrix<T> = SquareMatrix<Complex<T>>;
pub type QuatMatrix<T> = SquareMatrix<Quaternion<T>>;
pub type EvenMatrix<T> = SquareMatrix<EvenElement<T>>;

impl<E: Clone> From<SquareMatrix<E>> for Vec<Vec<E>> {
    fn from(m: SquareMatrix<E>) -> Self {
        m.data.chunks(m.n.max(1)).map(|r| r.to_vec()).collect()
    }
}

impl<E: Clone> TryFrom<Vec<Vec<E>>> for SquareMatrix<E> {
    type Error = String;
    fn try_from(rows: Vec<Vec<E>>) -> std::result::Result<Self, String> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(format!("matrix with {n} rows is not square"));
        }
        Ok(Self { n, data: rows.into_iter().flatten().collect() })
    }
}

impl<E: Copy> SquareMatrix<E> {
    pub fn from_fn<F: FnMut(usize, usize) -> E>(n: usize, mut f: F) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> E {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.n + j] = v;
    }

    pub fn map<F: Fn(E) -> U, U: Copy>(&self, f: F) -> SquareMatrix<U> {
        SquareMatrix { n: self.n, data: self.data.iter().map(|&e| f(e)).collect() }
    }

    pub fn rows(&self) -> Vec<Vec<E>> {
        self.data.chunks(self.n.max(1)).map(|r| r.to_vec()).collect()
    }
}

impl<E> SquareMatrix<E> {
    pub fn zeros<T: Real>(n: usize) -> Self
    where
        E: Entry<T>,
    {
        Self { n, data: vec![E::zero(); n * n] }
    }

    pub fn identity<T: Real>(n: usize) -> Self
    where
        E: Entry<T>,
    {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = E::one();
        }
        m
    }

    /// Conjugate transpose.
    pub fn adjoint<T: Real>(&self) -> Self
    where
        E: Entry<T>,
    {
        SquareMatrix::from_fn(self.n, |i, j| self.get(j, i).conj())
    }

    pub fn matmul<T: Real>(&self, rhs: &Self) -> Result<Self>
    where
        E: Entry<T>,
    {
        self.check_dim(rhs)?;
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                for j in 0..n {
                    out.data[i * n + j] = out.data[i * n + j] + a * rhs.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn sub<T: Real>(&self, rhs: &Self) -> Result<Self>
    where
        E: Entry<T>,
    {
        self.check_dim(rhs)?;
        Ok(SquareMatrix::from_fn(self.n, |i, j| self.get(i, j) - rhs.get(i, j)))
    }

    /// Largest entry magnitude.
    pub fn max_abs<T: Real>(&self) -> T
    where
        E: Entry<T>,
    {
        self.data.iter().fold(T::zero(), |acc, e| acc.max(e.magnitude()))
    }

    pub fn frobenius<T: Real>(&self) -> T
    where
        E: Entry<T>,
    {
        self.data.iter().fold(T::zero(), |acc, e| acc + e.magnitude().powi(2)).sqrt()
    }

    /// Largest `|m_ij - conj(m_ji)|`.
    pub fn self_adjoint_defect<T: Real>(&self) -> T
    where
        E: Entry<T>,
    {
        let mut d = T::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                d = d.max((self.get(i, j) - self.get(j, i).conj()).magnitude());
            }
        }
        d
    }

    pub fn max_abs_diff<T: Real>(&self, rhs: &Self) -> Result<T>
    where
        E: Entry<T>,
    {
        Ok(self.sub(rhs)?.max_abs())
    }

    fn check_dim(&self, rhs: &Self) -> Result<()> {
        if self.n != rhs.n {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.n, rhs.n)));
        }
        Ok(())
    }
}

/// Splits a quaternion `q = q1 + q2 e2` with `q1, q2` in `span{1, e12}`,
/// identified with complex numbers via `e12 -> i`.
fn split<T: Real>(q: &Quaternion<T>) -> (Complex<T>, Complex<T>) {
    (Complex::new(q.w, q.z), Complex::new(q.y, -q.x))
}

fn join<T: Real>(q1: Complex<T>, q2: Complex<T>) -> Quaternion<T> {
    Quaternion::new(q1.re, -q2.im, q2.re, q1.im)
}

/// The complex adjoint `[[A1, A2], [-conj(A2), conj(A1)]]` of `A = A1 + A2 e2`.
pub fn chi<T: Real>(a: &QuatMatrix<T>) -> ComplexMatrix<T> {
    let n = a.dim();
    SquareMatrix::from_fn(2 * n, |i, j| {
        let (q1, q2) = split(&a.get(i % n, j % n));
        match (i < n, j < n) {
            (true, true) => q1,
            (true, false) => q2,
            (false, true) => -q2.conj(),
            (false, false) => q1.conj(),
        }
    })
}

/// Largest deviation of `c` from the block pattern produced by [`chi`].
pub fn chi_structure_defect<T: Real>(c: &ComplexMatrix<T>) -> T {
    let n = c.dim() / 2;
    let mut d = T::zero();
    for i in 0..n {
        for j in 0..n {
            d = d.max((c.get(i + n, j + n) - c.get(i, j).conj()).norm());
            d = d.max((c.get(i + n, j) + c.get(i, j + n).conj()).norm());
        }
    }
    d
}

/// Inverse of [`chi`]. Fails when `c` is not block-structured within `1e-8`.
pub fn chi_inv<T: Real>(c: &ComplexMatrix<T>) -> Result<QuatMatrix<T>> {
    if c.dim() % 2 != 0 {
        return Err(Error::DimensionMismatch(format!("complex adjoint needs even size, got {}", c.dim())));
    }
    let defect = chi_structure_defect(c);
    if defect > T::tol(1e-8) || !defect.is_finite() {
        return Err(Error::NotChiStructured(defect.as_f64()));
    }
    let n = c.dim() / 2;
    let half = T::lit(0.5);
    Ok(SquareMatrix::from_fn(n, |i, j| {
        // average the two copies of each block
        let q1 = (c.get(i, j) + c.get(i + n, j + n).conj()) * half;
        let q2 = (c.get(i, j + n) - c.get(i + n, j).conj()) * half;
        join(q1, q2)
    }))
}

pub fn tau_matrix<T: Real>(a: &EvenMatrix<T>) -> QuatMatrix<T> {
    a.map(|e| tau(&e))
}

pub fn tau_inv_matrix<T: Real>(q: &QuatMatrix<T>) -> EvenMatrix<T> {
    q.map(|e| tau_inv(&e))
}

/// Eigendecomposition of a Hermitian matrix: ascending eigenvalues and the
/// unitary matrix whose columns are the eigenvectors.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T> {
    pub values: Vec<T>,
    pub vectors: ComplexMatrix<T>,
    pub sweeps: usize,
}

const MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// Stops when the off-diagonal Frobenius norm falls below `1e-13` times the
/// Frobenius norm of the input.
pub fn hermitian_eigen<T: Real>(c: &ComplexMatrix<T>) -> Result<HermitianEigen<T>> {
    let n = c.dim();
    let scale = c.max_abs().max(T::min_positive_value());
    let defect = c.self_adjoint_defect();
    if defect > T::tol(1e-10) * scale.max(T::one()) {
        return Err(Error::NotSelfAdjoint(defect.as_f64()));
    }
    let mut a = c.clone();
    let mut v = ComplexMatrix::identity(n);
    let target = T::tol(1e-13) * c.frobenius();
    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= target || n < 2 {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<T> = (0..n).map(|i| a.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap_or(std::cmp::Ordering::Equal).then(i.cmp(&j)));
    let values = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        // fix the phase: first non-negligible component real and positive
        let lead = (0..n).map(|r| v.get(r, src)).find(|z| z.norm() > T::tol(1e-12)).unwrap_or(Complex::new(T::one(), T::zero()));
        let phase = lead.conj() / lead.norm();
        for r in 0..n {
            vectors.set(r, col, v.get(r, src) * phase);
        }
    }
    Ok(HermitianEigen { values, vectors, sweeps })
}

fn off_diagonal_norm<T: Real>(a: &ComplexMatrix<T>) -> T {
    let n = a.dim();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s = s + a.get(i, j).norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn rotate<T: Real>(a: &mut ComplexMatrix<T>, v: &mut ComplexMatrix<T>, p: usize, q: usize) {
    let apq = a.get(p, q);
    let r = apq.norm();
    if r == T::zero() {
        return;
    }
    // e^{-i phi} with phi = arg(a_pq) makes the (p, q) entry real
    let ph = apq.conj() / r;
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;
    let theta = (aqq - app) / (T::lit(2.0) * r);
    let t = if theta >= T::zero() {
        T::one() / (theta + (theta * theta + T::one()).sqrt())
    } else {
        -T::one() / (-theta + (theta * theta + T::one()).sqrt())
    };
    let cs = T::one() / (t * t + T::one()).sqrt();
    let sn = t * cs;
    let g_pp = Complex::new(cs, T::zero());
    let g_pq = Complex::new(sn, T::zero());
    let g_qp = ph * (-sn);
    let g_qq = ph * cs;
    let n = a.dim();
    for i in 0..n {
        let (x, y) = (a.get(i, p), a.get(i, q));
        a.set(i, p, x * g_pp + y * g_qp);
        a.set(i, q, x * g_pq + y * g_qq);
        let (x, y) = (v.get(i, p), v.get(i, q));
        v.set(i, p, x * g_pp + y * g_qp);
        v.set(i, q, x * g_pq + y * g_qq);
    }
    for j in 0..n {
        let (x, y) = (a.get(p, j), a.get(q, j));
        a.set(p, j, g_pp.conj() * x + g_qp.conj() * y);
        a.set(q, j, g_pq.conj() * x + g_qq.conj() * y);
    }
    a.set(p, q, Complex::new(T::zero(), T::zero()));
    a.set(q, p, Complex::new(T::zero(), T::zero()));
    a.set(p, p, Complex::new(a.get(p, p).re, T::zero()));
    a.set(q, q, Complex::new(a.get(q, q).re, T::zero()));
}

/// Default eigenvalue floor for the Hermitian inverse square root.
pub const HERMITIAN_FLOOR: f64 = 1e-10;
/// Default eigenvalue floor for the real symmetric inverse square root.
pub const SYMMETRIC_FLOOR: f64 = 1e-12;

/// `C^{-1/2} = V diag(lambda^{-1/2}) V*`. Fails when an eigenvalue is below `floor`.
pub fn hermitian_inv_sqrt<T: Real>(c: &ComplexMatrix<T>, floor: T) -> Result<ComplexMatrix<T>> {
    let eig = hermitian_eigen(c)?;
    if let Some(&low) = eig.values.first() {
        if !(low >= floor) {
            return Err(Error::SingularGram { eigenvalue: low.as_f64(), floor: floor.as_f64() });
        }
    }
    let n = c.dim();
    let v = &eig.vectors;
    let inv: Vec<T> = eig.values.iter().map(|&l| T::one() / l.sqrt()).collect();
    let mut out = ComplexMatrix::from_fn(n, |i, j| {
        (0..n).fold(Complex::new(T::zero(), T::zero()), |acc, m| acc + v.get(i, m) * v.get(j, m).conj() * inv[m])
    });
    // restore exact self-adjointness
    for i in 0..n {
        out.set(i, i, Complex::new(out.get(i, i).re, T::zero()));
        for j in i + 1..n {
            let z = (out.get(i, j) + out.get(j, i).conj()) * T::lit(0.5);
            out.set(i, j, z);
            out.set(j, i, z.conj());
        }
    }
    Ok(out)
}

fn complexify<T: Real>(m: &RealMatrix<T>) -> ComplexMatrix<T> {
    m.map(|x| Complex::new(x, T::zero()))
}

/// Ascending eigenvalues of a real symmetric matrix.
pub fn symmetric_eigenvalues<T: Real>(m: &RealMatrix<T>) -> Result<Vec<T>> {
    Ok(hermitian_eigen(&complexify(m))?.values)
}

/// Inverse square root of a real symmetric positive definite matrix.
pub fn symmetric_inv_sqrt<T: Real>(m: &RealMatrix<T>, floor: T) -> Result<RealMatrix<T>> {
    let c = hermitian_inv_sqrt(&complexify(m), floor)?;
    let out = c.map(|z| z.re);
    Ok(SquareMatrix::from_fn(out.dim(), |i, j| (out.get(i, j) + out.get(j, i)) * T::lit(0.5)))
}

/// Ascending eigenvalues of `chi(tau(G))`, each appearing twice.
pub fn chi_tau_eigenvalues<T: Real>(g: &EvenMatrix<T>) -> Result<Vec<T>> {
    Ok(hermitian_eigen(&chi(&tau_matrix(g)))?.values)
}

/// Smallest eigenvalue of `chi(tau(G))`; non-negative iff `G` is positive semidefinite.
pub fn min_eigenvalue<T: Real>(g: &EvenMatrix<T>) -> Result<T> {
    Ok(chi_tau_eigenvalues(g)?.first().copied().unwrap_or(T::zero()))
}

/// The coefficient matrix `A = tau^{-1} chi^{-1} (chi tau G)^{-1/2}`, which
/// satisfies `A* G A = I` for a self-adjoint positive definite `G`.
pub fn coefficient_matrix<T: Real>(g: &EvenMatrix<T>) -> Result<EvenMatrix<T>> {
    let scale = g.max_abs().max(T::one());
    let defect = g.self_adjoint_defect();
    if defect > T::tol(1e-10) * scale {
        return Err(Error::NotSelfAdjoint(defect.as_f64()));
    }
    let c = chi(&tau_matrix(g));
    let s = hermitian_inv_sqrt(&c, T::lit(HERMITIAN_FLOOR))?;
    Ok(tau_inv_matrix(&chi_inv(&s)?))
}

/// `max |A* G A - I|` over entries.
pub fn whitening_residual<T: Real, E: Entry<T>>(a: &SquareMatrix<E>, g: &SquareMatrix<E>) -> Result<T> {
    let aga = a.adjoint().matmul(g)?.matmul(a)?;
    aga.max_abs_diff(&SquareMatrix::identity(a.dim()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn chi_of_identity() {
        let i3 = QuatMatrix::<f64>::identity(3);
        assert_eq!(chi(&i3), ComplexMatrix::identity(6));
        assert_eq!(chi_inv(&ComplexMatrix::<f64>::identity(4)).unwrap(), QuatMatrix::identity(2));
    }

    #[test]
    fn chi_inv_rejects_unstructured() {
        let mut m = ComplexMatrix::<f64>::identity(2);
        m.set(1, 1, c(2.0, 0.0));
        assert!(matches!(chi_inv(&m), Err(Error::NotChiStructured(_))));
    }

    #[test]
    fn inv_sqrt_of_diagonal() {
        let mut m = ComplexMatrix::<f64>::zeros(2);
        m.set(0, 0, c(4.0, 0.0));
        m.set(1, 1, c(9.0, 0.0));
        let s = hermitian_inv_sqrt(&m, 1e-10).unwrap();
        assert!((s.get(0, 0).re - 0.5).abs() < 1e-15);
        assert!((s.get(1, 1).re - 1.0 / 3.0).abs() < 1e-15);
        assert!(s.get(0, 1).norm() < 1e-15);
        let id = ComplexMatrix::<f64>::identity(3);
        assert_eq!(hermitian_inv_sqrt(&id, 1e-10).unwrap(), id);
    }

    #[test]
    fn singular_matrix_is_reported() {
        let m = ComplexMatrix::<f64>::from_fn(2, |_, _| c(1.0, 0.0));
        assert!(matches!(hermitian_inv_sqrt(&m, 1e-10), Err(Error::SingularGram { .. })));
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let mut m = ComplexMatrix::<f64>::identity(2);
        m.set(0, 1, c(0.0, 1.0));
        assert!(matches!(hermitian_eigen(&m), Err(Error::NotSelfAdjoint(_))));
    }

    #[test]
    fn two_by_two_complex_eigenvalues() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3
        let m = ComplexMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 1) => c(0.0, 1.0),
            (1, 0) => c(0.0, -1.0),
            _ => c(2.0, 0.0),
        });
        let e = hermitian_eigen(&m).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14 && (e.values[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn identity_coefficient_matrix() {
        let g = EvenMatrix::<f64>::identity(3);
        let a = coefficient_matrix(&g).unwrap();
        assert!(a.max_abs_diff(&g).unwrap() < 1e-15);
    }

    #[test]
    fn json_layouts() {
        let m = ComplexMatrix::from_fn(1, |_, _| c(1.0, -2.0));
        assert_eq!(serde_json::to_string(&m).unwrap(), "[[[1.0,-2.0]]]");
        let e = EvenMatrix::<f64>::identity(1);
        let v = serde_json::to_value(&e).unwrap();
        assert_eq!(v[0][0]["s"], 1.0);
        assert_eq!(v[0][0]["e23"], 0.0);
        let back: EvenMatrix<f64> = serde_json::from_value(v).unwrap();
        assert_eq!(back, e);
    }
}
