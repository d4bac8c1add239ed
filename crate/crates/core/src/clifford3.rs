//! The Clifford algebra of R^3 with negative-definite signature.
//!
//! Generators satisfy `e_j^2 = -1` and `e_i e_j = -e_j e_i`. Blade
//! coefficients are stored in the fixed order
//! `(1, e1, e2, e3, e12, e13, e23, e123)` and products go through an 8x8
//! sign/index table built at compile time.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Real, Vec3};

pub const S: usize = 0;
pub const E1: usize = 1;
pub const E2: usize = 2;
pub const E3: usize = 3;
pub const E12: usize = 4;
pub const E13: usize = 5;
pub const E23: usize = 6;
pub const E123: usize = 7;

/// Blade names in storage order.
pub const BLADE_NAMES: [&str; 8] = ["1", "e1", "e2", "e3", "e12", "e13", "e23", "e123"];

/// Generator bitmask of each storage slot.
const MASK: [u8; 8] = [0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111];

/// Grade of each storage slot.
pub const GRADE: [usize; 8] = [0, 1, 1, 1, 2, 2, 2, 3];

const fn slot_of_mask(mask: u8) -> usize {
    match mask {
        0b000 => 0,
        0b001 => 1,
        0b010 => 2,
        0b100 => 3,
        0b011 => 4,
        0b101 => 5,
        0b110 => 6,
        _ => 7,
    }
}

const fn blade_product(a: u8, b: u8) -> (i8, usize) {
    // Reordering e_A e_B into canonical order costs one sign per pair
    // (i in A, j in B) with i > j; each shared generator squares to -1.
    let mut swaps = 0u32;
    let mut j = 0;
    while j < 3 {
        if b & (1 << j) != 0 {
            let higher = a & !((1u8 << (j + 1)) - 1);
            swaps += higher.count_ones();
        }
        j += 1;
    }
    swaps += (a & b).count_ones();
    let sign = if swaps % 2 == 0 { 1 } else { -1 };
    (sign, slot_of_mask(a ^ b))
}

/// Multiplication table of basis blades: `e_A e_B = sign * e_{index}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BladeTable {
    pub sign: [[i8; 8]; 8],
    pub index: [[usize; 8]; 8],
}

impl BladeTable {
    pub const CANONICAL: BladeTable = BladeTable::build();

    const fn build() -> Self {
        let mut sign = [[0i8; 8]; 8];
        let mut index = [[0usize; 8]; 8];
        let mut i = 0;
        while i < 8 {
            let mut j = 0;
            while j < 8 {
                let (s, k) = blade_product(MASK[i], MASK[j]);
                sign[i][j] = s;
                index[i][j] = k;
                j += 1;
            }
            i += 1;
        }
        BladeTable { sign, index }
    }

    /// A deliberately corrupted table in which `e1 e3 = -e13`. Used to check
    /// that the verification suite notices a broken product.
    pub fn with_e13_sign_fault() -> Self {
        let mut t = Self::CANONICAL;
        t.sign[E1][E3] = -t.sign[E1][E3];
        t
    }

    pub fn mul<T: Real>(&self, a: &Multivector3<T>, b: &Multivector3<T>) -> Multivector3<T> {
        let mut out = [T::zero(); 8];
        for i in 0..8 {
            let ai = a.c[i];
            if ai == T::zero() {
                continue;
            }
            for j in 0..8 {
                let term = ai * b.c[j];
                let k = self.index[i][j];
                if self.sign[i][j] > 0 {
                    out[k] = out[k] + term;
                } else {
                    out[k] = out[k] - term;
                }
            }
        }
        Multivector3 { c: out }
    }
}

/// Conjugation sign per blade: `conj(e_A) = (-1)^{|A|(|A|+1)/2} e_A`.
const CONJ_SIGN: [i8; 8] = [1, -1, -1, -1, -1, -1, -1, 1];

/// An element of the real Clifford algebra of R^3.
#[derive(Clone, Copy, PartialEq, Default)]
#[derive(Serialize, Deserialize)]
#[serde(into = "MultivectorRepr<T>", from = "MultivectorRepr<T>")]
#[serde(bound = "T: Real")]
pub struct Multivector3<T> {
    pub c: [T; 8],
}

#[derive(Clone, Copy, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
struct MultivectorRepr<T> {
    s: T,
    e1: T,
    e2: T,
    e3: T,
    e12: T,
    e13: T,
    e23: T,
    e123: T,
}

impl<T: Real> From<Multivector3<T>> for MultivectorRepr<T> {
    fn from(m: Multivector3<T>) -> Self {
        let c = m.c;
        MultivectorRepr { s: c[0], e1: c[1], e2: c[2], e3: c[3], e12: c[4], e13: c[5], e23: c[6], e123: c[7] }
    }
}

impl<T: Real> From<MultivectorRepr<T>> for Multivector3<T> {
    fn from(r: MultivectorRepr<T>) -> Self {
        Multivector3 { c: [r.s, r.e1, r.e2, r.e3, r.e12, r.e13, r.e23, r.e123] }
    }
}

impl<T: Real> Multivector3<T> {
    pub fn zero() -> Self {
        Self { c: [T::zero(); 8] }
    }

    pub fn one() -> Self {
        Self::scalar(T::one())
    }

    pub fn from_coeffs(c: [T; 8]) -> Self {
        Self { c }
    }

    pub fn scalar(s: T) -> Self {
        let mut c = [T::zero(); 8];
        c[S] = s;
        Self { c }
    }

    /// Basis blade at storage slot `slot`.
    pub fn blade(slot: usize) -> Self {
        let mut c = [T::zero(); 8];
        c[slot] = T::one();
        Self { c }
    }

    pub fn e1() -> Self {
        Self::blade(E1)
    }
    pub fn e2() -> Self {
        Self::blade(E2)
    }
    pub fn e3() -> Self {
        Self::blade(E3)
    }
    pub fn e12() -> Self {
        Self::blade(E12)
    }
    pub fn e13() -> Self {
        Self::blade(E13)
    }
    pub fn e23() -> Self {
        Self::blade(E23)
    }
    pub fn e123() -> Self {
        Self::blade(E123)
    }

    /// The Clifford vector `x1 e1 + x2 e2 + x3 e3`.
    pub fn vector(x: Vec3<T>) -> Self {
        let mut c = [T::zero(); 8];
        c[E1] = x[0];
        c[E2] = x[1];
        c[E3] = x[2];
        Self { c }
    }

    pub fn bivector(b12: T, b13: T, b23: T) -> Self {
        let mut c = [T::zero(); 8];
        c[E12] = b12;
        c[E13] = b13;
        c[E23] = b23;
        Self { c }
    }

    /// Outer product of two vectors, `sum_{i<j} e_ij (x_i y_j - x_j y_i)`.
    pub fn wedge(x: &Vec3<T>, y: &Vec3<T>) -> Self {
        Self::bivector(
            x[0] * y[1] - x[1] * y[0],
            x[0] * y[2] - x[2] * y[0],
            x[1] * y[2] - x[2] * y[1],
        )
    }

    #[inline]
    pub fn scalar_part(&self) -> T {
        self.c[S]
    }

    /// Hermitian conjugation: reverses products and negates every generator.
    pub fn conj(&self) -> Self {
        let mut c = self.c;
        for (ci, s) in c.iter_mut().zip(CONJ_SIGN) {
            if s < 0 {
                *ci = -*ci;
            }
        }
        Self { c }
    }

    /// The k-vector part `[a]_k`.
    pub fn grade(&self, k: usize) -> Result<Self> {
        if k > 3 {
            return Err(Error::GradeOutOfRange(k));
        }
        let mut c = [T::zero(); 8];
        for i in 0..8 {
            if GRADE[i] == k {
                c[i] = self.c[i];
            }
        }
        Ok(Self { c })
    }

    /// `|a|^2 = [conj(a) a]_0 = sum of squared coefficients`.
    pub fn norm_sq(&self) -> T {
        self.c.iter().fold(T::zero(), |acc, &x| acc + x * x)
    }

    pub fn norm(&self) -> T {
        self.norm_sq().sqrt()
    }

    /// Largest absolute coefficient.
    pub fn max_abs(&self) -> T {
        self.c.iter().fold(T::zero(), |acc, &x| acc.max(x.abs()))
    }

    pub fn scale(&self, s: T) -> Self {
        let mut c = self.c;
        for x in c.iter_mut() {
            *x = *x * s;
        }
        Self { c }
    }

    /// True when every odd-grade coefficient is exactly zero.
    pub fn is_even(&self) -> bool {
        (0..8).all(|i| GRADE[i] % 2 == 0 || self.c[i] == T::zero())
    }

    /// Magnitude of the odd-grade part.
    pub fn odd_part_norm(&self) -> T {
        (0..8)
            .filter(|&i| GRADE[i] % 2 == 1)
            .fold(T::zero(), |acc, i| acc + self.c[i] * self.c[i])
            .sqrt()
    }

    pub fn even_part(&self) -> EvenElement<T> {
        EvenElement { s: self.c[S], e12: self.c[E12], e13: self.c[E13], e23: self.c[E23] }
    }

    /// Converts to `f64` coefficients.
    pub fn to_f64(&self) -> Multivector3<f64> {
        let mut c = [0.0; 8];
        for (o, x) in c.iter_mut().zip(self.c) {
            *o = x.as_f64();
        }
        Multivector3 { c }
    }
}

impl<T: fmt::Debug> fmt::Debug for Multivector3<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_struct("Multivector3");
        for (name, c) in ["s", "e1", "e2", "e3", "e12", "e13", "e23", "e123"].iter().zip(&self.c) {
            d.field(name, c);
        }
        d.finish()
    }
}

impl<T: Real> Add for Multivector3<T> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl<T: Real> AddAssign for Multivector3<T> {
    fn add_assign(&mut self, rhs: Self) {
        for (a, b) in self.c.iter_mut().zip(rhs.c) {
            *a = *a + b;
        }
    }
}

impl<T: Real> Sub for Multivector3<T> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self -= rhs;
        self
    }
}

impl<T: Real> SubAssign for Multivector3<T> {
    fn sub_assign(&mut self, rhs: Self) {
        for (a, b) in self.c.iter_mut().zip(rhs.c) {
            *a = *a - b;
        }
    }
}

impl<T: Real> Neg for Multivector3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-T::one())
    }
}

impl<T: Real> Mul for Multivector3<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        BladeTable::CANONICAL.mul(&self, &rhs)
    }
}

impl<T: Real> Mul<T> for Multivector3<T> {
    type Output = Self;
    fn mul(self, rhs: T) -> Self {
        self.scale(rhs)
    }
}

impl<T: Real> std::iter::Sum for Multivector3<T> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

/// `e^{e12 angle} = cos(angle) + e12 sin(angle)`.
pub fn exp_e12<T: Real>(angle: T) -> Multivector3<T> {
    let mut c = [T::zero(); 8];
    c[S] = angle.cos();
    c[E12] = angle.sin();
    Multivector3 { c }
}

/// Exponential of a bivector `B` with `B^2 = -s^2`: `cos s + B sin(s)/s`.
pub fn exp_bivector<T: Real>(b: &Multivector3<T>) -> Result<Multivector3<T>> {
    let tol = T::tol(1e-12);
    let off = (0..8)
        .filter(|&i| GRADE[i] != 2)
        .fold(T::zero(), |acc, i| acc.max(b.c[i].abs()));
    if off > tol {
        return Err(Error::NotBivector(off.as_f64()));
    }
    let sq = *b * *b;
    let residue = (1..8).fold(T::zero(), |acc, i| acc.max(sq.c[i].abs()));
    if residue > tol {
        return Err(Error::NonScalarSquare(residue.as_f64()));
    }
    let s2 = -sq.c[S];
    let s = s2.max(T::zero()).sqrt();
    let (cos_s, sinc) = if s < T::lit(1e-8) {
        (T::one() - s2 / T::lit(2.0), T::one() - s2 / T::lit(6.0))
    } else {
        (s.cos(), s.sin() / s)
    };
    let mut out = b.grade(2)?.scale(sinc);
    out.c[S] = cos_s;
    Ok(out)
}

/// An element of the even subalgebra `span{1, e12, e13, e23}`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct EvenElement<T> {
    pub s: T,
    pub e12: T,
    pub e13: T,
    pub e23: T,
}

impl<T: Real> EvenElement<T> {
    pub fn new(s: T, e12: T, e13: T, e23: T) -> Self {
        Self { s, e12, e13, e23 }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    pub fn one() -> Self {
        Self::scalar(T::one())
    }

    pub fn scalar(s: T) -> Self {
        Self::new(s, T::zero(), T::zero(), T::zero())
    }

    pub fn to_multivector(&self) -> Multivector3<T> {
        let mut c = [T::zero(); 8];
        c[S] = self.s;
        c[E12] = self.e12;
        c[E13] = self.e13;
        c[E23] = self.e23;
        Multivector3 { c }
    }

    /// Projects onto the even part, discarding any odd-grade coefficients.
    pub fn from_multivector(m: &Multivector3<T>) -> Self {
        m.even_part()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.s, -self.e12, -self.e13, -self.e23)
    }

    pub fn norm_sq(&self) -> T {
        self.s * self.s + self.e12 * self.e12 + self.e13 * self.e13 + self.e23 * self.e23
    }

    pub fn norm(&self) -> T {
        self.norm_sq().sqrt()
    }

    pub fn scale(&self, a: T) -> Self {
        Self::new(self.s * a, self.e12 * a, self.e13 * a, self.e23 * a)
    }
}

impl<T: Real> Add for EvenElement<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.s + o.s, self.e12 + o.e12, self.e13 + o.e13, self.e23 + o.e23)
    }
}

impl<T: Real> Sub for EvenElement<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.s - o.s, self.e12 - o.e12, self.e13 - o.e13, self.e23 - o.e23)
    }
}

impl<T: Real> Neg for EvenElement<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-T::one())
    }
}

impl<T: Real> Mul for EvenElement<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        (self.to_multivector() * o.to_multivector()).even_part()
    }
}

/// A real quaternion written in the Clifford algebra of R^2:
/// `w + x e1 + y e2 + z e12`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Quaternion<T> {
    pub w: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Quaternion<T> {
    pub fn new(w: T, x: T, y: T, z: T) -> Self {
        Self { w, x, y, z }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    pub fn one() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::zero())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sq(&self) -> T {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(&self) -> T {
        self.norm_sq().sqrt()
    }

    pub fn scale(&self, a: T) -> Self {
        Self::new(self.w * a, self.x * a, self.y * a, self.z * a)
    }
}

impl<T: Real> Add for Quaternion<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Real> Sub for Quaternion<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Real> Neg for Quaternion<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-T::one())
    }
}

impl<T: Real> Mul for Quaternion<T> {
    type Output = Self;
    // e1, e2, e12 multiply like Hamilton's i, j, k.
    fn mul(self, o: Self) -> Self {
        let (a, b) = (self, o);
        Self::new(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        )
    }
}

/// The *-isomorphism from the even subalgebra of R_3 onto the quaternions:
/// `x0 + x12 e12 + x13 e13 + x23 e23  ->  x0 + x12 e12 + x13 e2 - x23 e1`.
pub fn tau<T: Real>(a: &EvenElement<T>) -> Quaternion<T> {
    Quaternion::new(a.s, -a.e23, a.e13, a.e12)
}

pub fn tau_inv<T: Real>(q: &Quaternion<T>) -> EvenElement<T> {
    EvenElement::new(q.w, q.z, q.y, -q.x)
}
