//! Self-check suite: algebra identities, orthonormality, the Dirac norm
//! ratio, kernel reproduction, equator sums and the matrix embeddings.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::clifford3::{tau, BladeTable, EvenElement, Multivector3, Quaternion};
use crate::error::Result;
use crate::harmonics::{kernel_r3, HarmonicBasis};
use crate::monogenics::{equator_gram_raw, kernel_k3, MonogenicBasis};
use crate::polyfield::PolyField;
use crate::qlinalg::{chi, chi_inv, hermitian_inv_sqrt, ComplexMatrix, QuatMatrix, SquareMatrix, HERMITIAN_FLOOR};
use crate::sphere_quad::{QuadratureRule, SpherePoint};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub k_max: usize,
    /// Lower bound on the product-rule parameter; raised per degree when
    /// needed for exactness.
    pub quad_deg: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { k_max: 6, quad_deg: 8, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub max_error: f64,
    pub tolerance: f64,
    pub cases: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failing(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }
}

/// Running maximum of an error measure against a fixed tolerance.
struct Tally {
    max: f64,
    cases: usize,
    ok: bool,
}

impl Tally {
    fn new() -> Self {
        Self { max: 0.0, cases: 0, ok: true }
    }

    fn add(&mut self, err: f64) {
        self.cases += 1;
        if err.is_nan() {
            self.ok = false;
        }
        self.max = self.max.max(err);
    }

    fn fail(&mut self) {
        self.cases += 1;
        self.ok = false;
    }

    fn finish(self, name: &str, tol: f64) -> CheckResult {
        CheckResult { name: name.to_string(), passed: self.ok && self.max <= tol, max_error: self.max, tolerance: tol, cases: self.cases }
    }
}

fn random_mv(r: &mut ChaCha8Rng) -> Multivector3<f64> {
    let mut c = [0.0; 8];
    for x in c.iter_mut() {
        *x = r.random_range(-1.0..1.0);
    }
    Multivector3::from_coeffs(c)
}

fn random_even(r: &mut ChaCha8Rng) -> EvenElement<f64> {
    EvenElement::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0), r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))
}

fn random_quat_matrix(n: usize, r: &mut ChaCha8Rng) -> QuatMatrix<f64> {
    SquareMatrix::from_fn(n, |_, _| tau(&random_even(r)))
}

fn quat_diff(a: Quaternion<f64>, b: Quaternion<f64>) -> f64 {
    let d = a - b;
    d.w.abs().max(d.x.abs()).max(d.y.abs()).max(d.z.abs())
}

fn rule_for(cfg: &VerifyConfig, k: usize) -> QuadratureRule<f64> {
    QuadratureRule::product_rule(cfg.quad_deg.max(k + 2))
}

fn area() -> f64 {
    4.0 * std::f64::consts::PI
}

pub const ALGEBRA_TOL: f64 = 1e-12;
pub const ORTHO_TOL: f64 = 1e-9;
pub const NORM_RATIO_TOL: f64 = 1e-8;
pub const REPRODUCTION_TOL: f64 = 1e-7;
pub const EQUATOR_TOL: f64 = 1e-9;

const SAMPLES: usize = 100;

/// `(ab)c = a(bc)` for random multivectors under the given product table.
pub fn check_associativity(table: &BladeTable, r: &mut ChaCha8Rng) -> CheckResult {
    let mut t = Tally::new();
    for _ in 0..SAMPLES {
        let (a, b, c) = (random_mv(r), random_mv(r), random_mv(r));
        let lhs = table.mul(&table.mul(&a, &b), &c);
        let rhs = table.mul(&a, &table.mul(&b, &c));
        t.add((lhs - rhs).max_abs());
    }
    // generator squares belong to the same table
    for i in 1..4 {
        let e = Multivector3::<f64>::blade(i);
        t.add((table.mul(&e, &e) + Multivector3::one()).max_abs());
    }
    t.finish("clifford associativity", ALGEBRA_TOL)
}

/// `conj(ab) = conj(b) conj(a)`.
pub fn check_conjugation(table: &BladeTable, r: &mut ChaCha8Rng) -> CheckResult {
    let mut t = Tally::new();
    for _ in 0..SAMPLES {
        let (a, b) = (random_mv(r), random_mv(r));
        t.add((table.mul(&a, &b).conj() - table.mul(&b.conj(), &a.conj())).max_abs());
    }
    t.finish("clifford conjugation", ALGEBRA_TOL)
}

/// `tau` is multiplicative, additive and commutes with conjugation.
pub fn check_tau(r: &mut ChaCha8Rng) -> CheckResult {
    let mut t = Tally::new();
    for _ in 0..SAMPLES {
        let (a, b) = (random_even(r), random_even(r));
        t.add(quat_diff(tau(&(a * b)), tau(&a) * tau(&b)));
        t.add(quat_diff(tau(&(a + b)), tau(&a) + tau(&b)));
        t.add(quat_diff(tau(&a.conj()), tau(&a).conj()));
    }
    t.finish("tau properties", ALGEBRA_TOL)
}

/// The complex adjoint preserves identity, products, adjoints and inverses.
pub fn check_chi(r: &mut ChaCha8Rng) -> CheckResult {
    let mut t = Tally::new();
    for n in 1..=3 {
        t.add(chi(&QuatMatrix::<f64>::identity(n)).max_abs_diff(&ComplexMatrix::identity(2 * n)).unwrap_or(f64::NAN));
    }
    for i in 0..SAMPLES {
        let n = 1 + i % 4;
        let a = random_quat_matrix(n, r);
        let b = random_quat_matrix(n, r);
        let ca = chi(&a);
        let ab = a.matmul(&b).expect("same size");
        t.add(chi(&ab).max_abs_diff(&ca.matmul(&chi(&b)).expect("same size")).unwrap_or(f64::NAN));
        t.add(chi(&a.adjoint()).max_abs_diff(&ca.adjoint()).unwrap_or(f64::NAN));
        // inverse through (C* C)^{-1} C*, with (C* C)^{-1/2} from the eigensolver
        let gram = ca.adjoint().matmul(&ca).expect("same size");
        let s = match hermitian_inv_sqrt(&gram, HERMITIAN_FLOOR) {
            Ok(s) => s,
            Err(_) => continue,
        };
        let c_inv = s.matmul(&s).and_then(|m| m.matmul(&ca.adjoint())).expect("same size");
        let scale = c_inv.max_abs().max(1.0);
        t.add(ca.matmul(&c_inv).expect("same size").max_abs_diff(&ComplexMatrix::identity(2 * n)).unwrap_or(f64::NAN) / scale);
        match chi_inv(&c_inv) {
            Ok(q) => {
                let prod = a.matmul(&q).expect("same size");
                let id = QuatMatrix::<f64>::identity(n);
                let mut worst: f64 = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        worst = worst.max(quat_diff(prod.get(i, j), id.get(i, j)));
                    }
                }
                t.add(worst / scale);
            }
            Err(_) => t.fail(),
        }
    }
    t.finish("chi properties", ALGEBRA_TOL)
}

/// Normalized-measure Gram of the orthonormal harmonic basis equals `I`.
pub fn check_harmonic_orthonormality(cfg: &VerifyConfig) -> CheckResult {
    let mut t = Tally::new();
    for k in 0..=cfg.k_max {
        let basis = HarmonicBasis::new(k);
        let q = rule_for(cfg, k);
        let vals: Vec<Vec<f64>> = (0..basis.len()).map(|i| q.sample_real(|p| basis.eval(i, p).expect("index in range"))).collect();
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                let g = q.inner_sampled_real(&vals[i], &vals[j]) / area();
                t.add((g - if i == j { 1.0 } else { 0.0 }).abs());
            }
        }
    }
    t.finish("harmonic orthonormality", ORTHO_TOL)
}

/// Normalized-measure Gram of the orthonormal monogenic basis equals `I`.
pub fn check_monogenic_orthonormality(cfg: &VerifyConfig) -> CheckResult {
    let mut t = Tally::new();
    for degree in 0..=cfg.k_max {
        let basis = MonogenicBasis::new(degree);
        let q = rule_for(cfg, degree);
        let vals: Vec<_> = (0..basis.len()).map(|n| q.sample(|p| basis.eval(n, p).expect("index in range"))).collect();
        for n in 0..basis.len() {
            for l in 0..basis.len() {
                let g = q.inner_sampled(&vals[n], &vals[l]).scale(1.0 / area());
                t.add((g.scalar_part() - if n == l { 1.0 } else { 0.0 }).abs());
            }
        }
    }
    t.finish("monogenic orthonormality", ORTHO_TOL)
}

/// `||dirac H||^2 / ||H||^2 = k(2k+1)` for random degree-`k` harmonics.
pub fn dirac_norm_ratio(k: usize, coeffs: &[f64], q: &QuadratureRule<f64>) -> Result<f64> {
    let basis = HarmonicBasis::new(k);
    let mut h = PolyField::zero();
    for (i, &c) in coeffs.iter().enumerate() {
        h = h + basis.poly::<f64>(i)?.scale(basis.scale::<f64>(i)? * c);
    }
    let dh = h.dirac();
    let num = q.integrate(|p| dh.eval(&p.xyz).norm_sq());
    let den = q.integrate(|p| h.eval(&p.xyz).norm_sq());
    Ok(num / den)
}

pub fn check_norm_theorem(cfg: &VerifyConfig, r: &mut ChaCha8Rng) -> CheckResult {
    let mut t = Tally::new();
    for k in 1..=cfg.k_max {
        let q = rule_for(cfg, k);
        let want = (k * (2 * k + 1)) as f64;
        for _ in 0..5 {
            let coeffs: Vec<f64> = (0..2 * k + 1).map(|_| r.random_range(-1.0..1.0)).collect();
            match dirac_norm_ratio(k, &coeffs, &q) {
                Ok(ratio) => t.add((ratio - want).abs() / want),
                Err(_) => t.fail(),
            }
        }
    }
    t.finish("norm theorem", NORM_RATIO_TOL)
}

/// Reproduction of basis functions by both kernels at random points.
pub fn check_kernel_reproduction(cfg: &VerifyConfig, r: &mut ChaCha8Rng) -> CheckResult {
    let mut t = Tally::new();
    for k in 0..=cfg.k_max {
        let q = rule_for(cfg, k);
        let hb = HarmonicBasis::new(k);
        let mb = MonogenicBasis::new(k);
        let xs: Vec<SpherePoint<f64>> = (0..3).map(|_| SpherePoint::random(r)).collect();
        for x in &xs {
            let hk = q.sample_real(|y| kernel_r3(k, x, y));
            for i in 0..hb.len() {
                let vals = q.sample_real(|p| hb.eval(i, p).expect("index in range"));
                let got = q.inner_sampled_real(&hk, &vals) / area();
                t.add((got - hb.eval(i, x).expect("index in range")).abs());
            }
            // the inner product conjugates its left factor
            let mk: Vec<_> = q.sample(|y| kernel_k3(k, x, y).conj());
            for n in 0..mb.len() {
                let vals = q.sample(|p| mb.eval(n, p).expect("index in range"));
                let got = q.inner_sampled(&mk, &vals).scale(1.0 / area());
                t.add((got - mb.eval(n, x).expect("index in range")).max_abs());
            }
        }
    }
    t.finish("kernel reproduction", REPRODUCTION_TOL)
}

/// Equator sums of the monogenic basis: off-diagonal scalar parts vanish and
/// the diagonal is positive. The full off-diagonal entries alias for odd
/// degree, so only the scalar parts are checked here.
pub fn check_equator(cfg: &VerifyConfig) -> CheckResult {
    let mut t = Tally::new();
    for degree in 0..=cfg.k_max {
        match equator_gram_raw::<f64>(degree) {
            Ok(g) => {
                t.add(g.max_off_diagonal_scalar());
                if g.diagonal().iter().any(|&d| !(d > 0.0)) {
                    t.fail();
                }
            }
            Err(_) => t.fail(),
        }
    }
    t.finish("equator scalar diagonality", EQUATOR_TOL)
}

/// Runs every check. Algebra checks use `table`, so a corrupted product
/// table shows up by name.
pub fn run(cfg: &VerifyConfig, table: &BladeTable) -> VerifyReport {
    let mut r = ChaCha8Rng::seed_from_u64(cfg.seed);
    let checks = vec![
        check_associativity(table, &mut r),
        check_conjugation(table, &mut r),
        check_tau(&mut r),
        check_chi(&mut r),
        check_harmonic_orthonormality(cfg),
        check_monogenic_orthonormality(cfg),
        check_norm_theorem(cfg, &mut r),
        check_kernel_reproduction(cfg, &mut r),
        check_equator(cfg),
    ];
    VerifyReport { config: cfg.clone(), checks }
}
