//! Projected gradient descent on products of spheres for the kernel Gram
//! energies of point ensembles, with seeded multi-start.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orthopoly::{gegenbauer, gegenbauer_deriv, legendre, legendre_deriv};
use crate::scalar::{norm, Real, Vec3};
use crate::sphere_quad::{geodesic_step, SpherePoint};

/// Which kernel energy to minimize.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectiveKind {
    Harmonic,
    Monogenic,
}

impl ObjectiveKind {
    /// Number of points the degree-`k` problem needs: `2k+1` or `k+1`.
    pub fn ensemble_size(self, k: usize) -> usize {
        match self {
            ObjectiveKind::Harmonic => 2 * k + 1,
            ObjectiveKind::Monogenic => k + 1,
        }
    }

    /// Pair energy `g(t)` and its derivative at `t = <eta_i, eta_j>`.
    ///
    /// Harmonic: `P_k(t)^2`. Monogenic: `(k+1)^2 P_k(t)^2 + (1 - t^2) C_{k-1}^{3/2}(t)^2`,
    /// which equals the squared norm of the monogenic kernel.
    pub fn pair_energy<T: Real>(self, k: usize, t: T) -> (T, T) {
        let two = T::lit(2.0);
        match self {
            ObjectiveKind::Harmonic => {
                let p = legendre(k, t);
                (p * p, two * p * legendre_deriv(k, t))
            }
            ObjectiveKind::Monogenic => {
                let kk = k as i64;
                let a = T::from_usize_lossy(k + 1);
                let half = T::lit(0.5);
                let three_half = T::lit(1.5);
                let c = gegenbauer(kk, half, t);
                let dc = gegenbauer_deriv(kk, half, t);
                let b = gegenbauer(kk - 1, three_half, t);
                let db = gegenbauer_deriv(kk - 1, three_half, t);
                let s = T::one() - t * t;
                let g = a * a * c * c + s * b * b;
                let dg = two * a * a * c * dc - two * t * b * b + two * s * b * db;
                (g, dg)
            }
        }
    }
}

impl std::fmt::Display for ObjectiveKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ObjectiveKind::Harmonic => "harmonic",
            ObjectiveKind::Monogenic => "monogenic",
        })
    }
}

impl std::str::FromStr for ObjectiveKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "harmonic" => Ok(ObjectiveKind::Harmonic),
            "monogenic" => Ok(ObjectiveKind::Monogenic),
            other => Err(Error::InvalidConfig(format!("unknown objective kind '{other}'"))),
        }
    }
}

/// Points on the unit sphere. Serializes as a list of `[x, y, z]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent, bound = "T: Real")]
pub struct Ensemble<T> {
    pub points: Vec<SpherePoint<T>>,
}

impl<T: Real> Ensemble<T> {
    pub fn new(points: Vec<SpherePoint<T>>) -> Self {
        Self { points }
    }

    pub fn random<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Self { points: (0..n).map(|_| SpherePoint::random(rng)).collect() }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn check_size<T>(kind: ObjectiveKind, k: usize, eta: &Ensemble<T>) -> Result<()> {
    let expected = kind.ensemble_size(k);
    if eta.points.len() != expected {
        return Err(Error::WrongEnsembleSize { k, expected, got: eta.points.len() });
    }
    Ok(())
}

fn energy<T: Real>(kind: ObjectiveKind, k: usize, pts: &[SpherePoint<T>]) -> T {
    let mut s = T::zero();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            s = s + kind.pair_energy(k, pts[i].dot(&pts[j])).0;
        }
    }
    s
}

/// `sum_{i<j} g(<eta_i, eta_j>)` for the given kind.
pub fn objective<T: Real>(kind: ObjectiveKind, k: usize, eta: &Ensemble<T>) -> Result<T> {
    check_size(kind, k, eta)?;
    Ok(energy(kind, k, &eta.points))
}

/// `sum_{i<j} P_k(<eta_i, eta_j>)^2` over `2k+1` points.
pub fn objective_harmonic<T: Real>(k: usize, eta: &Ensemble<T>) -> Result<T> {
    objective(ObjectiveKind::Harmonic, k, eta)
}

/// `sum_{i<j} [(k+1)^2 P_k^2 + (1 - t^2) (C_{k-1}^{3/2})^2]` over `k+1` points.
pub fn objective_monogenic<T: Real>(k: usize, eta: &Ensemble<T>) -> Result<T> {
    objective(ObjectiveKind::Monogenic, k, eta)
}

/// The part of the objective that depends on point `l`, with `eta_l`
/// replaced by `moved`.
pub fn partial_energy<T: Real>(kind: ObjectiveKind, k: usize, pts: &[SpherePoint<T>], l: usize, moved: &SpherePoint<T>) -> T {
    pts.iter()
        .enumerate()
        .filter(|&(i, _)| i != l)
        .fold(T::zero(), |acc, (_, p)| acc + kind.pair_energy(k, p.dot(moved)).0)
}

/// Tangent gradient of the objective with respect to point `l`:
/// `sum_{i != l} g'(t_i) (eta_i - t_i eta_l)`.
pub fn tangent_gradient<T: Real>(kind: ObjectiveKind, k: usize, pts: &[SpherePoint<T>], l: usize) -> Vec3<T> {
    let p = &pts[l];
    let mut g = [T::zero(); 3];
    for (i, q) in pts.iter().enumerate() {
        if i == l {
            continue;
        }
        let t = q.dot(p);
        let d = kind.pair_energy(k, t).1;
        for c in 0..3 {
            g[c] = g[c] + d * (q.xyz[c] - t * p.xyz[c]);
        }
    }
    g
}

/// Unit steepest-descent tangent direction at point `l`, or `None` when the
/// tangent gradient is shorter than `grad_tol`.
pub fn steepest_direction<T: Real>(kind: ObjectiveKind, k: usize, eta: &Ensemble<T>, l: usize, grad_tol: T) -> Result<Option<Vec3<T>>> {
    check_size(kind, k, eta)?;
    if l >= eta.len() {
        return Err(Error::IndexOutOfRange { what: "ensemble point", index: l });
    }
    let g = tangent_gradient(kind, k, &eta.points, l);
    let n = norm(&g);
    if !(n >= grad_tol) {
        return Ok(None);
    }
    Ok(Some([-g[0] / n, -g[1] / n, -g[2] / n]))
}

/// Analytic `d/dt G_l(t)` at `t = 0` along the geodesic leaving `eta_l` in
/// direction `w`: `sum_{i != l} g'(t_i) <eta_i, w>`.
pub fn directional_derivative<T: Real>(kind: ObjectiveKind, k: usize, eta: &Ensemble<T>, l: usize, w: &Vec3<T>) -> T {
    let p = &eta.points[l];
    eta.points.iter().enumerate().filter(|&(i, _)| i != l).fold(T::zero(), |acc, (_, q)| {
        let d = kind.pair_energy(k, q.dot(p)).1;
        acc + d * crate::scalar::dot(&q.xyz, w)
    })
}

/// Backtracking line search parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct LineSearch<T> {
    pub t_max: T,
    pub shrink: T,
    /// Sufficient-decrease (Armijo) constant.
    pub armijo: T,
}

impl<T: Real> Default for LineSearch<T> {
    fn default() -> Self {
        Self { t_max: T::FRAC_PI_4(), shrink: T::lit(0.5), armijo: T::lit(1e-4) }
    }
}

/// Order in which points are updated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Selection {
    /// Every point once per cycle, in index order.
    #[default]
    Cyclic,
    /// One point per cycle: the one whose line search lowers the objective most.
    Greedy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct OptimizerConfig<T> {
    pub kind: ObjectiveKind,
    pub k: usize,
    pub max_iters: usize,
    pub grad_tol: T,
    pub starts: usize,
    pub seed: u64,
    pub line_search: LineSearch<T>,
    #[serde(default)]
    pub selection: Selection,
}

impl<T: Real> OptimizerConfig<T> {
    pub fn new(kind: ObjectiveKind, k: usize) -> Self {
        Self {
            kind,
            k,
            max_iters: 1000,
            grad_tol: T::lit(1e-10),
            starts: 50,
            seed: 0,
            line_search: LineSearch::default(),
            selection: Selection::Cyclic,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ls = &self.line_search;
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.max_iters == 0 {
            return bad("max_iters must be at least 1");
        }
        if self.starts == 0 {
            return bad("starts must be at least 1");
        }
        if !(self.grad_tol > T::zero()) {
            return bad("grad_tol must be positive");
        }
        if !(ls.shrink > T::zero() && ls.shrink < T::one()) {
            return bad("line search shrink factor must lie in (0, 1)");
        }
        if !(ls.t_max > T::zero()) {
            return bad("line search t_max must be positive");
        }
        if !(ls.armijo > T::zero() && ls.armijo < T::one()) {
            return bad("sufficient-decrease constant must lie in (0, 1)");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct OptimizationResult<T> {
    pub ensemble: Ensemble<T>,
    pub objective: T,
    pub iterations: usize,
    /// `(iteration, objective)` after each completed cycle, starting at 0.
    pub trace: Vec<(usize, T)>,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct StartSummary<T> {
    pub start: usize,
    pub objective: T,
    pub iterations: usize,
    pub converged: bool,
}

/// Outcome of a multi-start run: the best start in full plus a summary of
/// every start.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct MultiStartResult<T> {
    pub config: OptimizerConfig<T>,
    pub best_start: usize,
    pub best: OptimizationResult<T>,
    pub starts: Vec<StartSummary<T>>,
}

impl<T: Real> MultiStartResult<T> {
    pub fn any_converged(&self) -> bool {
        self.starts.iter().any(|s| s.converged)
    }
}

/// Random initial ensemble for start `start`: stream `start` of a ChaCha8
/// generator seeded with `seed`.
pub fn initial_ensemble<T: Real>(kind: ObjectiveKind, k: usize, seed: u64, start: usize) -> Ensemble<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(start as u64);
    Ensemble::random(kind.ensemble_size(k), &mut rng)
}

/// Smallest step the line search tries before giving up.
const MIN_STEP: f64 = 1e-12;

/// Best accepted move of point `l`, as `(new point, new objective)`.
fn line_search<T: Real>(cfg: &OptimizerConfig<T>, pts: &[SpherePoint<T>], l: usize, current: T) -> Option<(SpherePoint<T>, T)> {
    let g = tangent_gradient(cfg.kind, cfg.k, pts, l);
    let gn = norm(&g);
    if !(gn >= cfg.grad_tol) {
        return None;
    }
    let w = [-g[0] / gn, -g[1] / gn, -g[2] / gn];
    // slope of G_l along w is -|g|
    let old = partial_energy(cfg.kind, cfg.k, pts, l, &pts[l]);
    let ls = &cfg.line_search;
    let mut t = ls.t_max;
    let mut trial = pts.to_vec();
    while t >= T::lit(MIN_STEP) {
        let moved = geodesic_step(&pts[l], &w, t).ok()?;
        let new = partial_energy(cfg.kind, cfg.k, pts, l, &moved);
        if new <= old - ls.armijo * t * gn && new < old {
            trial[l] = moved;
            let total = energy(cfg.kind, cfg.k, &trial);
            if total < current {
                return Some((moved, total));
            }
        }
        t = t * ls.shrink;
    }
    None
}

/// Runs a single start from the given ensemble.
pub fn descend<T: Real>(cfg: &OptimizerConfig<T>, start: Ensemble<T>) -> Result<OptimizationResult<T>> {
    cfg.validate()?;
    check_size(cfg.kind, cfg.k, &start)?;
    let mut pts = start.points;
    let mut obj = energy(cfg.kind, cfg.k, &pts);
    let mut trace = vec![(0, obj)];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < cfg.max_iters {
        iterations += 1;
        let before = obj;
        match cfg.selection {
            Selection::Cyclic => {
                for l in 0..pts.len() {
                    if let Some((p, total)) = line_search(cfg, &pts, l, obj) {
                        pts[l] = p;
                        obj = total;
                    }
                }
            }
            Selection::Greedy => {
                let best = (0..pts.len())
                    .filter_map(|l| line_search(cfg, &pts, l, obj).map(|(p, total)| (l, p, total)))
                    .fold(None::<(usize, SpherePoint<T>, T)>, |acc, c| match acc {
                        Some(a) if a.2 <= c.2 => Some(a),
                        _ => Some(c),
                    });
                if let Some((l, p, total)) = best {
                    pts[l] = p;
                    obj = total;
                }
            }
        }
        trace.push((iterations, obj));
        if before - obj < cfg.grad_tol {
            converged = true;
            break;
        }
    }
    Ok(OptimizationResult { ensemble: Ensemble::new(pts), objective: obj, iterations, trace, converged })
}

/// Multi-start projected gradient descent. Starts run in parallel on the
/// current rayon pool; the result is independent of scheduling. Ties in the
/// objective go to the lowest start index.
pub fn optimize<T: Real>(cfg: &OptimizerConfig<T>) -> Result<MultiStartResult<T>> {
    cfg.validate()?;
    let runs: Vec<OptimizationResult<T>> = (0..cfg.starts)
        .into_par_iter()
        .map(|s| descend(cfg, initial_ensemble(cfg.kind, cfg.k, cfg.seed, s)))
        .collect::<Result<_>>()?;
    let mut best_start = 0;
    for (i, r) in runs.iter().enumerate() {
        if r.objective < runs[best_start].objective {
            best_start = i;
        }
    }
    let starts = runs
        .iter()
        .enumerate()
        .map(|(start, r)| StartSummary { start, objective: r.objective, iterations: r.iterations, converged: r.converged })
        .collect();
    let best = runs.into_iter().nth(best_start).expect("at least one start");
    Ok(MultiStartResult { config: cfg.clone(), best_start, best, starts })
}
