//! Local energy minimisation on spheres, the five-point experiment, and
//! greedy saturation of flat tori.

mod torus;

pub use torus::{greedy_saturate_torus, probe_torus, SaturationSettings, TorusPacking};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::{catalog, energy, CodeName, PotentialSpec, SphericalCode};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinimizeSettings {
    pub restarts: usize,
    pub max_iterations: usize,
    /// Stop when the Euclidean norm of the tangential gradient drops below
    /// `gradient_tol * (1 + |E|)`; energies carry rounding of that relative size.
    pub gradient_tol: f64,
    pub initial_step: f64,
    /// Armijo sufficient-decrease constant.
    pub armijo: f64,
    /// Backtracking factor.
    pub shrink: f64,
    pub seed: u64,
}

impl Default for MinimizeSettings {
    fn default() -> Self {
        Self {
            restarts: 20,
            max_iterations: 20_000,
            gradient_tol: 1e-8,
            initial_step: 0.05,
            armijo: 1e-4,
            shrink: 0.5,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Converged,
    IterationLimit,
    /// The line search could not decrease the energy.
    StepUnderflow,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartResult {
    pub energy: f64,
    pub gradient_norm: f64,
    pub iterations: usize,
    pub status: RunStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalMinReport {
    pub best: SphericalCode,
    pub best_energy: f64,
    pub best_restart: usize,
    pub gradient_norm: f64,
    pub restarts: Vec<RestartResult>,
    /// Whether the best restart met the gradient tolerance.
    pub converged: bool,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn pair_energy(points: &[Vec<f64>], f: &PotentialSpec) -> f64 {
    let mut total = 0.0;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            total += f.value(sq_dist(&points[i], &points[j]));
        }
    }
    total
}

/// Gradient of the energy with respect to each point, in `R^n`.
fn euclidean_gradient(points: &[Vec<f64>], f: &PotentialSpec) -> Vec<Vec<f64>> {
    let n = points[0].len();
    let mut g = vec![vec![0.0; n]; points.len()];
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let w = 2.0 * f.derivative(sq_dist(&points[i], &points[j]), 1);
            for k in 0..n {
                let v = w * (points[i][k] - points[j][k]);
                g[i][k] += v;
                g[j][k] -= v;
            }
        }
    }
    g
}

/// Gradient projected onto the tangent space of the sphere at each point.
pub fn tangential_gradient(points: &[Vec<f64>], f: &PotentialSpec) -> Vec<Vec<f64>> {
    let mut g = euclidean_gradient(points, f);
    for (gi, x) in g.iter_mut().zip(points) {
        let radial: f64 = gi.iter().zip(x).map(|(a, b)| a * b).sum();
        for (a, b) in gi.iter_mut().zip(x) {
            *a -= radial * b;
        }
    }
    g
}

fn norm_sq(g: &[Vec<f64>]) -> f64 {
    g.iter().flatten().map(|x| x * x).sum()
}

fn random_points(n: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| {
            let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
            let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.into_iter().map(|x| x / r).collect()
        })
        .collect()
}

fn step(points: &[Vec<f64>], g: &[Vec<f64>], alpha: f64) -> Vec<Vec<f64>> {
    points
        .iter()
        .zip(g)
        .map(|(x, gi)| {
            let y: Vec<f64> = x.iter().zip(gi).map(|(a, b)| a - alpha * b).collect();
            let r = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            y.into_iter().map(|v| v / r).collect()
        })
        .collect()
}

/// Projected gradient descent with Armijo backtracking from `points`. Each
/// line search starts from the Barzilai-Borwein step of the last move.
pub fn descend(points: Vec<Vec<f64>>, f: &PotentialSpec, settings: &MinimizeSettings) -> (Vec<Vec<f64>>, RestartResult) {
    let mut x = points;
    let mut e = pair_energy(&x, f);
    let mut alpha = settings.initial_step;
    let mut g = tangential_gradient(&x, f);
    let mut gn2 = norm_sq(&g);
    let mut status = RunStatus::IterationLimit;
    let mut iterations = 0;
    while iterations < settings.max_iterations {
        if gn2.sqrt() <= settings.gradient_tol * (1.0 + e.abs()) {
            status = RunStatus::Converged;
            break;
        }
        iterations += 1;
        let mut accepted = None;
        while alpha > 1e-300 {
            let y = step(&x, &g, alpha);
            let ey = pair_energy(&y, f);
            let decrease = settings.armijo * alpha * gn2;
            if decrease < 8.0 * f64::EPSILON * e.abs() {
                // Below rounding the Armijo test cannot be decided; accept a
                // step that does not raise the energy and shrinks the gradient.
                if ey <= e {
                    let gy = tangential_gradient(&y, f);
                    if norm_sq(&gy) < gn2 {
                        accepted = Some((y, ey, Some(gy)));
                        break;
                    }
                }
            } else if ey <= e - decrease {
                accepted = Some((y, ey, None));
                break;
            }
            alpha *= settings.shrink;
        }
        let Some((y, ey, gy)) = accepted else {
            status = RunStatus::StepUnderflow;
            break;
        };
        let gy = gy.unwrap_or_else(|| tangential_gradient(&y, f));
        // BB1 step <s,s>/<s,dg> from the displacement and gradient change.
        let (mut ss, mut sg) = (0.0, 0.0);
        for ((xi, yi), (gi, hi)) in x.iter().zip(&y).zip(g.iter().zip(&gy)) {
            for k in 0..xi.len() {
                let sk = yi[k] - xi[k];
                ss += sk * sk;
                sg += sk * (hi[k] - gi[k]);
            }
        }
        alpha = if sg > 0.0 && ss > 0.0 {
            (ss / sg).min(1e6 * settings.initial_step)
        } else {
            alpha / settings.shrink
        };
        x = y;
        e = ey;
        g = gy;
        gn2 = norm_sq(&g);
    }
    if status != RunStatus::Converged && gn2.sqrt() <= settings.gradient_tol * (1.0 + e.abs()) {
        status = RunStatus::Converged;
    }
    let result = RestartResult {
        energy: e,
        gradient_norm: gn2.sqrt(),
        iterations,
        status,
    };
    (x, result)
}

/// Seed for restart `r`: the run seed on stream `r`.
fn restart_rng(seed: u64, r: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(r as u64);
    rng
}

/// Best of `settings.restarts` local minimisations of the `f`-energy of
/// `count` points on `S^{n-1}` from uniform random starts.
pub fn minimize_energy(n: usize, count: usize, f: &PotentialSpec, settings: &MinimizeSettings) -> Result<LocalMinReport> {
    if n < 2 || count < 2 {
        return Err(Error::Domain("need n >= 2 and at least two points".into()));
    }
    if settings.restarts == 0 {
        return Err(Error::Domain("need at least one restart".into()));
    }
    if !(settings.shrink > 0.0 && settings.shrink < 1.0 && settings.initial_step > 0.0) {
        return Err(Error::Domain("step control parameters out of range".into()));
    }
    let runs: Vec<(Vec<Vec<f64>>, RestartResult)> = (0..settings.restarts)
        .into_par_iter()
        .map(|r| {
            let start = random_points(n, count, &mut restart_rng(settings.seed, r));
            descend(start, f, settings)
        })
        .collect();
    let best_restart = runs
        .iter()
        .enumerate()
        .filter(|(_, (_, r))| r.energy.is_finite())
        .min_by(|a, b| a.1 .1.energy.total_cmp(&b.1 .1.energy).then(a.0.cmp(&b.0)))
        .map(|(i, _)| i)
        .ok_or_else(|| Error::Domain("every restart produced a non-finite energy".into()))?;
    let restarts: Vec<RestartResult> = runs.iter().map(|(_, r)| r.clone()).collect();
    let (points, best) = runs.into_iter().nth(best_restart).expect("index from enumerate");
    Ok(LocalMinReport {
        best: SphericalCode::new(points)?,
        best_energy: best.energy,
        best_restart,
        gradient_norm: best.gradient_norm,
        converged: best.status == RunStatus::Converged,
        restarts,
    })
}

/// Largest relative difference between the analytic tangential gradient and
/// central differences (step `h`), over 5 random configurations.
pub fn gradient_check(n: usize, count: usize, f: &PotentialSpec, seed: u64, h: f64) -> Result<f64> {
    if n < 2 || count < 2 || !(h > 0.0) {
        return Err(Error::Domain("need n >= 2, two points and a positive step".into()));
    }
    let mut worst: f64 = 0.0;
    for trial in 0..5 {
        let points = random_points(n, count, &mut restart_rng(seed, trial));
        let analytic = tangential_gradient(&points, f);
        let scale = analytic.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
        for i in 0..count {
            let mut fd = vec![0.0; n];
            for (k, slot) in fd.iter_mut().enumerate() {
                let mut plus = points.clone();
                let mut minus = points.clone();
                plus[i][k] += h;
                minus[i][k] -= h;
                *slot = (pair_energy(&plus, f) - pair_energy(&minus, f)) / (2.0 * h);
            }
            let radial: f64 = fd.iter().zip(&points[i]).map(|(a, b)| a * b).sum();
            for k in 0..n {
                let diff = (fd[k] - radial * points[i][k] - analytic[i][k]).abs();
                if diff > 0.0 {
                    worst = worst.max(diff / scale.max(f64::MIN_POSITIVE));
                }
            }
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FivePointRecord {
    pub s: f64,
    pub bipyramid_energy: f64,
    pub pyramid_energy: f64,
    /// Polar angle of the square, measured from the apex.
    pub pyramid_latitude: f64,
    pub winner: String,
}

impl FivePointRecord {
    pub const CSV_HEADER: &'static str = "s,bipyramid_energy,pyramid_energy,pyramid_latitude,winner";

    pub fn to_csv(&self) -> String {
        format!(
            "{},{:.15},{:.15},{:.15},{}",
            self.s, self.bipyramid_energy, self.pyramid_energy, self.pyramid_latitude, self.winner
        )
    }
}

fn pyramid_energy(latitude: f64, f: &PotentialSpec) -> f64 {
    catalog(&CodeName::SquarePyramid { latitude })
        .and_then(|c| energy(&c, f))
        .unwrap_or(f64::INFINITY)
}

/// Latitude minimising the square-pyramid energy: a coarse scan, then golden
/// section around the best sample.
pub fn best_square_pyramid(f: &PotentialSpec) -> (f64, f64) {
    use std::f64::consts::PI;
    let m = 400;
    let lat = |i: usize| PI * i as f64 / m as f64;
    let best = (1..m)
        .min_by(|&a, &b| pyramid_energy(lat(a), f).total_cmp(&pyramid_energy(lat(b), f)))
        .expect("nonempty scan");
    let neg = |t: f64| -pyramid_energy(t, f);
    let (t, v) = crate::sphere_lp::optimize::golden_max(&neg, lat(best - 1), lat(best + 1));
    (t, -v)
}

/// Riesz energies of the triangular bipyramid and the best square pyramid
/// for each exponent.
pub fn five_point_experiment(s_list: &[f64]) -> Result<Vec<FivePointRecord>> {
    let bipyramid = catalog(&CodeName::TriangularBipyramid)?;
    s_list
        .iter()
        .map(|&s| {
            let f = PotentialSpec::riesz(s)?;
            let b = energy(&bipyramid, &f)?;
            let (latitude, p) = best_square_pyramid(&f);
            Ok(FivePointRecord {
                s,
                bipyramid_energy: b,
                pyramid_energy: p,
                pyramid_latitude: latitude,
                winner: if b <= p { "bipyramid" } else { "square_pyramid" }.to_string(),
            })
        })
        .collect()
}

/// Exponent in `[lo, hi]` where the two five-point candidates tie, by
/// bisection on the energy difference, if the winner changes there.
pub fn five_point_crossover(lo: f64, hi: f64) -> Result<Option<f64>> {
    let bipyramid = catalog(&CodeName::TriangularBipyramid)?;
    let gap = |s: f64| -> Result<f64> {
        let f = PotentialSpec::riesz(s)?;
        // Compare per unit of the bipyramid energy so large s stays finite.
        let b = energy(&bipyramid, &f)?;
        Ok(best_square_pyramid(&f).1 / b - 1.0)
    };
    let (mut a, mut b) = (lo, hi);
    let (ga, gb) = (gap(a)?, gap(b)?);
    if ga.signum() == gb.signum() {
        return Ok(None);
    }
    for _ in 0..60 {
        let mid = 0.5 * (a + b);
        if gap(mid)?.signum() == ga.signum() {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(Some(0.5 * (a + b)))
}
