//! Spherical codes: point sets on `S^{n-1}`, their distance distributions,
//! pair energies, minimal angles, design strength and Delsarte sums, plus a
//! catalog of named configurations.

mod catalog;
mod potential;

pub use catalog::{catalog, CodeName};
pub use potential::{PotentialKind, PotentialSpec};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orthopoly::GegenbauerBasis;

/// Default clustering width for equal inner products.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-9;

/// A finite set of unit vectors in `R^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphericalCode {
    dimension: usize,
    points: Vec<Vec<f64>>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

impl SphericalCode {
    /// Points must already be unit vectors (to 1e-12).
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let code = Self::unchecked(points)?;
        for (i, p) in code.points.iter().enumerate() {
            let err = (dot(p, p).sqrt() - 1.0).abs();
            if err > 1e-12 {
                return Err(Error::Domain(format!("point {i} has norm off by {err:e}")));
            }
        }
        Ok(code)
    }

    /// Scale every (nonzero) point onto the sphere.
    pub fn normalized(points: Vec<Vec<f64>>) -> Result<Self> {
        let mut code = Self::unchecked(points)?;
        for (i, p) in code.points.iter_mut().enumerate() {
            let r = dot(p, p).sqrt();
            if !(r > 0.0) {
                return Err(Error::Domain(format!("point {i} is zero")));
            }
            for x in p.iter_mut() {
                *x /= r;
            }
        }
        Ok(code)
    }

    fn unchecked(points: Vec<Vec<f64>>) -> Result<Self> {
        let dimension = points.first().map(Vec::len).ok_or_else(|| Error::Domain("a code needs at least one point".into()))?;
        if dimension == 0 || points.iter().any(|p| p.len() != dimension) {
            return Err(Error::Domain("all points need the same positive dimension".into()));
        }
        if points.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Domain("point coordinates must be finite".into()));
        }
        Ok(Self { dimension, points })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn into_points(self) -> Vec<Vec<f64>> {
        self.points
    }

    /// Apply the linear map `x -> M x`.
    pub fn transformed(&self, m: &[Vec<f64>]) -> Result<Self> {
        let pts = self.points.iter().map(|p| m.iter().map(|row| dot(row, p)).collect()).collect();
        Self::normalized(pts)
    }

    /// One point per row, whitespace-separated.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for p in &self.points {
            out.push_str(&p.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(" "));
            out.push('\n');
        }
        out
    }

    /// Parse the point-list format; rows are normalized onto the sphere.
    pub fn from_text(text: &str) -> Result<Self> {
        let points = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| {
                l.split_whitespace()
                    .map(|t| t.parse::<f64>().map_err(|_| Error::Parse(format!("bad coordinate {t:?}"))))
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::normalized(points)
    }
}

/// `n`-dimensional code of `count` independent uniform random points.
pub fn random_code(n: usize, count: usize, seed: u64) -> Result<SphericalCode> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = (0..count)
        .map(|_| (0..n).map(|_| StandardNormal.sample(&mut rng)).collect())
        .collect();
    SphericalCode::normalized(pts)
}

/// Random orthogonal matrix (Gram–Schmidt on a Gaussian matrix).
pub fn random_rotation(n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n);
    while rows.len() < n {
        let mut v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        for q in &rows {
            let d = dot(&v, q);
            for (a, b) in v.iter_mut().zip(q) {
                *a -= d * b;
            }
        }
        let r = dot(&v, &v).sqrt();
        if r > 1e-8 {
            rows.push(v.into_iter().map(|x| x / r).collect());
        }
    }
    rows
}

/// Inner-product histogram: `A_t` = number of ordered pairs with `<x,y> = t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceDistribution {
    /// `(t, A_t)` sorted by `t`.
    pub entries: Vec<(f64, u64)>,
}

impl DistanceDistribution {
    pub fn total(&self) -> u64 {
        self.entries.iter().map(|e| e.1).sum()
    }

    /// Code size recovered from `sum A_t = N^2`.
    pub fn code_size(&self) -> f64 {
        (self.total() as f64).sqrt()
    }

    /// `A_t` of the entry nearest to `t`, if within `tol`.
    pub fn count_at(&self, t: f64, tol: f64) -> Option<u64> {
        self.entries.iter().find(|e| (e.0 - t).abs() <= tol).map(|e| e.1)
    }

    /// Inner products other than the self-pairs' `t = 1`.
    pub fn off_diagonal(&self, tol: f64) -> Vec<f64> {
        self.entries.iter().map(|e| e.0).filter(|t| *t < 1.0 - tol).collect()
    }
}

/// Cluster sorted values: consecutive values within `tol` merge to their mean.
fn cluster(mut values: Vec<(f64, u64)>, tol: f64) -> Vec<(f64, u64)> {
    values.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, u64)> = Vec::new();
    let mut sum = 0.0;
    let mut weight = 0u64;
    let mut last = f64::NEG_INFINITY;
    for (t, w) in values {
        if weight > 0 && t - last > tol {
            out.push((sum / weight as f64, weight));
            sum = 0.0;
            weight = 0;
        }
        sum += t * w as f64;
        weight += w;
        last = t;
    }
    if weight > 0 {
        out.push((sum / weight as f64, weight));
    }
    out
}

pub fn distance_distribution(code: &SphericalCode, tol: f64) -> Result<DistanceDistribution> {
    if !(tol > 0.0) {
        return Err(Error::Domain("clustering tolerance must be positive".into()));
    }
    let pts = &code.points;
    let n = pts.len();
    let rows: Vec<Vec<(f64, u64)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut row: Vec<(f64, u64)> = (i + 1..n).map(|j| (dot(&pts[i], &pts[j]), 2)).collect();
            row.push((dot(&pts[i], &pts[i]), 1));
            cluster(row, tol)
        })
        .collect();
    let all: Vec<(f64, u64)> = rows.into_iter().flatten().collect();
    Ok(DistanceDistribution {
        entries: cluster(all, tol),
    })
}

/// Pair energy `E_f = (1/2) sum_{x != y} f(|x-y|^2)`.
pub fn energy(code: &SphericalCode, f: &PotentialSpec) -> Result<f64> {
    let pts = &code.points;
    let n = pts.len();
    let rows: Vec<Result<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut s = 0.0;
            for j in i + 1..n {
                let d = sq_dist(&pts[i], &pts[j]);
                if !f.finite_at(d) {
                    return Err(Error::Domain(format!("points {i} and {j} coincide")));
                }
                s += f.value(d);
            }
            Ok(s)
        })
        .collect();
    let mut total = 0.0;
    for r in rows {
        total += r?;
    }
    Ok(total)
}

/// Energy from the histogram: `(1/2) sum_{t < 1} A_t f(2 - 2t)`.
pub fn energy_from_distribution(dist: &DistanceDistribution, f: &PotentialSpec, tol: f64) -> Result<f64> {
    let n = dist.code_size().round() as u64;
    let mut total = 0.0;
    for &(t, a) in &dist.entries {
        if t >= 1.0 - tol {
            if a > n {
                return Err(Error::Domain("distribution contains coincident points".into()));
            }
            continue;
        }
        total += a as f64 * f.value(2.0 - 2.0 * t);
    }
    Ok(total / 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinAngle {
    pub degrees: f64,
    pub max_inner_product: f64,
    /// Angle at least 60 degrees, so the points give a kissing configuration.
    pub kissing_valid: bool,
}

pub fn max_inner_product(code: &SphericalCode) -> Result<f64> {
    let pts = &code.points;
    let n = pts.len();
    if n < 2 {
        return Err(Error::Domain("minimal angle needs at least two points".into()));
    }
    let m = (0..n)
        .into_par_iter()
        .map(|i| (i + 1..n).map(|j| dot(&pts[i], &pts[j])).fold(f64::NEG_INFINITY, f64::max))
        .reduce(|| f64::NEG_INFINITY, f64::max);
    Ok(m.min(1.0))
}

pub fn min_angle(code: &SphericalCode) -> Result<MinAngle> {
    let m = max_inner_product(code)?;
    let degrees = m.clamp(-1.0, 1.0).acos().to_degrees();
    Ok(MinAngle {
        degrees,
        max_inner_product: m,
        kissing_valid: m <= 0.5 + 1e-12,
    })
}

/// `sum_{x,y} P^n_k(<x,y>)` for `k = 0..=k_max`, over all ordered pairs.
pub fn gegenbauer_moments(code: &SphericalCode, k_max: usize) -> Result<Vec<f64>> {
    let basis = GegenbauerBasis::new(code.dimension(), k_max)?;
    let pts = &code.points;
    let n = pts.len();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = vec![0.0; k_max + 1];
            let mut buf = vec![0.0; k_max + 1];
            for j in 0..n {
                let t = dot(&pts[i], &pts[j]).clamp(-1.0, 1.0);
                basis.eval_into(t, &mut buf);
                for (a, b) in acc.iter_mut().zip(&buf) {
                    *a += b;
                }
            }
            acc
        })
        .collect();
    let mut total = vec![0.0; k_max + 1];
    for r in rows {
        for (a, b) in total.iter_mut().zip(r) {
            *a += b;
        }
    }
    Ok(total)
}

/// Largest `k <= k_max` such that the Gegenbauer moments of degrees
/// `1..=k` all vanish (to `1e-9 N^2`): the code is a spherical `k`-design.
pub fn design_strength(code: &SphericalCode, k_max: usize) -> Result<usize> {
    if k_max > 20 {
        return Err(Error::Domain("design strength is checked up to degree 20".into()));
    }
    let moments = gegenbauer_moments(code, k_max)?;
    let n2 = (code.len() * code.len()) as f64;
    Ok(moments.iter().skip(1).take_while(|m| m.abs() <= 1e-9 * n2).count())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DelsarteEntry {
    pub k: usize,
    pub value: f64,
    pub nonnegative: bool,
}

/// `sum_t A_t P^n_k(t)` for `k = 0..=k_max`, flagged negative only below
/// `-1e-9 N^2`.
pub fn check_delsarte(dist: &DistanceDistribution, n: usize, k_max: usize) -> Result<Vec<DelsarteEntry>> {
    let basis = GegenbauerBasis::new(n, k_max)?;
    let mut sums = vec![0.0; k_max + 1];
    let mut buf = vec![0.0; k_max + 1];
    for &(t, a) in &dist.entries {
        basis.eval_into(t.clamp(-1.0, 1.0), &mut buf);
        for (s, p) in sums.iter_mut().zip(&buf) {
            *s += a as f64 * p;
        }
    }
    let n2 = dist.total() as f64;
    Ok(sums
        .into_iter()
        .enumerate()
        .map(|(k, value)| DelsarteEntry {
            k,
            value,
            nonnegative: value >= -1e-9 * n2,
        })
        .collect())
}
