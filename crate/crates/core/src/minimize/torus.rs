use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::unit_ball_volume;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaturationSettings {
    pub seed: u64,
    /// Consecutive rejected random candidates before switching to the grid.
    pub patience: usize,
    /// Every point of the torus lies within this distance of a probe.
    pub probe_slack: f64,
}

impl Default for SaturationSettings {
    fn default() -> Self {
        Self {
            seed: 0,
            patience: 5000,
            probe_slack: 0.05,
        }
    }
}

/// Unit balls in `R^n / L Z^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorusPacking {
    pub dimension: usize,
    pub edge: f64,
    pub centers: Vec<Vec<f64>>,
    pub density: f64,
    /// `2^{-n}`, the bound any saturated packing meets.
    pub lower_bound: f64,
    /// Spacing of the probe grid that found no free center.
    pub probe_spacing: f64,
    /// No point of the torus is farther than `2 + probe_slack` from every center.
    pub probe_slack: f64,
    pub random_insertions: usize,
    pub grid_insertions: usize,
}

fn torus_sq_dist(a: &[f64], b: &[f64], edge: f64) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            // Coordinates lie in [0, edge).
            let d = (x - y).abs();
            let d = d.min(edge - d);
            d * d
        })
        .sum()
}

fn admissible(p: &[f64], centers: &[Vec<f64>], edge: f64) -> bool {
    centers.iter().all(|c| torus_sq_dist(p, c, edge) >= 4.0)
}

fn grid_points(n: usize, edge: f64, spacing: f64) -> (usize, impl Fn(usize) -> Vec<f64>) {
    let per_side = (edge / spacing).ceil() as usize;
    let step = edge / per_side as f64;
    let total = per_side.pow(n as u32);
    (total, move |mut i: usize| {
        (0..n)
            .map(|_| {
                let c = i % per_side;
                i /= per_side;
                c as f64 * step
            })
            .collect()
    })
}

/// Smallest distance from the probe grid of the given spacing to the nearest
/// center, maximised over probes: the largest free radius the grid sees.
pub fn probe_torus(p: &TorusPacking, spacing: f64) -> f64 {
    let (total, point) = grid_points(p.dimension, p.edge, spacing);
    (0..total)
        .map(|i| {
            let q = point(i);
            p.centers
                .iter()
                .map(|c| torus_sq_dist(&q, c, p.edge))
                .fold(f64::INFINITY, f64::min)
                .sqrt()
        })
        .fold(0.0, f64::max)
}

/// Random sequential insertion of unit balls into the flat torus of edge
/// `edge`, finished by a probe-grid pass that inserts at every free grid
/// point. The grid is fine enough that its covering radius is at most the
/// probe slack, so afterwards no ball can be added anywhere with more than
/// that slack to spare.
pub fn greedy_saturate_torus(n: usize, edge: f64, settings: &SaturationSettings) -> Result<TorusPacking> {
    if !(1..=3).contains(&n) {
        return Err(Error::Domain(format!("torus saturation supports 1 <= n <= 3, got {n}")));
    }
    if !(edge >= 6.0 && edge.is_finite()) {
        return Err(Error::Domain(format!("torus edge must be at least 6, got {edge}")));
    }
    if !(settings.probe_slack > 0.0) {
        return Err(Error::Domain("probe slack must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    let mut centers: Vec<Vec<f64>> = Vec::new();
    let mut misses = 0;
    while misses < settings.patience {
        let p: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..edge)).collect();
        if admissible(&p, &centers, edge) {
            centers.push(p);
            misses = 0;
        } else {
            misses += 1;
        }
    }
    let random_insertions = centers.len();

    // Covering radius of a cubic grid with spacing h is h sqrt(n) / 2.
    let spacing = (2.0 * settings.probe_slack / (n as f64).sqrt()).min(0.25);
    let (total, point) = grid_points(n, edge, spacing);
    for i in 0..total {
        let q = point(i);
        if admissible(&q, &centers, edge) {
            centers.push(q);
        }
    }
    let grid_insertions = centers.len() - random_insertions;
    let density = centers.len() as f64 * unit_ball_volume(n) / edge.powi(n as i32);
    Ok(TorusPacking {
        dimension: n,
        edge,
        centers,
        density,
        lower_bound: 0.5f64.powi(n as i32),
        probe_spacing: edge / (edge / spacing).ceil(),
        probe_slack: settings.probe_slack,
        random_insertions,
        grid_insertions,
    })
}

impl TorusPacking {
    /// Smallest periodic distance between two centers.
    pub fn min_distance(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.centers.len() {
            for j in i + 1..self.centers.len() {
                best = best.min(torus_sq_dist(&self.centers[i], &self.centers[j], self.edge));
            }
        }
        best.sqrt()
    }
}
