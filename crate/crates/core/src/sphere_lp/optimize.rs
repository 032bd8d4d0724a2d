use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{CertificateContext, SphereCertificate};
use crate::codes::PotentialSpec;
use crate::error::{Error, Result};
use crate::lp::{solve, LinearProgram, LpStatus, Relation, Sense, SolverSettings};
use crate::orthopoly::GegenbauerBasis;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizeSettings {
    /// Rounds of adding violated points and re-solving.
    pub max_rounds: usize,
    /// Refinement factor of the checking grid relative to the LP grid.
    pub fine_factor: usize,
    pub lp: SolverSettings,
}

impl Default for OptimizeSettings {
    fn default() -> Self {
        Self {
            max_rounds: 40,
            fine_factor: 10,
            // Reduced costs of the dual LP are the slacks f - h on the grid.
            lp: SolverSettings {
                optimality_tol: 1e-12,
                feasibility_tol: 1e-12,
                ..SolverSettings::default()
            },
        }
    }
}

/// `m` Chebyshev extreme points of `[lo, hi]`, ascending, endpoints included.
pub(crate) fn chebyshev_points(lo: f64, hi: f64, m: usize) -> Vec<f64> {
    if m == 1 {
        return vec![lo];
    }
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut pts: Vec<f64> = (0..m)
        .map(|i| mid - half * (PI * i as f64 / (m - 1) as f64).cos())
        .collect();
    pts[0] = lo;
    pts[m - 1] = hi;
    pts
}

/// Golden-section maximisation of `g` on `[a, b]`.
pub(crate) fn golden_max(g: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..80 {
        if (b - a).abs() < 1e-15 * (1.0 + a.abs()) {
            break;
        }
        if gc > gd {
            b = d;
            d = c;
            gd = gc;
            c = b - r * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + r * (b - a);
            gd = g(d);
        }
    }
    if gc > gd {
        (c, gc)
    } else {
        (d, gd)
    }
}

/// Refined local maxima of `v` over the sorted grid, as `(t, v(t))`.
pub(crate) fn local_maxima(v: &dyn Fn(f64) -> f64, grid: &[f64]) -> Vec<(f64, f64)> {
    let vals: Vec<f64> = grid.iter().map(|&t| v(t)).collect();
    let m = grid.len();
    let mut out = Vec::new();
    for i in 0..m {
        let left = if i > 0 { vals[i - 1] } else { f64::NEG_INFINITY };
        let right = if i + 1 < m { vals[i + 1] } else { f64::NEG_INFINITY };
        if vals[i] >= left && vals[i] >= right {
            let a = if i > 0 { grid[i - 1] } else { grid[i] };
            let b = if i + 1 < m { grid[i + 1] } else { grid[i] };
            let (t, val) = if b > a { golden_max(v, a, b) } else { (grid[i], vals[i]) };
            // Keep whichever of the sample and the refinement is larger.
            out.push(if val >= vals[i] { (t, val) } else { (grid[i], vals[i]) });
        }
    }
    out
}

/// Solve the dual LP built on `grid` and read the certificate off its
/// sensitivities.
fn certificate_values(
    lp: &LinearProgram,
    settings: &SolverSettings,
    extract: &dyn Fn(&[f64]) -> Vec<f64>,
) -> Result<Vec<f64>> {
    let sol = solve(lp, settings)?;
    match sol.status {
        LpStatus::Optimal => Ok(extract(&sol.duals)),
        LpStatus::Infeasible => Err(Error::Lp("bound LP is unbounded".into())),
        LpStatus::Unbounded => Err(Error::Lp("bound LP is infeasible (degree too low for this angle?)".into())),
        LpStatus::IterationLimit => Err(Error::Resource {
            what: "LP iteration limit".into(),
            partial: false,
        }),
    }
}

/// Solve on `grid`, add the worst violations of `h <= upper` found on
/// `fine`, and repeat until none remain.
///
/// The LP solved is the dual one: a weight per grid point and a row per
/// coefficient, so the basis stays `(d+1) x (d+1)` however many points are
/// added.
fn cutting_planes(
    basis: &GegenbauerBasis,
    mut grid: Vec<f64>,
    fine: &[f64],
    upper: &dyn Fn(f64) -> f64,
    make_lp: &dyn Fn(&[f64]) -> LinearProgram,
    extract: &dyn Fn(&[f64]) -> Vec<f64>,
    settings: &OptimizeSettings,
) -> Result<Vec<f64>> {
    let mut h: Vec<f64> = Vec::new();
    for _ in 0..settings.max_rounds.max(1) {
        let next = match certificate_values(&make_lp(&grid), &settings.lp, extract) {
            Ok(next) => next,
            // Clustered cut points can leave the LP too ill-conditioned to
            // finish; the previous round's certificate is still usable.
            Err(Error::Resource { .. } | Error::Lp(_)) if !h.is_empty() => break,
            Err(e) => return Err(e),
        };
        if next == h {
            break;
        }
        h = next;
        let scale = 1.0 + h.iter().map(|c| c.abs()).sum::<f64>();
        let viol = |t: f64| basis.eval_series(&h, t) - upper(t);
        let peaks: Vec<f64> = local_maxima(&viol, fine)
            .into_iter()
            .filter(|(_, v)| *v > 1e-12 * scale)
            .map(|(t, _)| t)
            // Near-duplicate samples make the LP basis nearly singular.
            .filter(|t| grid.iter().all(|g| (g - t).abs() > 1e-9))
            .collect();
        if peaks.is_empty() {
            break;
        }
        grid.extend(peaks);
    }
    Ok(h)
}

fn worst_violation(basis: &GegenbauerBasis, h: &[f64], fine: &[f64], upper: &dyn Fn(f64) -> f64) -> f64 {
    let viol = |t: f64| basis.eval_series(h, t) - upper(t);
    local_maxima(&viol, fine).into_iter().map(|(_, v)| v).fold(f64::NEG_INFINITY, f64::max)
}

fn check_sizes(d: usize, m: usize) -> Result<()> {
    if d > 60 {
        return Err(Error::Domain(format!("degree {d} exceeds 60")));
    }
    if m < 10 * d.max(1) {
        return Err(Error::Domain(format!("grid of {m} points is below 10 x degree")));
    }
    Ok(())
}

/// Best energy certificate of degree `d` for `N` points found by the
/// discretised LP on `m` Chebyshev points of `[-1, 1)`.
///
/// Maximises `N^2 h_0 - N sum_k h_k` subject to `h_k >= 0` (`k >= 1`) and
/// `h(t_i) <= f(2 - 2t_i)`. Afterwards negative round-off in `h_k` is
/// clamped and `h_0` is lowered by the worst violation on a finer grid.
pub fn optimize_energy_bound(
    n: usize,
    count: usize,
    f: &PotentialSpec,
    d: usize,
    m: usize,
) -> Result<SphereCertificate> {
    optimize_energy_bound_with(n, count, f, d, m, &OptimizeSettings::default())
}

pub fn optimize_energy_bound_with(
    n: usize,
    count: usize,
    f: &PotentialSpec,
    d: usize,
    m: usize,
    settings: &OptimizeSettings,
) -> Result<SphereCertificate> {
    check_sizes(d, m)?;
    if count < 1 {
        return Err(Error::Domain("need at least one point".into()));
    }
    let basis = GegenbauerBasis::new(n, d)?;
    let upper = |t: f64| f.value(2.0 - 2.0 * t);
    // Chebyshev points of [-1, 1] with t = 1 dropped.
    let lp_grid = |size: usize| {
        let mut g = chebyshev_points(-1.0, 1.0, size + 1);
        g.pop();
        g
    };
    let grid = lp_grid(m);
    let fine = lp_grid(settings.fine_factor.max(1) * m);
    let nf = count as f64;
    // Dual: minimise sum_i f(2-2t_i) w_i over w >= 0 with sum_i w_i = 1 - 1/N
    // and sum_i w_i P_k(t_i) >= -1/N; the row sensitivities are h_k.
    let make_lp = |grid: &[f64]| {
        let mut lp = LinearProgram::new(grid.len(), Sense::Minimize);
        lp.set_objective(grid.iter().map(|&t| upper(t)).collect());
        let values: Vec<Vec<f64>> = grid.iter().map(|&t| basis.eval_all(t)).collect();
        for k in 0..=d {
            let row = values.iter().map(|p| p[k]).collect();
            if k == 0 {
                lp.add_constraint(row, Relation::Eq, 1.0 - 1.0 / nf);
            } else {
                lp.add_constraint(row, Relation::Ge, -1.0 / nf);
            }
        }
        lp
    };
    let extract = |duals: &[f64]| duals.to_vec();
    let mut h = cutting_planes(&basis, grid, &fine, &upper, &make_lp, &extract, settings)?;
    for c in h.iter_mut().skip(1) {
        *c = c.max(0.0);
    }
    let v = worst_violation(&basis, &h, &fine, &upper);
    if v > 0.0 {
        h[0] -= v;
    }
    SphereCertificate::new(n, CertificateContext::Energy { potential: f.clone() }, h)
}

/// Best code-size certificate of degree `d` for minimal angle `theta`, by the
/// discretised LP on `m` Chebyshev points of `[-1, cos theta]`.
///
/// Minimises `h(1)` with `h_0 = 1`, `h_k >= 0`, `h(t_i) <= 0`. The returned
/// certificate has `h_0` lowered by any remaining violation, so its bound is
/// `(h(1) - v)/(1 - v)`.
pub fn optimize_code_bound(n: usize, cos_theta: f64, d: usize, m: usize) -> Result<SphereCertificate> {
    optimize_code_bound_with(n, cos_theta, d, m, &OptimizeSettings::default())
}

pub fn optimize_code_bound_with(
    n: usize,
    cos_theta: f64,
    d: usize,
    m: usize,
    settings: &OptimizeSettings,
) -> Result<SphereCertificate> {
    check_sizes(d, m)?;
    if !(-1.0..1.0).contains(&cos_theta) {
        return Err(Error::Domain(format!("cos theta = {cos_theta} outside [-1, 1)")));
    }
    let basis = GegenbauerBasis::new(n, d)?;
    let upper = |_t: f64| 0.0;
    let grid = chebyshev_points(-1.0, cos_theta, m);
    let fine = chebyshev_points(-1.0, cos_theta, settings.fine_factor.max(1) * m);
    // Dual: maximise sum_i w_i over w >= 0 with -sum_i w_i P_k(t_i) <= 1 for
    // k >= 1; the row sensitivities are h_1..h_d.
    let make_lp = |grid: &[f64]| {
        let mut lp = LinearProgram::new(grid.len(), Sense::Maximize);
        lp.set_objective(vec![1.0; grid.len()]);
        let values: Vec<Vec<f64>> = grid.iter().map(|&t| basis.eval_all(t)).collect();
        for k in 1..=d {
            lp.add_constraint(values.iter().map(|p| -p[k]).collect(), Relation::Le, 1.0);
        }
        lp
    };
    let extract = |duals: &[f64]| {
        let mut h = vec![1.0];
        h.extend_from_slice(duals);
        h
    };
    let mut h = cutting_planes(&basis, grid, &fine, &upper, &make_lp, &extract, settings)?;
    for c in h.iter_mut() {
        *c = c.max(0.0);
    }
    let v = worst_violation(&basis, &h, &fine, &upper);
    if v > 0.0 {
        h[0] -= v;
    }
    if !(h[0] > 0.0) {
        return Err(Error::Lp("repaired certificate lost h_0 > 0".into()));
    }
    SphereCertificate::new(n, CertificateContext::Code { cos_theta }, h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chebyshev_endpoints() {
        let p = chebyshev_points(-1.0, 0.5, 5);
        assert_eq!(p[0], -1.0);
        assert_eq!(p[4], 0.5);
        assert!(p.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn golden_section_finds_peak() {
        let (t, v) = golden_max(&|x: f64| -(x - 0.3) * (x - 0.3), 0.0, 1.0);
        assert!((t - 0.3).abs() < 1e-7);
        assert!(v <= 0.0);
    }
}
