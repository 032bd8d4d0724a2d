use serde::{Deserialize, Serialize};

use super::{density_bound, DensityBoundReport, RadialFunction, RadialProfile, MIN_CHECK_GRID, MIN_DISTANCE};
use crate::error::{Error, Result};
use crate::lp::{solve, LinearProgram, LpStatus, Relation, Sense, SolverSettings};
use crate::orthopoly::RadialEigenbasis;
use crate::special::binomial_real;
use crate::sphere_lp::optimize::local_maxima;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityOptimizeSettings {
    pub max_rounds: usize,
    /// Refinement factor of the violation search grid relative to the LP grids.
    pub fine_factor: usize,
    /// Sign constraints are imposed as `-f >= margin` and `\hat f >= margin`
    /// after dividing each sample by the size of the basis there.
    pub margin: f64,
    pub check_grid: usize,
    pub lp: SolverSettings,
}

impl Default for DensityOptimizeSettings {
    fn default() -> Self {
        Self {
            max_rounds: 40,
            fine_factor: 10,
            margin: 1e-10,
            check_grid: 2 * MIN_CHECK_GRID,
            lp: SolverSettings {
                optimality_tol: 1e-12,
                feasibility_tol: 1e-12,
                ..SolverSettings::default()
            },
        }
    }
}

/// Basis `b_k / b_k(0)` restricted to the coefficients the LP may use.
struct ScaledBasis {
    basis: RadialEigenbasis,
    at_zero: Vec<f64>,
}

impl ScaledBasis {
    /// Polynomial parts at `u = r^2` divided by `b_k(0)`, then by their
    /// absolute sum, which is returned alongside.
    fn column(&self, r: f64) -> (Vec<f64>, f64) {
        let mut v = vec![0.0; self.at_zero.len()];
        self.basis.poly_into(r * r, &mut v);
        for (x, z) in v.iter_mut().zip(&self.at_zero) {
            *x /= z;
        }
        let size: f64 = v.iter().map(|x| x.abs()).sum();
        for x in v.iter_mut() {
            *x /= size;
        }
        (v, size)
    }

    /// `-f(r)` (or `\hat f(r)`) in the column normalisation.
    fn normalized(&self, x: &[f64], r: f64, transformed: bool) -> f64 {
        let (col, _) = self.column(r);
        let s: f64 = col
            .iter()
            .zip(x)
            .enumerate()
            .map(|(k, (b, c))| if transformed && k % 2 == 1 { -b * c } else { b * c })
            .sum();
        if transformed {
            s
        } else {
            -s
        }
    }
}

fn geometric(lo: f64, hi: f64, m: usize) -> Vec<f64> {
    (0..m).map(|i| lo * (hi / lo).powf(i as f64 / (m - 1) as f64)).collect()
}

fn uniform(lo: f64, hi: f64, m: usize) -> Vec<f64> {
    (0..m).map(|i| lo + (hi - lo) * i as f64 / (m - 1) as f64).collect()
}

/// Samples below `threshold` of `g` at the refined local minima over `fine`.
fn dips(g: &dyn Fn(f64) -> f64, fine: &[f64], threshold: f64) -> Vec<f64> {
    let neg = |t: f64| -g(t);
    local_maxima(&neg, fine)
        .into_iter()
        .filter(|(_, v)| -v < threshold)
        .map(|(t, _)| t)
        .collect()
}

/// Best auxiliary function of degree `d` in dimension `n` found by the
/// discretised LP on `m` points per sign condition.
///
/// Minimises `f(0)` with `\hat f(0) = 1`, `f(r_i) <= 0` for `r_i >= 2` and
/// `\hat f(s_j) >= 0`, adding the worst violations on a finer grid until
/// none remain. If sampling still finds `\hat f < 0` the constant-term
/// coefficient is raised, and if `f > 0` somewhere past 2 the sign radius is
/// moved past the last such point; either change weakens the bound.
pub fn optimize_density_bound(n: usize, d: usize, m: usize) -> Result<(RadialFunction, DensityBoundReport)> {
    optimize_density_bound_with(n, d, m, &DensityOptimizeSettings::default())
}

pub fn optimize_density_bound_with(
    n: usize,
    d: usize,
    m: usize,
    settings: &DensityOptimizeSettings,
) -> Result<(RadialFunction, DensityBoundReport)> {
    if n < 1 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    if !(1..=60).contains(&d) {
        return Err(Error::Domain(format!("degree {d} outside 1..=60")));
    }
    if m < 10 * d {
        return Err(Error::Domain(format!("grid of {m} points is below 10 x degree")));
    }
    // Both f <= 0 and \hat f >= 0 at infinity constrain the top coefficient:
    // it must be >= 0, and for even degree also <= 0.
    let top = if d % 2 == 1 { d } else { d - 1 };
    let alpha = n as f64 / 2.0 - 1.0;
    let scaled = ScaledBasis {
        basis: RadialEigenbasis::new(n, top)?,
        at_zero: (0..=top).map(|k| binomial_real(k as f64 + alpha, k)).collect(),
    };
    let reach = ((4 * top) as f64 + 2.0 * alpha + 2.0) / (2.0 * std::f64::consts::PI);
    let r_lp = (reach.sqrt() + 1.5).max(4.0);
    // Samples well past the last Laguerre root pin down the signs at infinity.
    let r_far = 2.5 * r_lp;
    let f_grid = geometric(MIN_DISTANCE, r_far, m);
    let s_grid = geometric(0.05, r_far, m);
    let fine_m = settings.fine_factor.max(1) * m;
    let far = geometric(r_lp, r_far, fine_m / 10 + 2);
    let f_fine: Vec<f64> = uniform(MIN_DISTANCE, r_lp, fine_m).into_iter().chain(far.iter().skip(1).copied()).collect();
    let s_fine: Vec<f64> = uniform(0.0, r_lp, fine_m).into_iter().chain(far.iter().skip(1).copied()).collect();
    let mu = settings.margin;

    // A sample at infinity forces the top coefficient above `top_margin`; it is
    // raised until the tail sign can be certified.
    let mut last = None;
    for top_margin in [mu, 1e-9, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2] {
        let mut lp_f_grid = f_grid.clone();
        let mut lp_s_grid = s_grid.clone();
        let mut x: Vec<f64> = Vec::new();
        for _ in 0..settings.max_rounds.max(1) {
            let next = solve_scaled(&scaled, &lp_f_grid, &lp_s_grid, top, mu, top_margin, &settings.lp)?;
            if next == x {
                break;
            }
            x = next;
            let gf = |r: f64| scaled.normalized(&x, r, false);
            let gh = |s: f64| scaled.normalized(&x, s, true);
            let f_dips = dips(&gf, &f_fine, mu / 2.0);
            let s_dips = dips(&gh, &s_fine, mu / 2.0);
            if f_dips.is_empty() && s_dips.is_empty() {
                break;
            }
            lp_f_grid.extend(f_dips);
            lp_s_grid.extend(s_dips);
        }
        let mut coefficients: Vec<f64> = x.iter().zip(&scaled.at_zero).map(|(c, z)| c / z).collect();
        coefficients.resize(d + 1, 0.0);
        let f = RadialFunction::new(n, coefficients)?;
        let certified = f
            .tail_radius()
            .is_some_and(|r| r <= 2.0 * r_far && far_signs_ok(&f, r_lp, r, fine_m));
        last = Some(f);
        if certified {
            break;
        }
    }
    let mut f = last.expect("at least one margin tried");
    repair(&mut f, r_lp, fine_m)?;
    let report = density_bound(&f, settings.check_grid)?;
    Ok((f, report))
}

/// Dual of the bound LP: a weight per sample, one row per coefficient, so the
/// basis stays small however many samples are added. Row sensitivities are
/// the coefficients in the scaled basis.
fn solve_scaled(
    scaled: &ScaledBasis,
    f_grid: &[f64],
    s_grid: &[f64],
    top: usize,
    mu: f64,
    top_margin: f64,
    settings: &SolverSettings,
) -> Result<Vec<f64>> {
    let cols: Vec<Vec<f64>> = f_grid
        .iter()
        .map(|&r| scaled.column(r).0.into_iter().map(|v| -v).collect())
        .chain(s_grid.iter().map(|&s| {
            let (mut c, _) = scaled.column(s);
            for (k, v) in c.iter_mut().enumerate() {
                if k % 2 == 1 {
                    *v = -*v;
                }
            }
            c
        }))
        .collect();
    let mut infinity = vec![0.0; top + 1];
    infinity[top] = 1.0;
    let cols: Vec<Vec<f64>> = cols.into_iter().chain(std::iter::once(infinity)).collect();
    let w = cols.len();
    let mut lp = LinearProgram::new(w + 1, Sense::Maximize);
    let mut obj = vec![mu; w];
    obj[w - 1] = top_margin;
    obj.push(1.0);
    lp.set_objective(obj);
    lp.set_free(w);
    for k in 0..=top {
        let mut row: Vec<f64> = cols.iter().map(|c| c[k]).collect();
        row.push(if k % 2 == 0 { 1.0 } else { -1.0 });
        let rel = if k == top { Relation::Le } else { Relation::Eq };
        lp.add_constraint(row, rel, 1.0);
    }
    let sol = solve(&lp, settings)?;
    match sol.status {
        LpStatus::Optimal => Ok(sol.duals),
        LpStatus::Infeasible => Err(Error::Lp("density LP is unbounded".into())),
        LpStatus::Unbounded => Err(Error::Lp("density LP is infeasible".into())),
        LpStatus::IterationLimit => Err(Error::Resource {
            what: "LP iteration limit".into(),
            partial: false,
        }),
    }
}

/// Signs of both polynomial parts on a geometric grid over `[from, to]`.
fn far_signs_ok(f: &RadialFunction, from: f64, to: f64, m: usize) -> bool {
    if to <= from {
        return true;
    }
    let basis = f.basis();
    geometric(from, to, m).into_iter().all(|r| {
        basis.poly_series(&f.coefficients, r * r, false) <= 0.0 && basis.poly_series(&f.coefficients, r * r, true) >= 0.0
    })
}

/// Remove sampled sign violations left by round-off.
fn repair(f: &mut RadialFunction, r_lp: f64, fine_m: usize) -> Result<()> {
    let tail = |f: &RadialFunction| {
        f.tail_radius().ok_or_else(|| Error::InvalidFunction {
            reason: "optimised function has no certifiable tail; try another degree".into(),
            location: r_lp,
            value: f.coefficients[f.degree()],
        })
    };
    let r_max = r_lp.max(tail(f)?);
    let basis = f.basis();

    // The polynomial part carries the sign; raising c_0 raises it uniformly.
    let s_fine = uniform(0.0, r_max, fine_m);
    let q = |s: f64| basis.poly_series(&f.coefficients, s * s, true);
    let low = local_maxima(&|s| -q(s), &s_fine).into_iter().map(|(_, v)| -v).fold(f64::INFINITY, f64::min);
    if low < 0.0 {
        f.coefficients[0] -= low * (1.0 + 1e-12);
    }

    let r_max = r_lp.max(tail(f)?);
    let f_fine = uniform(MIN_DISTANCE, r_max, fine_m);
    let p = |r: f64| basis.poly_series(&f.coefficients, r * r, false);
    let positive = local_maxima(&p, &f_fine)
        .into_iter()
        .filter(|(_, v)| *v > 0.0)
        .map(|(r, _)| r)
        .fold(f64::NEG_INFINITY, f64::max);
    if positive.is_finite() {
        // Walk right to a sample where p <= 0, then bisect for the root.
        let mut lo = positive;
        let mut hi = f_fine.iter().copied().find(|&r| r > lo && p(r) <= 0.0).unwrap_or(r_max);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if p(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        f.radius = hi.max(MIN_DISTANCE);
    }
    Ok(())
}
