//! Linear programming bounds for sphere packings in Euclidean space.
//!
//! Auxiliary functions are radial, `f(x) = sum_k c_k b_k(|x|)` over the
//! Fourier eigenbasis, so `\hat f = sum_k (-1)^k c_k b_k` exactly. With balls
//! of radius 1 (centers at distance at least 2) a function with `f <= 0` for
//! `|x| >= 2` and `\hat f >= 0` bounds the density by
//! `vol(B) f(0) / \hat f(0)`.

mod optimize;
mod poisson;
mod trivial;

pub use optimize::{optimize_density_bound, optimize_density_bound_with, DensityOptimizeSettings};
pub use poisson::{gaussian_theta, leech_theta, periodic_check, poisson_check, poisson_check_with, PeriodicCheckReport, PoissonCheckReport, PoissonInput};
pub use trivial::{ball_transform, lens_volume, trivial_bound, TrivialFunction};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattices::{best_known_lattice, packing_density};
use crate::orthopoly::RadialEigenbasis;
use crate::special::{binomial_real, unit_ball_volume};

/// Default sign-condition radius: unit balls, minimal distance 2.
pub const MIN_DISTANCE: f64 = 2.0;

/// A radial function with its Fourier transform.
pub trait RadialProfile: Sync {
    fn dimension(&self) -> usize;
    fn value(&self, r: f64) -> f64;
    fn transform(&self, r: f64) -> f64;
    /// Radius beyond which `f <= 0` and `\hat f >= 0` hold by an analytic
    /// argument rather than sampling, if one is known.
    fn tail_radius(&self) -> Option<f64>;
}

/// `f = sum_k c_k b_k` in the radial Fourier eigenbasis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialFunction {
    #[serde(rename = "n")]
    pub dimension: usize,
    pub coefficients: Vec<f64>,
    /// `f <= 0` is claimed for `|x| >= radius`; 2 unless a repair moved it.
    #[serde(default = "default_radius")]
    pub radius: f64,
}

fn default_radius() -> f64 {
    MIN_DISTANCE
}

impl RadialFunction {
    pub fn new(dimension: usize, coefficients: Vec<f64>) -> Result<Self> {
        if dimension < 1 {
            return Err(Error::Domain("radial functions need n >= 1".into()));
        }
        if coefficients.is_empty() || coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::Domain("radial function needs finite coefficients".into()));
        }
        Ok(Self {
            dimension,
            coefficients,
            radius: MIN_DISTANCE,
        })
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn basis(&self) -> RadialEigenbasis {
        RadialEigenbasis::new(self.dimension, self.degree()).expect("dimension checked at construction")
    }

    /// Coefficients of `\hat f`: `(-1)^k c_k`.
    pub fn transform_coefficients(&self) -> Vec<f64> {
        self.coefficients
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 0 { *c } else { -c })
            .collect()
    }

    pub fn transformed(&self) -> Self {
        Self {
            dimension: self.dimension,
            coefficients: self.transform_coefficients(),
            radius: self.radius,
        }
    }

    /// Monomial coefficients of the polynomial part `p(u)`, `u = |x|^2`, of
    /// `f` (or `\hat f`).
    pub fn polynomial(&self, transformed: bool) -> Vec<f64> {
        let alpha = self.dimension as f64 / 2.0 - 1.0;
        let d = self.degree();
        let mut out = vec![0.0; d + 1];
        for (k, c) in self.coefficients.iter().enumerate() {
            let c = if transformed && k % 2 == 1 { -c } else { *c };
            let mut scale = 1.0;
            for (j, o) in out.iter_mut().enumerate().take(k + 1) {
                if j > 0 {
                    scale *= -2.0 * PI / j as f64;
                }
                *o += c * binomial_real(k as f64 + alpha, k - j) * scale;
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Out<'a> {
            #[serde(flatten)]
            f: &'a RadialFunction,
            degree: usize,
            f0: f64,
            fhat0: f64,
        }
        serde_json::to_string_pretty(&Out {
            f: self,
            degree: self.degree(),
            f0: self.value(0.0),
            fhat0: self.transform(0.0),
        })
        .expect("radial function serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: Self = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let mut checked = Self::new(f.dimension, f.coefficients)?;
        checked.radius = f.radius;
        Ok(checked)
    }
}

impl RadialProfile for RadialFunction {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn value(&self, r: f64) -> f64 {
        self.basis().eval_series(&self.coefficients, r, false)
    }

    fn transform(&self, r: f64) -> f64 {
        self.basis().eval_series(&self.coefficients, r, true)
    }

    /// Past the largest real root of both polynomial parts, found from the
    /// dominant-term test `sum_{j<t} |a_j| u^{j-t} < |a_t|`.
    fn tail_radius(&self) -> Option<f64> {
        let u = polynomial_tail_start(&self.polynomial(false), -1.0)?
            .max(polynomial_tail_start(&self.polynomial(true), 1.0)?);
        Some(u.sqrt())
    }
}

/// Smallest `u >= 4` (searched geometrically) from which `sign * p(u) >= 0`
/// is guaranteed by dominance of the top nonzero term.
fn polynomial_tail_start(p: &[f64], sign: f64) -> Option<f64> {
    let scale = p.iter().fold(0.0f64, |a, c| a.max(c.abs()));
    if scale == 0.0 {
        return Some(4.0);
    }
    let top = p.iter().rposition(|c| *c != 0.0)?;
    if top == 0 {
        return if sign * p[0] >= 0.0 { Some(4.0) } else { None };
    }
    if sign * p[top] < 0.0 {
        return None;
    }
    let mut u: f64 = 4.0;
    while u < 1e8 {
        let rest: f64 = p[..top].iter().enumerate().map(|(j, a)| a.abs() * u.powi(j as i32 - top as i32)).sum();
        if rest < p[top].abs() {
            return Some(u);
        }
        u *= 1.1;
    }
    None
}

/// Outcome of checking an auxiliary function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityBoundReport {
    pub dimension: usize,
    /// `vol(B) (radius/2)^n f(0) / \hat f(0)`.
    pub bound: f64,
    pub f0: f64,
    pub fhat0: f64,
    /// Sign-condition radius used for `f`.
    pub radius: f64,
    /// Largest sampled `f(r)` on `[radius, r_max]` and where it occurs.
    pub worst_f: f64,
    pub worst_f_location: f64,
    /// Smallest sampled `\hat f(r)` on `[0, r_max]` and where it occurs.
    pub worst_fhat: f64,
    pub worst_fhat_location: f64,
    /// End of the sampled range; beyond it the signs follow from the tail test.
    pub r_max: f64,
    pub tail_certified: bool,
    pub grid_size: usize,
}

/// Minimum sampling grid for sign checks.
pub const MIN_CHECK_GRID: usize = 1000;

/// Check the sign conditions of `f` for radius `radius` and report the bound.
pub fn check_profile(f: &dyn RadialProfile, radius: f64, check_grid: usize) -> Result<DensityBoundReport> {
    use rayon::prelude::*;
    if check_grid < MIN_CHECK_GRID {
        return Err(Error::Domain(format!("check grid needs at least {MIN_CHECK_GRID} points")));
    }
    let n = f.dimension();
    let f0 = f.value(0.0);
    let fhat0 = f.transform(0.0);
    if !(fhat0 > 0.0) {
        return Err(Error::InvalidFunction {
            reason: "transform at 0 must be positive".into(),
            location: 0.0,
            value: fhat0,
        });
    }
    let tail = f.tail_radius();
    let r_max = tail.unwrap_or(radius + 10.0).max(radius + 1.0);
    let scale = f0.abs().max(fhat0.abs());
    let tol = 1e-12 * scale;

    let f_grid: Vec<f64> = (0..check_grid)
        .map(|i| radius + (r_max - radius) * i as f64 / (check_grid - 1) as f64)
        .collect();
    let (worst_f, worst_f_location) = f_grid
        .par_iter()
        .map(|&r| (f.value(r), r))
        .reduce(|| (f64::NEG_INFINITY, 0.0), |a, b| if b.0 > a.0 { b } else { a });
    if worst_f > tol {
        return Err(Error::InvalidFunction {
            reason: format!("f must be <= 0 for |x| >= {radius}"),
            location: worst_f_location,
            value: worst_f,
        });
    }
    let s_grid: Vec<f64> = (0..check_grid).map(|i| r_max * i as f64 / (check_grid - 1) as f64).collect();
    let (worst_fhat, worst_fhat_location) = s_grid
        .par_iter()
        .map(|&s| (f.transform(s), s))
        .reduce(|| (f64::INFINITY, 0.0), |a, b| if b.0 < a.0 { b } else { a });
    if worst_fhat < -tol {
        return Err(Error::InvalidFunction {
            reason: "transform must be >= 0".into(),
            location: worst_fhat_location,
            value: worst_fhat,
        });
    }
    Ok(DensityBoundReport {
        dimension: n,
        bound: unit_ball_volume(n) * (radius / 2.0).powi(n as i32) * f0 / fhat0,
        f0,
        fhat0,
        radius,
        worst_f,
        worst_f_location,
        worst_fhat,
        worst_fhat_location,
        r_max,
        tail_certified: tail.is_some(),
        grid_size: check_grid,
    })
}

/// Density bound from an eigenbasis auxiliary function.
pub fn density_bound(f: &RadialFunction, check_grid: usize) -> Result<DensityBoundReport> {
    let report = check_profile(f, f.radius, check_grid)?;
    if !report.tail_certified {
        return Err(Error::InvalidFunction {
            reason: "sign of the tail could not be certified".into(),
            location: report.r_max,
            value: f.value(report.r_max),
        });
    }
    Ok(report)
}

/// Taylor coefficients in `|x|^2` of `f` and `\hat f` after rescaling
/// `x -> lambda x` and dividing so that both equal 1 at the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaylorReport {
    pub dimension: usize,
    pub scale: f64,
    pub f_quadratic: f64,
    pub fhat_quadratic: f64,
    pub f_quartic: f64,
    pub fhat_quartic: f64,
}

pub fn taylor_report(f: &RadialFunction) -> Result<TaylorReport> {
    let basis = f.basis();
    let mut a = [0.0; 3];
    let mut b = [0.0; 3];
    for (k, c) in f.coefficients.iter().enumerate() {
        let t = basis.taylor(k, 2);
        let s = if k % 2 == 0 { 1.0 } else { -1.0 };
        for j in 0..3 {
            a[j] += c * t[j];
            b[j] += s * c * t[j];
        }
    }
    if !(a[0] > 0.0 && b[0] > 0.0) {
        return Err(Error::InvalidFunction {
            reason: "Taylor normalization needs f(0) > 0 and transform(0) > 0".into(),
            location: 0.0,
            value: a[0].min(b[0]),
        });
    }
    // g(x) = f(lambda x)/f(0) has transform lambda^{-n} \hat f(x/lambda)/f(0);
    // both are 1 at the origin when lambda^n = \hat f(0)/f(0).
    let lambda = (b[0] / a[0]).powf(1.0 / f.dimension as f64);
    let l2 = lambda * lambda;
    Ok(TaylorReport {
        dimension: f.dimension,
        scale: lambda,
        f_quadratic: a[1] * l2 / a[0],
        fhat_quadratic: b[1] / (b[0] * l2),
        f_quartic: a[2] * l2 * l2 / a[0],
        fhat_quartic: b[2] / (b[0] * l2 * l2),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityRow {
    pub n: usize,
    pub lp_bound: f64,
    pub best_known: f64,
    pub best_lattice: String,
    pub log10_bound: f64,
    pub log10_best: f64,
}

/// Optimized bound next to the best known lattice density for each `n`.
pub fn density_table(dims: &[usize], degree: usize, grid: usize) -> Result<Vec<DensityRow>> {
    dims.iter()
        .map(|&n| {
            let lattice = best_known_lattice(n)?;
            let best = packing_density(&lattice)?;
            let (_, report) = optimize_density_bound(n, degree, grid)?;
            Ok(DensityRow {
                n,
                lp_bound: report.bound,
                best_known: best,
                best_lattice: lattice.name().to_string(),
                log10_bound: report.bound.log10(),
                log10_best: best.log10(),
            })
        })
        .collect()
}

impl DensityRow {
    pub const CSV_HEADER: &'static str = "n,lp_bound,best_known,log10_bound,log10_best";

    pub fn to_csv(&self) -> String {
        format!(
            "{},{:.12e},{:.12e},{:.12},{:.12}",
            self.n, self.lp_bound, self.best_known, self.log10_bound, self.log10_best
        )
    }
}
