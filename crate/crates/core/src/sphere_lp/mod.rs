//! Linear programming bounds on spheres: energy bounds `N^2 h_0 - N h(1)`
//! for auxiliary functions `h <= f(2 - 2t)`, and code-size bounds
//! `h(1)/h_0` for `h <= 0` on `[-1, cos theta]`.

mod hermite;
pub(crate) mod optimize;

pub use hermite::{hermite_certificate, tangent_line_certificate};
pub use optimize::{
    optimize_code_bound, optimize_code_bound_with, optimize_energy_bound, optimize_energy_bound_with, OptimizeSettings,
};

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::codes::{distance_distribution, gegenbauer_moments, PotentialSpec, SphericalCode, DEFAULT_CLUSTER_TOL};
use crate::error::{Error, Result};
use crate::exact::{
    certify_nonpositive, format_rational, poly_from_roots, rat, rat_int, rational_from_f64, rational_to_f64,
    rational_strings, RatPoly,
};
use crate::orthopoly::{gegenbauer_expand_exact, gegenbauer_monomials, GegenbauerBasis};

/// Minimum verification grid size.
pub const MIN_GRID: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CertificateContext {
    /// `h(t) <= f(2 - 2t)` on `[-1, 1)`.
    Energy { potential: PotentialSpec },
    /// `h(t) <= 0` on `[-1, cos_theta]`.
    Code { cos_theta: f64 },
}

/// Auxiliary function `h = sum_k h_k P^n_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereCertificate {
    #[serde(rename = "n")]
    pub dimension: usize,
    pub context: CertificateContext,
    #[serde(rename = "h")]
    pub coefficients: Vec<f64>,
    /// Exact coefficients, when known.
    #[serde(rename = "h_exact", with = "rational_strings", default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<Vec<BigRational>>,
}

impl SphereCertificate {
    pub fn new(dimension: usize, context: CertificateContext, coefficients: Vec<f64>) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::Domain(format!("sphere certificates need n >= 2, got {dimension}")));
        }
        if coefficients.is_empty() || coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::Domain("certificate needs finite coefficients".into()));
        }
        Ok(Self {
            dimension,
            context,
            coefficients,
            exact: None,
        })
    }

    pub fn from_exact(dimension: usize, context: CertificateContext, exact: Vec<BigRational>) -> Result<Self> {
        let mut c = Self::new(dimension, context, exact.iter().map(rational_to_f64).collect())?;
        c.exact = Some(exact);
        Ok(c)
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn basis(&self) -> GegenbauerBasis {
        GegenbauerBasis::new(self.dimension, self.degree()).expect("dimension checked at construction")
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.basis().eval_series(&self.coefficients, t)
    }

    pub fn h0(&self) -> f64 {
        self.coefficients[0]
    }

    /// `h(1) = sum_k h_k`.
    pub fn h_at_one(&self) -> f64 {
        self.coefficients.iter().sum()
    }

    /// `max_{[-1,1]} |h'|` when `h_k >= 0` for `k >= 1`: `h'(1)`.
    pub fn derivative_bound(&self) -> f64 {
        let b = self.basis();
        self.coefficients
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.abs() * b.derivative_at_one(k))
            .sum()
    }

    /// Per-coefficient flags `h_k >= 0`.
    pub fn nonnegative_flags(&self) -> Vec<bool> {
        self.coefficients.iter().map(|c| *c >= 0.0).collect()
    }

    /// Monomial coefficients of `h`, exactly.
    pub fn exact_monomials(&self) -> Option<RatPoly> {
        let h = self.exact.as_ref()?;
        let basis = gegenbauer_monomials::<BigRational>(self.dimension, h.len() - 1);
        let mut out = vec![BigRational::zero(); h.len()];
        for (hk, pk) in h.iter().zip(&basis) {
            for (o, c) in out.iter_mut().zip(pk) {
                *o += hk * c;
            }
        }
        Some(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(c.dimension, c.context.clone(), c.coefficients.clone())?;
        Ok(c)
    }
}

/// Outcome of verifying a certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    /// Energy lower bound (half-sum over ordered pairs) or code-size upper bound.
    pub bound: f64,
    /// The bound as an exact rational, when the certificate is exact.
    pub exact_bound: Option<String>,
    /// Energy context: `N^2 h_0 - N h(1)`, the bound on the full ordered-pair sum.
    pub pair_sum_bound: Option<f64>,
    /// Smallest sampled value of `f(2-2t) - h(t)` (energy) or `-h(t)` (code).
    pub worst_margin: f64,
    pub worst_location: f64,
    /// `worst_margin` minus a derivative bound times the half grid spacing.
    pub rigorous_margin: f64,
    /// Sign condition proved: exactly, or by a nonnegative rigorous margin.
    pub rigorous: bool,
    /// Sign condition certified in exact rational arithmetic.
    pub exact_certified: bool,
    pub h0: f64,
    pub h_at_one: f64,
    /// Smallest `h_k` over `k >= 1`.
    pub min_coefficient: f64,
    pub grid_size: usize,
    pub sharpness: Option<SharpnessFlags>,
}

fn check_coefficients(h: &SphereCertificate, code_context: bool) -> Result<f64> {
    let min = h.coefficients.iter().skip(1).copied().fold(f64::INFINITY, f64::min);
    if let Some((k, c)) = h.coefficients.iter().enumerate().skip(1).find(|(_, c)| **c < 0.0) {
        return Err(Error::InvalidCertificate {
            reason: format!("coefficient h_{k} is negative"),
            location: k as f64,
            value: *c,
        });
    }
    if code_context && !(h.h0() > 0.0) {
        return Err(Error::InvalidCertificate {
            reason: "h_0 must be positive".into(),
            location: 0.0,
            value: h.h0(),
        });
    }
    Ok(if min.is_finite() { min } else { 0.0 })
}

/// Sampled minimum of `margin(t)` over `grid`.
fn worst_over(grid: &[f64], margin: impl Fn(f64) -> f64 + Sync) -> (f64, f64) {
    use rayon::prelude::*;
    grid.par_iter()
        .map(|&t| (margin(t), t))
        .reduce(|| (f64::INFINITY, 0.0), |a, b| if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a })
}

/// Verify `h(t) <= f(2-2t)` on `[-1, 1)` and report the energy bound for
/// `N`-point codes: `(N^2 h_0 - N h(1))/2` as a half-sum over ordered pairs.
pub fn verify_energy_certificate(
    h: &SphereCertificate,
    f: &PotentialSpec,
    count: usize,
    grid_size: usize,
) -> Result<BoundReport> {
    if grid_size < MIN_GRID {
        return Err(Error::Domain(format!("verification grid needs at least {MIN_GRID} points")));
    }
    let min_coefficient = check_coefficients(h, false)?;
    let basis = h.basis();
    let coeffs = &h.coefficients;
    let grid: Vec<f64> = (0..grid_size).map(|i| -1.0 + 2.0 * i as f64 / grid_size as f64).collect();
    let (worst, at) = worst_over(&grid, |t| f.value(2.0 - 2.0 * t) - basis.eval_series(coeffs, t));
    let scale = 1.0 + coeffs.iter().map(|c| c.abs()).sum::<f64>();
    if worst < -1e-9 * scale {
        return Err(Error::InvalidCertificate {
            reason: "h(t) exceeds f(2-2t)".into(),
            location: at,
            value: worst,
        });
    }
    let spacing = 2.0 / grid_size as f64;
    let mut slope = h.derivative_bound();
    if !f.decreasing {
        slope += grid.iter().map(|&t| 2.0 * f.derivative(2.0 - 2.0 * t, 1).abs()).fold(0.0, f64::max);
    }
    // Between samples: F(t) = f(2-2t) is nondecreasing for decreasing f, so
    // only h can climb, by at most its derivative bound times the spacing.
    let rigorous_margin = worst - spacing * slope;
    let n = count as f64;
    let pair = n * n * h.h0() - n * h.h_at_one();
    Ok(BoundReport {
        bound: pair / 2.0,
        exact_bound: None,
        pair_sum_bound: Some(pair),
        worst_margin: worst,
        worst_location: at,
        rigorous_margin,
        rigorous: rigorous_margin >= 0.0,
        exact_certified: false,
        h0: h.h0(),
        h_at_one: h.h_at_one(),
        min_coefficient,
        grid_size,
        sharpness: None,
    })
}

/// Verify `h(t) <= 0` on `[-1, cos_theta]` and report `h(1)/h_0`. Exact
/// certificates are additionally certified with Sturm sequences.
pub fn verify_code_certificate(h: &SphereCertificate, cos_theta: f64, grid_size: usize) -> Result<BoundReport> {
    if grid_size < MIN_GRID {
        return Err(Error::Domain(format!("verification grid needs at least {MIN_GRID} points")));
    }
    if !(-1.0..1.0).contains(&cos_theta) {
        return Err(Error::Domain(format!("cos theta = {cos_theta} outside [-1, 1)")));
    }
    let min_coefficient = check_coefficients(h, true)?;
    let basis = h.basis();
    let coeffs = &h.coefficients;
    let width = cos_theta + 1.0;
    let grid: Vec<f64> = (0..grid_size)
        .map(|i| -1.0 + width * i as f64 / (grid_size - 1) as f64)
        .collect();
    let (worst, at) = worst_over(&grid, |t| -basis.eval_series(coeffs, t));
    let scale = coeffs.iter().map(|c| c.abs()).sum::<f64>();

    let mut exact_certified = false;
    let mut exact_bound = None;
    if let (Some(p), Some(hx)) = (h.exact_monomials(), h.exact.as_ref()) {
        if hx.iter().skip(1).any(|c| c.is_negative()) || !hx[0].is_positive() {
            return Err(Error::InvalidCertificate {
                reason: "exact coefficients fail the sign conditions".into(),
                location: 0.0,
                value: rational_to_f64(&hx[0]),
            });
        }
        match certify_nonpositive(&p, &rat_int(-1), &rational_from_f64(cos_theta)) {
            Ok(()) => exact_certified = true,
            Err(t) => {
                let tf = rational_to_f64(&t);
                return Err(Error::InvalidCertificate {
                    reason: "h(t) is positive (exact check)".into(),
                    location: tf,
                    value: basis.eval_series(coeffs, tf),
                });
            }
        }
        let sum: BigRational = hx.iter().sum();
        exact_bound = Some(format_rational(&(sum / &hx[0])));
    }
    if !exact_certified && worst < -1e-9 * scale {
        return Err(Error::InvalidCertificate {
            reason: "h(t) is positive".into(),
            location: at,
            value: -worst,
        });
    }
    let spacing = width / (grid_size - 1) as f64;
    let rigorous_margin = worst - 0.5 * spacing * h.derivative_bound();
    Ok(BoundReport {
        bound: h.h_at_one() / h.h0(),
        exact_bound,
        pair_sum_bound: None,
        worst_margin: worst,
        worst_location: at,
        rigorous_margin,
        rigorous: exact_certified || rigorous_margin >= 0.0,
        exact_certified,
        h0: h.h0(),
        h_at_one: h.h_at_one(),
        min_coefficient,
        grid_size,
        sharpness: None,
    })
}

/// Verify against the certificate's own context.
pub fn verify_certificate(h: &SphereCertificate, count: Option<usize>, grid_size: usize) -> Result<BoundReport> {
    match &h.context {
        CertificateContext::Energy { potential } => {
            let count = count.ok_or_else(|| Error::Domain("energy certificates need a code size".into()))?;
            verify_energy_certificate(h, potential, count, grid_size)
        }
        CertificateContext::Code { cos_theta } => verify_code_certificate(h, *cos_theta, grid_size),
    }
}

/// Roots (with multiplicity) of the built-in kissing certificates.
fn kissing_roots(n: usize) -> Result<Vec<(BigRational, u32)>> {
    match n {
        8 => Ok(vec![(rat(-1, 1), 1), (rat(-1, 2), 2), (rat(0, 1), 2), (rat(1, 2), 1)]),
        24 => Ok(vec![
            (rat(-1, 1), 1),
            (rat(-1, 2), 2),
            (rat(-1, 4), 2),
            (rat(0, 1), 2),
            (rat(1, 4), 2),
            (rat(1, 2), 1),
        ]),
        _ => Err(Error::Capability(format!("no built-in kissing certificate for n = {n} (only 8 and 24)"))),
    }
}

/// Exact kissing-number certificate in dimension 8 or 24, with
/// `cos theta = 1/2`.
pub fn kissing_certificate(n: usize) -> Result<SphereCertificate> {
    let poly = poly_from_roots(&kissing_roots(n)?);
    let h = gegenbauer_expand_exact(n, &poly)?;
    SphereCertificate::from_exact(n, CertificateContext::Code { cos_theta: 0.5 }, h)
}

/// Conditions under which a certificate's bound is attained by a code.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpnessFlags {
    /// `h(t)` equals `f(2-2t)` (energy) or `0` (code) at every inner product.
    pub values_match: bool,
    pub max_value_residual: f64,
    /// `sum_{x,y} P^n_k(<x,y>) = 0` for every `k >= 1` with `h_k > 0`.
    pub moments_vanish: bool,
    /// Largest `|sum_{x,y} P^n_k| / N^2` over those `k`.
    pub max_moment_residual: f64,
    pub sharp: bool,
}

pub fn sharpness_check(code: &SphericalCode, h: &SphereCertificate) -> Result<SharpnessFlags> {
    if code.dimension() != h.dimension {
        return Err(Error::Domain("code and certificate dimensions differ".into()));
    }
    const TOL: f64 = 1e-8;
    let dist = distance_distribution(code, DEFAULT_CLUSTER_TOL)?;
    let basis = h.basis();
    let mut max_value_residual: f64 = 0.0;
    for t in dist.off_diagonal(1e-9) {
        let target = match &h.context {
            CertificateContext::Energy { potential } => potential.value(2.0 - 2.0 * t),
            CertificateContext::Code { .. } => 0.0,
        };
        let r = (basis.eval_series(&h.coefficients, t) - target).abs() / (1.0 + target.abs());
        max_value_residual = max_value_residual.max(r);
    }
    let moments = gegenbauer_moments(code, h.degree())?;
    let n2 = (code.len() * code.len()) as f64;
    let scale = h.coefficients.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let max_moment_residual = h
        .coefficients
        .iter()
        .zip(&moments)
        .skip(1)
        .filter(|(c, _)| **c > TOL * scale)
        .map(|(_, m)| m.abs() / n2)
        .fold(0.0, f64::max);
    let values_match = max_value_residual <= TOL;
    let moments_vanish = max_moment_residual <= TOL;
    Ok(SharpnessFlags {
        values_match,
        max_value_residual,
        moments_vanish,
        max_moment_residual,
        sharp: values_match && moments_vanish,
    })
}
