use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{RadialFunction, RadialProfile};
use crate::error::{Error, Result};
use crate::lattices::{dual, golay_generate, norms_within, EnumerationSettings, LatticeBasis};
use crate::special::unit_ball_volume;

/// A Schwartz function for Poisson summation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PoissonInput {
    /// `exp(-pi a |x|^2)`, with transform `a^{-n/2} exp(-pi |y|^2 / a)`.
    Gaussian { width: f64 },
    Radial { function: RadialFunction },
}

impl PoissonInput {
    pub fn unit_gaussian() -> Self {
        PoissonInput::Gaussian { width: 1.0 }
    }

    fn validate(&self, n: usize) -> Result<()> {
        match self {
            PoissonInput::Gaussian { width } if !(*width > 0.0 && width.is_finite()) => {
                Err(Error::Domain(format!("Gaussian width must be positive, got {width}")))
            }
            PoissonInput::Radial { function } if function.dimension != n => Err(Error::Domain(format!(
                "function is on R^{}, lattice on R^{n}",
                function.dimension
            ))),
            _ => Ok(()),
        }
    }

    /// Value at squared radius `u`.
    fn value_sq(&self, u: f64) -> f64 {
        match self {
            PoissonInput::Gaussian { width } => (-PI * width * u).exp(),
            PoissonInput::Radial { function } => function.value(u.sqrt()),
        }
    }

    fn transform_sq(&self, n: usize, u: f64) -> f64 {
        match self {
            PoissonInput::Gaussian { width } => width.powf(-(n as f64) / 2.0) * (-PI * u / width).exp(),
            PoissonInput::Radial { function } => function.transform(u.sqrt()),
        }
    }

    /// `|g(u)| <= poly(u) exp(-pi w u)` as `(|coefficients|, w)`.
    fn envelope(&self, n: usize, transformed: bool) -> (Vec<f64>, f64) {
        match self {
            PoissonInput::Gaussian { width } if transformed => (vec![width.powf(-(n as f64) / 2.0)], 1.0 / width),
            PoissonInput::Gaussian { width } => (vec![1.0], *width),
            PoissonInput::Radial { function } => (
                function.polynomial(transformed).into_iter().map(f64::abs).collect(),
                1.0,
            ),
        }
    }
}

/// Smallest squared radius past which the envelope, times a generous count
/// of lattice points per unit shell, is below `1e-16` of `reference`.
fn truncation(n: usize, covolume: f64, envelope: &(Vec<f64>, f64), reference: f64) -> f64 {
    let (poly, w) = envelope;
    let mut u: f64 = 1.0;
    loop {
        let p: f64 = poly.iter().enumerate().map(|(j, a)| a * u.powi(j as i32)).sum();
        let shell = unit_ball_volume(n) * (u.sqrt() + 2.0).powi(n as i32) / covolume;
        if p * (-PI * w * u).exp() * (1.0 + shell) < 1e-16 * reference.abs().max(1e-300) || u > 1e4 {
            return u;
        }
        u += 0.5;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoissonCheckReport {
    pub lattice: String,
    /// `sum_{x in L} f(x)`.
    pub direct: f64,
    /// `covol(L)^{-1} sum_{t in L*} \hat f(t)`.
    pub dual: f64,
    pub direct_radius_sq: f64,
    pub dual_radius_sq: f64,
    pub difference: f64,
    pub relative_difference: f64,
    pub method: String,
}

fn lattice_sum(
    l: &LatticeBasis,
    g: &(dyn Fn(f64) -> f64 + Sync),
    radius_sq: f64,
    settings: &EnumerationSettings,
) -> Result<f64> {
    let mut norms = norms_within(l, radius_sq, settings)?;
    // Sum small terms first.
    norms.sort_by(|a, b| b.total_cmp(a));
    let half: f64 = norms.par_iter().map(|&u| g(u)).sum();
    Ok(g(0.0) + 2.0 * half)
}

fn is_leech(l: &LatticeBasis) -> bool {
    l.name().eq_ignore_ascii_case("leech") && l.dimension() == 24 && (l.covolume() - 1.0).abs() < 1e-9
}

/// Both sides of Poisson summation for `f` over `l`.
pub fn poisson_check(l: &LatticeBasis, f: &PoissonInput) -> Result<PoissonCheckReport> {
    poisson_check_with(l, f, &EnumerationSettings::default())
}

pub fn poisson_check_with(l: &LatticeBasis, f: &PoissonInput, settings: &EnumerationSettings) -> Result<PoissonCheckReport> {
    let n = l.dimension();
    f.validate(n)?;
    let covol = l.covolume();
    let (direct, dual_side, du, tu, method) = match f {
        PoissonInput::Gaussian { width } if is_leech(l) => {
            // Unimodular, so the dual is the lattice itself.
            let direct = leech_theta(*width);
            let dual_side = width.powi(-12) * leech_theta(1.0 / width);
            (direct, dual_side, f64::INFINITY, f64::INFINITY, "golay_theta")
        }
        _ => {
            let fd = |u: f64| f.value_sq(u);
            let ft = |u: f64| f.transform_sq(n, u);
            let du = truncation(n, covol, &f.envelope(n, false), fd(0.0));
            let tu = truncation(n, 1.0 / covol, &f.envelope(n, true), ft(0.0));
            let direct = lattice_sum(l, &fd, du, settings)?;
            let dual_side = lattice_sum(&dual(l)?, &ft, tu, settings)? / covol;
            (direct, dual_side, du, tu, "enumeration")
        }
    };
    let difference = (direct - dual_side).abs();
    Ok(PoissonCheckReport {
        lattice: l.name().to_string(),
        direct,
        dual: dual_side,
        direct_radius_sq: du,
        dual_radius_sq: tu,
        difference,
        relative_difference: difference / direct.abs().max(1e-300),
        method: method.to_string(),
    })
}

/// `sum_{x in L} exp(-pi a |x|^2)`.
pub fn gaussian_theta(l: &LatticeBasis, width: f64) -> Result<f64> {
    let f = PoissonInput::Gaussian { width };
    f.validate(l.dimension())?;
    if is_leech(l) {
        return Ok(leech_theta(width));
    }
    let n = l.dimension();
    let u = truncation(n, l.covolume(), &f.envelope(n, false), 1.0);
    lattice_sum(l, &|u| (-PI * width * u).exp(), u, &EnumerationSettings::default())
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Complex(f64, f64);

impl Complex {
    fn mul(self, o: Self) -> Self {
        Complex(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
    }

    fn powi(self, k: usize) -> Self {
        (0..k).fold(Complex(1.0, 0.0), |acc, _| acc.mul(self))
    }
}

/// `sum_{x in Leech} exp(-pi a |x|^2)` from the Golay weight enumerator.
///
/// In coordinates scaled by `sqrt 8`, Leech vectors are integer vectors that
/// are either all even, with the entries `= 2 mod 4` on a codeword and sum
/// `= 0 mod 8`, or all odd, with the entries `= 3 mod 4` on a codeword and
/// sum `= 4 mod 8`. Each case factors over coordinates once the sum
/// condition is written with a character.
pub fn leech_theta(width: f64) -> f64 {
    let mut weights = [0usize; 25];
    weights.copy_from_slice(&golay_generate().weight_distribution());
    let reach = ((8.0 * 750.0 / (PI * width)).sqrt().ceil() as i64) + 4;
    let term = |z: i64| (-PI * width * (z * z) as f64 / 8.0).exp();
    let class_sum = |residue: i64| -> f64 { (-reach..=reach).filter(|z| z.rem_euclid(4) == residue).map(term).sum() };
    let (a0, a2, b1, b3) = (class_sum(0), class_sum(2), class_sum(1), class_sum(3));
    // Even case: the character (-1)^{z/4} on z = 0 mod 4 (on z = 2 mod 4 the
    // analogous sum vanishes, so only the zero codeword survives).
    let a0_twisted: f64 = (-reach..=reach)
        .filter(|z| z.rem_euclid(4) == 0)
        .map(|z| if (z / 4).rem_euclid(2) == 0 { term(z) } else { -term(z) })
        .sum();
    // Odd case: the character exp(2 pi i z / 8).
    let twisted = |residue: i64| {
        (-reach..=reach).filter(|z| z.rem_euclid(4) == residue).fold(Complex(0.0, 0.0), |acc, z| {
            let phase = 2.0 * PI * z as f64 / 8.0;
            Complex(acc.0 + phase.cos() * term(z), acc.1 + phase.sin() * term(z))
        })
    };
    let (b1_twisted, b3_twisted) = (twisted(1), twisted(3));
    let mut even = a0_twisted.powi(24);
    let mut odd = 0.0;
    for (w, &count) in weights.iter().enumerate() {
        if count == 0 {
            continue;
        }
        let c = count as f64;
        even += c * a0.powi(24 - w as i32) * a2.powi(w as i32);
        odd += c * b1.powi(24 - w as i32) * b3.powi(w as i32);
        odd -= c * b1_twisted.powi(24 - w).mul(b3_twisted.powi(w)).0;
    }
    0.5 * (even + odd)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicCheckReport {
    pub direct: f64,
    pub dual: f64,
    pub difference: f64,
}

/// All vectors `x` of `l` with `|x + shift|^2 <= radius_sq`, by a box over
/// coefficient ranges from the dual basis.
fn shifted_vectors(l: &LatticeBasis, shift: &[f64], radius_sq: f64, budget: u64) -> Result<Vec<Vec<f64>>> {
    let n = l.dimension();
    let d = dual(l)?;
    let r = radius_sq.sqrt();
    let ranges: Vec<(i64, i64)> = d
        .rows()
        .iter()
        .map(|b| {
            let centre: f64 = -b.iter().zip(shift).map(|(x, y)| x * y).sum::<f64>();
            let len = b.iter().map(|x| x * x).sum::<f64>().sqrt();
            ((centre - r * len).floor() as i64, (centre + r * len).ceil() as i64)
        })
        .collect();
    let size: f64 = ranges.iter().map(|(a, b)| (b - a + 1) as f64).product();
    if size > budget as f64 {
        return Err(Error::Resource {
            what: format!("periodic box of {size:.0} points exceeds budget {budget}"),
            partial: false,
        });
    }
    let mut out = Vec::new();
    let mut c: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    loop {
        let coeffs: Vec<f64> = c.iter().map(|&v| v as f64).collect();
        let x = l.vector(&coeffs);
        let norm: f64 = x.iter().zip(shift).map(|(a, b)| (a + b) * (a + b)).sum();
        if norm <= radius_sq {
            out.push(x);
        }
        let mut i = 0;
        loop {
            if i == n {
                return Ok(out);
            }
            c[i] += 1;
            if c[i] <= ranges[i].1 {
                break;
            }
            c[i] = ranges[i].0;
            i += 1;
        }
    }
}

/// Poisson summation for the two-translate periodic set `L u (L + shift)`
/// with a Gaussian of width `a`:
/// `sum_{j,k} sum_x f(x + y_j - y_k) = covol^{-1} sum_t \hat f(t) |sum_j e^{2 pi i <y_j, t>}|^2`.
pub fn periodic_check(l: &LatticeBasis, shift: &[f64], width: f64) -> Result<PeriodicCheckReport> {
    let n = l.dimension();
    if shift.len() != n {
        return Err(Error::Domain("shift has the wrong dimension".into()));
    }
    PoissonInput::Gaussian { width }.validate(n)?;
    let budget = 50_000_000;
    let f = |u: f64| (-PI * width * u).exp();
    let fhat = |u: f64| width.powf(-(n as f64) / 2.0) * (-PI * u / width).exp();
    let radius_sq = 40.0 / (PI * width);
    let zero = vec![0.0; n];
    let same: f64 = shifted_vectors(l, &zero, radius_sq, budget)?
        .iter()
        .map(|x| f(x.iter().map(|v| v * v).sum()))
        .sum();
    let across: f64 = shifted_vectors(l, shift, radius_sq, budget)?
        .iter()
        .map(|x| f(x.iter().zip(shift).map(|(a, b)| (a + b) * (a + b)).sum()))
        .sum();
    let direct = 2.0 * same + 2.0 * across;
    let dual_radius_sq = 40.0 * width / PI;
    let dual_side: f64 = shifted_vectors(&dual(l)?, &zero, dual_radius_sq, budget)?
        .iter()
        .map(|t| {
            let phase = 2.0 * PI * t.iter().zip(shift).map(|(a, b)| a * b).sum::<f64>();
            fhat(t.iter().map(|v| v * v).sum()) * (2.0 + 2.0 * phase.cos())
        })
        .sum::<f64>()
        / l.covolume();
    Ok(PeriodicCheckReport {
        direct,
        dual: dual_side,
        difference: (direct - dual_side).abs(),
    })
}
