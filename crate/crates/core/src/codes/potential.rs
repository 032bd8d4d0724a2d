use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pair potential as a function of squared Euclidean distance `d = |x - y|^2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialKind {
    /// `f(d) = d^{-s/2}`, i.e. `1/|x-y|^s`; `s = 1` is Coulomb.
    Riesz { s: f64 },
    /// `f(d) = exp(-c d)`.
    Gaussian { c: f64 },
    /// Piecewise-linear interpolation of `(d, f(d))` samples, `d` increasing.
    Tabulated { d: Vec<f64>, f: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialSpec {
    pub kind: PotentialKind,
    pub decreasing: bool,
    pub convex: bool,
    pub completely_monotonic: bool,
}

impl PotentialSpec {
    pub fn riesz(s: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::Domain(format!("Riesz exponent must be positive, got {s}")));
        }
        Ok(Self {
            kind: PotentialKind::Riesz { s },
            decreasing: true,
            convex: true,
            completely_monotonic: true,
        })
    }

    pub fn coulomb() -> Self {
        Self::riesz(1.0).unwrap()
    }

    pub fn gaussian(c: f64) -> Result<Self> {
        if !(c >= 0.0 && c.is_finite()) {
            return Err(Error::Domain(format!("Gaussian rate must be nonnegative, got {c}")));
        }
        Ok(Self {
            kind: PotentialKind::Gaussian { c },
            decreasing: true,
            convex: true,
            completely_monotonic: true,
        })
    }

    pub fn tabulated(d: Vec<f64>, f: Vec<f64>) -> Result<Self> {
        if d.len() != f.len() || d.len() < 2 {
            return Err(Error::Domain("tabulated potential needs at least two (d, f) pairs".into()));
        }
        if d.windows(2).any(|w| !(w[1] > w[0])) || d.iter().chain(&f).any(|x| !x.is_finite()) {
            return Err(Error::Domain("tabulated distances must be finite and strictly increasing".into()));
        }
        let slopes: Vec<f64> = (1..d.len()).map(|i| (f[i] - f[i - 1]) / (d[i] - d[i - 1])).collect();
        Ok(Self {
            decreasing: slopes.iter().all(|s| *s <= 0.0),
            convex: slopes.windows(2).all(|w| w[1] >= w[0]),
            completely_monotonic: false,
            kind: PotentialKind::Tabulated { d, f },
        })
    }

    /// Parse `coulomb`, `riesz:S`, `gaussian:C`.
    pub fn parse(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let mut parts = lower.split(':');
        let head = parts.next().unwrap_or("");
        let arg = parts.next();
        let num = |a: Option<&str>| -> Result<f64> {
            a.ok_or_else(|| Error::Parse(format!("potential {s:?} needs a parameter")))?
                .parse()
                .map_err(|_| Error::Parse(format!("bad potential parameter in {s:?}")))
        };
        match head {
            "coulomb" => Ok(Self::coulomb()),
            "riesz" => Self::riesz(num(arg)?),
            "gaussian" => Self::gaussian(num(arg)?),
            _ => Err(Error::UnknownName(s.to_string())),
        }
    }

    pub fn label(&self) -> String {
        match &self.kind {
            PotentialKind::Riesz { s } => format!("riesz:{s}"),
            PotentialKind::Gaussian { c } => format!("gaussian:{c}"),
            PotentialKind::Tabulated { d, .. } => format!("tabulated:{}", d.len()),
        }
    }

    /// `f(d)`; infinite for a Riesz potential at `d = 0`.
    pub fn value(&self, d: f64) -> f64 {
        self.derivative(d, 0)
    }

    /// `k`-th derivative of `f` with respect to `d`.
    pub fn derivative(&self, d: f64, k: usize) -> f64 {
        match &self.kind {
            PotentialKind::Riesz { s } => {
                let a = s / 2.0;
                let mut coef = 1.0;
                for j in 0..k {
                    coef *= -(a + j as f64);
                }
                coef * d.powf(-a - k as f64)
            }
            PotentialKind::Gaussian { c } => (-c).powi(k as i32) * (-c * d).exp(),
            PotentialKind::Tabulated { d: xs, f: ys } => {
                let n = xs.len();
                let i = match xs.iter().position(|&x| x > d) {
                    Some(0) => 1,
                    Some(i) => i,
                    None => n - 1,
                };
                let slope = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]);
                match k {
                    0 => ys[i - 1] + slope * (d - xs[i - 1]),
                    1 => slope,
                    _ => 0.0,
                }
            }
        }
    }

    /// Whether `f` is finite at `d`.
    pub fn finite_at(&self, d: f64) -> bool {
        !matches!(self.kind, PotentialKind::Riesz { .. }) || d > 0.0
    }
}
