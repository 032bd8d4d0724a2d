use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::lll::lll_reduce_integer_rows;
use crate::error::{Error, Result};
use crate::exact::{parse_rational, rat, rational_to_f64, significant_digits};

/// A real number known to a stated number of significant digits, or exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct PreciseReal {
    pub value: BigRational,
    /// Significant decimal digits; `None` for exact values.
    pub digits: Option<usize>,
}

impl PreciseReal {
    /// Integers and `p/q` are exact; decimals carry the digits written.
    pub fn parse(s: &str) -> Result<Self> {
        let value = parse_rational(s)?;
        let t = s.trim();
        let exact = t.contains('/') || !t.contains(['.', 'e', 'E']);
        Ok(Self {
            value,
            digits: if exact { None } else { Some(significant_digits(t)) },
        })
    }

    pub fn exact(value: BigRational) -> Self {
        Self { value, digits: None }
    }

    /// `[1, x, x^2, ..., x^m]`, each carrying the precision of `x`.
    pub fn powers(&self, m: usize) -> Vec<Self> {
        let mut out = Vec::with_capacity(m + 1);
        let mut p = BigRational::from_integer(BigInt::from(1));
        for k in 0..=m {
            out.push(Self {
                value: p.clone(),
                digits: if k == 0 { None } else { self.digits },
            });
            p *= &self.value;
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationResult {
    pub coefficients: Vec<i128>,
    /// `|sum_i a_i alpha_i|` evaluated exactly on the given inputs.
    pub residual: f64,
    /// Every coefficient has at most the requested number of digits.
    pub within_digit_bound: bool,
}

/// Search for small integers `a_i` with `sum a_i alpha_i ≈ 0` by LLL on the
/// rows `(e_i, round(scale * alpha_i))`.
pub fn find_integer_relation(alphas: &[PreciseReal], scale: &BigRational, max_coeff_digits: usize) -> Result<RelationResult> {
    if alphas.len() < 2 {
        return Err(Error::Domain("need at least two numbers".into()));
    }
    if !scale.is_positive() {
        return Err(Error::Domain("scale must be positive".into()));
    }
    let log_scale = rational_to_f64(scale).log10();
    for a in alphas {
        if let Some(d) = a.digits {
            let mag = rational_to_f64(&a.value).abs().max(1e-300).log10().max(0.0);
            if log_scale + mag > d as f64 {
                return Err(Error::Precision(format!(
                    "input with {d} significant digits cannot support a scale of 10^{log_scale:.1}"
                )));
            }
        }
    }
    let m = alphas.len();
    let rows: Vec<Vec<BigInt>> = alphas
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let mut r = vec![BigInt::zero(); m + 1];
            r[i] = BigInt::from(1);
            r[m] = (scale * &a.value).round().to_integer();
            r
        })
        .collect();
    let reduced = lll_reduce_integer_rows(&rows, &rat(99, 100));
    let best = reduced
        .iter()
        .filter(|r| r[..m].iter().any(|x| !x.is_zero()))
        .min_by_key(|r| r.iter().map(|x| x * x).sum::<BigInt>())
        .ok_or_else(|| Error::Domain("no relation found".into()))?;
    let mut coeffs: Vec<BigInt> = best[..m].to_vec();
    if coeffs.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        coeffs = coeffs.into_iter().map(|x| -x).collect();
    }
    let mut sum = BigRational::zero();
    for (c, a) in coeffs.iter().zip(alphas) {
        sum += BigRational::from_integer(c.clone()) * &a.value;
    }
    let bound = num_traits::pow(BigInt::from(10), max_coeff_digits);
    let within_digit_bound = coeffs.iter().all(|c| c.abs() < bound);
    let coefficients = coeffs
        .iter()
        .map(|c| c.to_i128().ok_or_else(|| Error::Resource { what: "relation coefficient exceeds 128 bits".into(), partial: true }))
        .collect::<Result<Vec<_>>>()?;
    Ok(RelationResult {
        coefficients,
        residual: rational_to_f64(&sum.abs()),
        within_digit_bound,
    })
}
