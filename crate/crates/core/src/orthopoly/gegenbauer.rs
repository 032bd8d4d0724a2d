use num_rational::BigRational;
use num_traits::{FromPrimitive, Num};

use crate::error::{Error, Result};

/// Normalized ultraspherical polynomials `P^n_0, ..., P^n_d` for one
/// dimension `n >= 2`, with `P^n_k(1) = 1`.
///
/// Evaluation uses the three-term recurrence
/// `P_{k+1}(t) = a_k t P_k(t) - b_k P_{k-1}(t)` with
/// `a_k = (2k+n-2)/(k+n-2)` and `b_k = k/(k+n-2)`, which is the classical
/// Gegenbauer recurrence for `lambda = (n-2)/2` divided through by the value
/// at 1. For `n = 2` the `k = 0` step is the Chebyshev limit `P_1 = t`, so
/// `P^2_k(cos theta) = cos(k theta)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GegenbauerBasis {
    dimension: usize,
    max_degree: usize,
    recurrence: Vec<(f64, f64)>,
    // (2k+n-2, k, k+n-2); integer-valued, so the recurrence is exact at t = 1.
    integer_recurrence: Vec<(f64, f64, f64)>,
}

fn recurrence_coeffs(n: usize, k: usize) -> (f64, f64) {
    if k == 0 {
        return (1.0, 0.0);
    }
    let denom = (k + n - 2) as f64;
    ((2 * k + n - 2) as f64 / denom, k as f64 / denom)
}

impl GegenbauerBasis {
    pub fn new(dimension: usize, max_degree: usize) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::Domain(format!("Gegenbauer basis needs n >= 2, got {dimension}")));
        }
        let recurrence = (0..max_degree.max(1)).map(|k| recurrence_coeffs(dimension, k)).collect();
        let integer_recurrence = (0..max_degree.max(1))
            .map(|k| ((2 * k + dimension - 2) as f64, k as f64, (k + dimension - 2) as f64))
            .collect();
        Ok(Self {
            dimension,
            max_degree,
            recurrence,
            integer_recurrence,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Recurrence constants `(a_k, b_k)` for `k < max_degree`.
    pub fn recurrence_coeffs(&self) -> &[(f64, f64)] {
        &self.recurrence[..self.max_degree]
    }

    /// Values `P_0(t), ..., P_d(t)` written into `out` (length `d + 1`).
    pub fn eval_into(&self, t: f64, out: &mut [f64]) {
        let d = out.len() - 1;
        debug_assert!(d <= self.max_degree);
        out[0] = 1.0;
        if d == 0 {
            return;
        }
        out[1] = t;
        for k in 1..d {
            let (a, b, den) = self.integer_recurrence[k];
            out[k + 1] = (a * t * out[k] - b * out[k - 1]) / den;
        }
    }

    pub fn eval_all(&self, t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.max_degree + 1];
        self.eval_into(t, &mut out);
        out
    }

    pub fn eval(&self, k: usize, t: f64) -> f64 {
        let mut out = vec![0.0; k + 1];
        self.eval_into(t, &mut out);
        out[k]
    }

    /// Values and derivatives of `P_0..P_d` at `t`.
    pub fn eval_with_derivatives(&self, t: f64, d: usize) -> (Vec<f64>, Vec<f64>) {
        let mut p = vec![0.0; d + 1];
        let mut dp = vec![0.0; d + 1];
        p[0] = 1.0;
        if d >= 1 {
            p[1] = t;
            dp[1] = 1.0;
        }
        for k in 1..d {
            let (a, b) = self.recurrence[k];
            p[k + 1] = a * t * p[k] - b * p[k - 1];
            dp[k + 1] = a * (p[k] + t * dp[k]) - b * dp[k - 1];
        }
        (p, dp)
    }

    /// `sum_k coeffs[k] P_k(t)`.
    pub fn eval_series(&self, coeffs: &[f64], t: f64) -> f64 {
        if coeffs.is_empty() {
            return 0.0;
        }
        let mut vals = vec![0.0; coeffs.len()];
        self.eval_into(t, &mut vals);
        coeffs.iter().zip(&vals).map(|(c, v)| c * v).sum()
    }

    pub fn eval_series_derivative(&self, coeffs: &[f64], t: f64) -> f64 {
        if coeffs.len() < 2 {
            return 0.0;
        }
        let (_, dp) = self.eval_with_derivatives(t, coeffs.len() - 1);
        coeffs.iter().zip(&dp).map(|(c, v)| c * v).sum()
    }

    /// `P_k'(1) = k(k+n-2)/(n-1)`, the maximum of `|P_k'|` on `[-1, 1]`.
    pub fn derivative_at_one(&self, k: usize) -> f64 {
        (k * (k + self.dimension - 2)) as f64 / (self.dimension - 1) as f64
    }

    /// `int_{-1}^{1} P_k(t)^2 (1-t^2)^{(n-3)/2} dt`.
    pub fn norm_sq(&self, k: usize) -> f64 {
        let n = self.dimension;
        let mut value = std::f64::consts::PI.sqrt() * crate::special::gamma_half(n as u32 - 1)
            / crate::special::gamma_half(n as u32);
        for j in 1..=k {
            let (a_prev, _) = recurrence_coeffs(n, j - 1);
            let (a_j, b_j) = recurrence_coeffs(n, j);
            value *= a_prev * b_j / a_j;
        }
        value
    }
}

/// Value of the normalized `P^n_k(t)`.
pub fn gegenbauer_eval(n: usize, k: usize, t: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain(format!("dimension must be >= 2, got {n}")));
    }
    if !(-1.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("t = {t} outside [-1, 1]")));
    }
    if t == 1.0 {
        return Ok(1.0);
    }
    Ok(GegenbauerBasis::new(n, k)?.eval(k, t))
}

/// Monomial coefficients (ascending) of `P^n_0, ..., P^n_d` over any field
/// that contains the rationals.
pub fn gegenbauer_monomials<T>(n: usize, d: usize) -> Vec<Vec<T>>
where
    T: Clone + Num + FromPrimitive,
{
    assert!(n >= 2);
    let c = |x: usize| T::from_usize(x).unwrap();
    let mut polys: Vec<Vec<T>> = vec![vec![T::one()]];
    if d >= 1 {
        polys.push(vec![T::zero(), T::one()]);
    }
    for k in 1..d {
        let denom = c(k + n - 2);
        let a = c(2 * k + n - 2);
        let b = c(k);
        let mut next = vec![T::zero(); k + 2];
        for (i, coeff) in polys[k].iter().enumerate() {
            next[i + 1] = next[i + 1].clone() + a.clone() * coeff.clone() / denom.clone();
        }
        for (i, coeff) in polys[k - 1].iter().enumerate() {
            next[i] = next[i].clone() - b.clone() * coeff.clone() / denom.clone();
        }
        polys.push(next);
    }
    polys
}

/// Coefficients `h_k` with `poly(t) = sum_k h_k P^n_k(t)`, by back-substitution
/// from the top degree. `poly` is in ascending monomial order.
pub fn gegenbauer_expand<T>(n: usize, poly: &[T]) -> Result<Vec<T>>
where
    T: Clone + Num + FromPrimitive,
{
    if n < 2 {
        return Err(Error::Domain(format!("dimension must be >= 2, got {n}")));
    }
    if poly.is_empty() {
        return Ok(Vec::new());
    }
    let d = poly.len() - 1;
    let basis = gegenbauer_monomials::<T>(n, d);
    let mut rest = poly.to_vec();
    let mut out = vec![T::zero(); d + 1];
    for k in (0..=d).rev() {
        let lead = basis[k][k].clone();
        let h = rest[k].clone() / lead;
        for (i, c) in basis[k].iter().enumerate() {
            rest[i] = rest[i].clone() - h.clone() * c.clone();
        }
        out[k] = h;
    }
    Ok(out)
}

/// Exact rational expansion, used for certificates.
pub fn gegenbauer_expand_exact(n: usize, poly: &[BigRational]) -> Result<Vec<BigRational>> {
    gegenbauer_expand(n, poly)
}
