use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::special::{binomial_real, gamma_half};

/// Radial Fourier eigenfunctions on `R^n`:
/// `b_k(r) = L_k^{(n/2-1)}(2 pi r^2) exp(-pi r^2)`,
/// with `\hat b_k = (-1)^k b_k` under `\hat f(y) = int f(x) e^{-2 pi i <x,y>} dx`.
///
/// Writing `u = r^2`, the polynomial parts `L_k(2 pi u)` are orthogonal for
/// the measure `u^{n/2-1} e^{-2 pi u} du` on `[0, inf)`; equivalently the
/// `b_k` are orthogonal for `r^{n-1} dr`, which is the radial part of
/// Lebesgue measure on `R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialEigenbasis {
    dimension: usize,
    degree: usize,
    alpha: f64,
}

impl RadialEigenbasis {
    pub fn new(dimension: usize, degree: usize) -> Result<Self> {
        if dimension < 1 {
            return Err(Error::Domain("eigenbasis needs n >= 1".into()));
        }
        Ok(Self {
            dimension,
            degree,
            alpha: dimension as f64 / 2.0 - 1.0,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Laguerre values `L_0(2 pi u), ..., L_d(2 pi u)` (no Gaussian factor).
    pub fn poly_into(&self, u: f64, out: &mut [f64]) {
        let x = 2.0 * PI * u;
        let a = self.alpha;
        out[0] = 1.0;
        if out.len() == 1 {
            return;
        }
        out[1] = 1.0 + a - x;
        for k in 1..out.len() - 1 {
            let kf = k as f64;
            out[k + 1] = ((2.0 * kf + 1.0 + a - x) * out[k] - (kf + a) * out[k - 1]) / (kf + 1.0);
        }
    }

    /// `b_0(r), ..., b_d(r)`.
    pub fn eval_all(&self, r: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.degree + 1];
        self.eval_into(r, &mut out);
        out
    }

    pub fn eval_into(&self, r: f64, out: &mut [f64]) {
        self.poly_into(r * r, out);
        let g = (-PI * r * r).exp();
        for v in out.iter_mut() {
            *v *= g;
        }
    }

    /// `sum_k c_k b_k(r)`; with `transformed` the Fourier transform
    /// `sum_k (-1)^k c_k b_k(r)` instead.
    pub fn eval_series(&self, coeffs: &[f64], r: f64, transformed: bool) -> f64 {
        if coeffs.is_empty() {
            return 0.0;
        }
        let mut vals = vec![0.0; coeffs.len()];
        self.eval_into(r, &mut vals);
        series_sum(coeffs, &vals, transformed)
    }

    /// Polynomial part of the series at `u = r^2`, without the Gaussian.
    pub fn poly_series(&self, coeffs: &[f64], u: f64, transformed: bool) -> f64 {
        if coeffs.is_empty() {
            return 0.0;
        }
        let mut vals = vec![0.0; coeffs.len()];
        self.poly_into(u, &mut vals);
        series_sum(coeffs, &vals, transformed)
    }

    /// Taylor coefficients of `b_k` in powers of `u = |x|^2`, up to `u^order`.
    pub fn taylor(&self, k: usize, order: usize) -> Vec<f64> {
        // L_k^{(a)}(x) = sum_j (-1)^j binom(k+a, k-j) x^j / j!
        let a = self.alpha;
        let lag: Vec<f64> = (0..=order)
            .map(|j| {
                if j > k {
                    0.0
                } else {
                    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                    sign * binomial_real(k as f64 + a, k - j) * (2.0 * PI).powi(j as i32) / factorial(j)
                }
            })
            .collect();
        let gauss: Vec<f64> = (0..=order)
            .map(|j| (-PI).powi(j as i32) / factorial(j))
            .collect();
        (0..=order)
            .map(|m| (0..=m).map(|j| lag[j] * gauss[m - j]).sum())
            .collect()
    }

    /// Leading coefficient of `L_k(2 pi u)` in `u`.
    pub fn leading_coefficient(&self, k: usize) -> f64 {
        (-2.0 * PI).powi(k as i32) / factorial(k)
    }

    /// `int_0^inf b_k(r)^2 r^{n-1} dr`.
    pub fn norm_sq(&self, k: usize) -> f64 {
        let n = self.dimension as u32;
        let gamma_ratio = gamma_half(2 * k as u32 + n) / factorial(k);
        (2.0 * PI).powf(-self.alpha) / (4.0 * PI) * gamma_ratio
    }
}

fn series_sum(coeffs: &[f64], vals: &[f64], transformed: bool) -> f64 {
    coeffs
        .iter()
        .zip(vals)
        .enumerate()
        .map(|(k, (c, v))| {
            let s = if transformed && k % 2 == 1 { -1.0 } else { 1.0 };
            s * c * v
        })
        .sum()
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|j| j as f64).product()
}

/// Fourier eigenvalue `(-1)^k` of `b_k`.
pub fn fourier_eigenvalue(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `b_k(r)` in dimension `n`.
pub fn eigenbasis_eval(n: usize, k: usize, r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::Domain(format!("radius must be nonnegative, got {r}")));
    }
    Ok(RadialEigenbasis::new(n, k)?.eval_all(r)[k])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gaussian_base_case() {
        assert_eq!(eigenbasis_eval(8, 0, 0.0).unwrap(), 1.0);
        assert_relative_eq!(eigenbasis_eval(8, 0, 1.0).unwrap(), (-PI).exp(), max_relative = 1e-15);
        assert!(eigenbasis_eval(8, 1, -0.5).is_err());
        assert_eq!(fourier_eigenvalue(3), -1.0);
        assert_eq!(fourier_eigenvalue(4), 1.0);
    }

    #[test]
    fn taylor_matches_values_near_zero() {
        let basis = RadialEigenbasis::new(8, 6).unwrap();
        for k in 0..=6 {
            let t = basis.taylor(k, 3);
            let u: f64 = 1e-4;
            let approx = t[0] + t[1] * u + t[2] * u * u + t[3] * u.powi(3);
            assert_relative_eq!(approx, basis.eval_all(u.sqrt())[k], max_relative = 1e-12);
        }
    }
}
