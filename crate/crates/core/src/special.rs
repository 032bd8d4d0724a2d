//! Small special-function helpers shared across modules.

use std::f64::consts::PI;

/// Gamma function at `half_twice / 2`, for positive integers `half_twice`.
///
/// Only integer and half-integer arguments occur in this crate (ball
/// volumes, Gegenbauer weight masses), so the product formula is exact up
/// to rounding.
pub fn gamma_half(half_twice: u32) -> f64 {
    assert!(half_twice > 0, "gamma_half needs a positive argument");
    let mut value = if half_twice % 2 == 0 { 1.0 } else { PI.sqrt() };
    let mut x2 = if half_twice % 2 == 0 { 2 } else { 1 };
    while x2 < half_twice {
        value *= x2 as f64 / 2.0;
        x2 += 2;
    }
    value
}

/// Volume of the unit ball in `R^n`, `pi^{n/2} / Gamma(n/2 + 1)`.
pub fn unit_ball_volume(n: usize) -> f64 {
    PI.powf(n as f64 / 2.0) / gamma_half(n as u32 + 2)
}

/// Volume of a ball of radius `r` in `R^n`.
pub fn ball_volume(n: usize, r: f64) -> f64 {
    unit_ball_volume(n) * r.powi(n as i32)
}

/// Generalized binomial coefficient `binom(a, k)` for real `a`.
pub fn binomial_real(a: f64, k: usize) -> f64 {
    let mut out = 1.0;
    for j in 0..k {
        out *= (a - j as f64) / (j as f64 + 1.0);
    }
    out
}

/// Binomial coefficient as `u128`, `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut out: u128 = 1;
    for j in 0..k {
        out = out.checked_mul((n - j) as u128)? / (j as u128 + 1);
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_values() {
        assert_relative_eq!(gamma_half(1), PI.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(gamma_half(2), 1.0);
        assert_relative_eq!(gamma_half(3), PI.sqrt() / 2.0, max_relative = 1e-15);
        assert_relative_eq!(gamma_half(10), 24.0);
        assert_relative_eq!(gamma_half(9), 11.631728396567448, max_relative = 1e-14);
    }

    #[test]
    fn ball_volumes() {
        assert_relative_eq!(unit_ball_volume(1), 2.0);
        assert_relative_eq!(unit_ball_volume(2), PI, max_relative = 1e-15);
        assert_relative_eq!(unit_ball_volume(3), 4.0 * PI / 3.0, max_relative = 1e-15);
        assert_relative_eq!(unit_ball_volume(8), PI.powi(4) / 24.0, max_relative = 1e-14);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), Some(10));
        assert_eq!(binomial(2, 5), Some(0));
        assert_relative_eq!(binomial_real(0.5, 2), -0.125);
    }
}
