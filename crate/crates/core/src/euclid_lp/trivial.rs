use serde::{Deserialize, Serialize};

use super::{check_profile, DensityBoundReport, RadialProfile, MIN_CHECK_GRID, MIN_DISTANCE};
use crate::error::{Error, Result};
use crate::orthopoly::{jacobi_quadrature, JacobiQuadrature};
use crate::special::unit_ball_volume;

/// `int_a^1 (1-t^2)^{(n-1)/2} dt` by the recursion
/// `I_p = (2p I_{p-1} - a (1-a^2)^p) / (2p+1)` from `p = 0` or `p = 1/2`.
fn cap_integral(n: usize, a: f64) -> f64 {
    let a = a.clamp(-1.0, 1.0);
    let s = (1.0 - a * a).max(0.0);
    let (mut p, mut value) = if n % 2 == 1 {
        (0.0, 1.0 - a)
    } else {
        (0.5, 0.5 * (a.acos() - a * s.sqrt()))
    };
    let target = (n as f64 - 1.0) / 2.0;
    while p < target - 1e-9 {
        p += 1.0;
        value = (2.0 * p * value - a * s.powf(p)) / (2.0 * p + 1.0);
    }
    value
}

/// Volume of the intersection of two unit balls in `R^n` with centers at
/// distance `r`: twice a cap of height `1 - r/2`.
pub fn lens_volume(n: usize, r: f64) -> f64 {
    if r >= 2.0 {
        return 0.0;
    }
    let slice = if n == 1 { 1.0 } else { unit_ball_volume(n - 1) };
    2.0 * slice * cap_integral(n, r / 2.0)
}

/// Fourier transform of the indicator of the unit ball at radius `s`,
/// `vol(B^{n-1}) int_{-1}^1 (1-t^2)^{(n-1)/2} cos(2 pi s t) dt`, by Gauss
/// quadrature for that weight.
pub fn ball_transform(n: usize, s: f64) -> f64 {
    let rule = ball_rule(n, s);
    let slice = if n == 1 { 1.0 } else { unit_ball_volume(n - 1) };
    slice * rule.integrate(|t| (2.0 * std::f64::consts::PI * s * t).cos())
}

fn ball_rule(n: usize, s: f64) -> JacobiQuadrature {
    // Enough nodes to resolve about 2 pi s / pi oscillations.
    let m = 24 + (4.0 * s.abs()).ceil() as usize;
    jacobi_quadrature(n + 2, m).expect("n + 2 >= 3")
}

/// The convolution of the unit-ball indicator with itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrivialFunction {
    pub dimension: usize,
}

impl RadialProfile for TrivialFunction {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn value(&self, r: f64) -> f64 {
        lens_volume(self.dimension, r)
    }

    fn transform(&self, r: f64) -> f64 {
        ball_transform(self.dimension, r).powi(2)
    }

    /// Vanishes beyond distance 2 and its transform is a square.
    fn tail_radius(&self) -> Option<f64> {
        Some(MIN_DISTANCE)
    }
}

/// Density bound from `chi_B * chi_B`; always 1.
pub fn trivial_bound(n: usize) -> Result<DensityBoundReport> {
    if !(1..=16).contains(&n) {
        return Err(Error::Domain(format!("trivial bound implemented for 1 <= n <= 16, got {n}")));
    }
    check_profile(&TrivialFunction { dimension: n }, MIN_DISTANCE, MIN_CHECK_GRID)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lens_in_low_dimensions() {
        for r in [0.0, 0.3, 1.0, 1.7, 2.0] {
            assert!((lens_volume(1, r) - (2.0 - r)).abs() < 1e-14);
            let pi = std::f64::consts::PI;
            let want = pi * (2.0 - r).powi(2) * (4.0 + r) / 12.0;
            assert!((lens_volume(3, r) - want).abs() < 1e-14);
        }
        assert!((lens_volume(2, 0.0) - std::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn ball_transform_at_zero_is_volume() {
        for n in 1..=10 {
            assert!((ball_transform(n, 0.0) - unit_ball_volume(n)).abs() < 1e-13);
        }
        // sin(2 pi s) / (pi s) on the line
        let s = 0.37;
        let want = (2.0 * std::f64::consts::PI * s).sin() / (std::f64::consts::PI * s);
        assert!((ball_transform(1, s) - want).abs() < 1e-13);
    }
}
