use super::GegenbauerBasis;
use crate::error::{Error, Result};

/// Gauss rule for `int_{-1}^{1} g(t) (1-t^2)^{(n-3)/2} dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiQuadrature {
    pub dimension: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl JacobiQuadrature {
    pub fn point_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn integrate(&self, mut g: impl FnMut(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&t, &w)| w * g(t)).sum()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }
}

const ROOT_TOL: f64 = 1e-13;

/// Gauss quadrature with `m` points for the ultraspherical weight of
/// dimension `n`; exact for polynomials of degree `<= 2m - 1`.
///
/// Nodes are the roots of `P^n_m`, bracketed by a sign scan in
/// `theta = arccos t` and polished by Newton steps that fall back to
/// bisection whenever they leave the bracket. Weights come from the
/// Christoffel sum `1 / sum_{k<m} P_k(x)^2 / ||P_k||^2`.
pub fn jacobi_quadrature(n: usize, m: usize) -> Result<JacobiQuadrature> {
    if m == 0 {
        return Err(Error::Domain("quadrature needs at least one point".into()));
    }
    let basis = GegenbauerBasis::new(n, m)?;
    let p = |t: f64| basis.eval(m, t);

    // Odd multiples keep the scan angles away from j pi / (m + 1), where the
    // roots sit for n = 4.
    let mut samples = 32 * (m + 1) + 1;
    let nodes = loop {
        let mut brackets = Vec::with_capacity(m);
        let mut prev_t: f64 = 1.0;
        let mut prev_v: f64 = 1.0;
        for i in 1..=samples {
            let t = (std::f64::consts::PI * i as f64 / samples as f64).cos();
            let v = if i == samples { p(-1.0) } else { p(t) };
            if v == 0.0 {
                brackets.push((t, t));
            } else if v.signum() != prev_v.signum() && prev_v != 0.0 {
                brackets.push((t, prev_t));
            }
            prev_t = t;
            prev_v = v;
        }
        if brackets.len() == m {
            break brackets
                .into_iter()
                .map(|(lo, hi)| refine_root(&basis, m, lo, hi))
                .collect::<Vec<_>>();
        }
        samples = 4 * samples + 1;
        if samples > 1 << 24 {
            return Err(Error::Domain(format!("could not bracket the roots of P^{n}_{m}")));
        }
    };

    let norms: Vec<f64> = (0..m).map(|k| basis.norm_sq(k)).collect();
    let mut vals = vec![0.0; m];
    let weights = nodes
        .iter()
        .map(|&x| {
            basis.eval_into(x, &mut vals);
            1.0 / vals.iter().zip(&norms).map(|(v, nk)| v * v / nk).sum::<f64>()
        })
        .collect();
    let mut rule = JacobiQuadrature {
        dimension: n,
        nodes,
        weights,
    };
    // Ascending order.
    rule.nodes.reverse();
    rule.weights.reverse();
    Ok(rule)
}

fn refine_root(basis: &GegenbauerBasis, m: usize, mut lo: f64, mut hi: f64) -> f64 {
    if lo == hi {
        return lo;
    }
    let f = |t: f64| {
        let (p, dp) = basis.eval_with_derivatives(t, m);
        (p[m], dp[m])
    };
    let f_lo = f(lo).0;
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let (v, dv) = f(x);
        if v == 0.0 {
            return x;
        }
        if v.signum() == f_lo.signum() {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - v / dv;
        let next = if dv != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let step = (next - x).abs();
        x = next;
        if step < ROOT_TOL * 1e-2 || hi - lo < ROOT_TOL {
            break;
        }
    }
    // Polish to full precision; Newton converges quadratically from here.
    for _ in 0..3 {
        let (v, dv) = f(x);
        if v == 0.0 || dv == 0.0 {
            break;
        }
        let next = x - v / dv;
        if !(next >= lo - ROOT_TOL && next <= hi + ROOT_TOL) {
            break;
        }
        x = next;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn flat_weight_for_three_dimensions() {
        let q = jacobi_quadrature(3, 5).unwrap();
        assert_abs_diff_eq!(q.integrate(|t| t * t), 2.0 / 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(q.total_weight(), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn total_weights() {
        // int (1-t^2)^{-1/2} = pi (arcsin antiderivative)
        let q2 = jacobi_quadrature(2, 8).unwrap();
        assert_abs_diff_eq!(q2.total_weight(), PI, epsilon = 1e-13);
        // int (1-t^2)^{1/2} = pi/2 (half disk)
        let q4 = jacobi_quadrature(4, 8).unwrap();
        assert_abs_diff_eq!(q4.total_weight(), PI / 2.0, epsilon = 1e-13);
    }

    #[test]
    fn weights_positive_and_nodes_inside() {
        for n in [2, 3, 5, 8, 24] {
            for m in [1, 2, 7, 30] {
                let q = jacobi_quadrature(n, m).unwrap();
                assert_eq!(q.point_count(), m);
                assert!(q.weights.iter().all(|&w| w > 0.0));
                assert!(q.nodes.iter().all(|&t| t > -1.0 && t < 1.0));
                assert!(q.nodes.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn chebyshev_nodes_for_circle() {
        let m = 6;
        let q = jacobi_quadrature(2, m).unwrap();
        for (i, &t) in q.nodes.iter().enumerate() {
            let expected = -((2 * i + 1) as f64 * PI / (2 * m) as f64).cos();
            assert_abs_diff_eq!(t, expected, epsilon = 1e-13);
            assert_abs_diff_eq!(q.weights[i], PI / m as f64, epsilon = 1e-13);
        }
    }

    #[test]
    fn zero_points_rejected() {
        assert!(jacobi_quadrature(3, 0).is_err());
    }
}
