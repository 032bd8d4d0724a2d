use super::{CertificateContext, SphereCertificate};
use crate::codes::{distance_distribution, PotentialSpec, SphericalCode, DEFAULT_CLUSTER_TOL};
use crate::error::{Error, Result};
use crate::orthopoly::gegenbauer_expand;

/// Polynomial (ascending monomials) matching `values[j]` and `slopes[j]` at
/// each node, by divided differences on doubled nodes.
fn hermite_interpolate(nodes: &[f64], values: &[f64], slopes: &[f64]) -> Vec<f64> {
    let m = 2 * nodes.len();
    let z: Vec<f64> = nodes.iter().flat_map(|&t| [t, t]).collect();
    // table[i] holds f[z_i, ..., z_{i+level}] as levels advance.
    let mut table: Vec<f64> = values.iter().flat_map(|&v| [v, v]).collect();
    let mut newton = vec![table[0]];
    for level in 1..m {
        let mut next = Vec::with_capacity(m - level);
        for i in 0..m - level {
            let dz = z[i + level] - z[i];
            next.push(if level == 1 && dz == 0.0 {
                slopes[i / 2]
            } else {
                (table[i + 1] - table[i]) / dz
            });
        }
        newton.push(next[0]);
        table = next;
    }
    // Newton form to monomials, Horner style from the top.
    let mut poly = vec![0.0; m];
    let mut deg = 0;
    poly[0] = newton[m - 1];
    for k in (0..m - 1).rev() {
        // poly <- poly * (t - z_k) + newton[k]
        let mut shifted = vec![0.0; m];
        for i in 0..=deg {
            shifted[i + 1] += poly[i];
            shifted[i] -= z[k] * poly[i];
        }
        shifted[0] += newton[k];
        poly = shifted;
        deg += 1;
    }
    poly
}

/// Minimal-degree `h` with `h = f(2-2t)` and `h' = d/dt f(2-2t)` at every
/// inner product between distinct points of `code`. The Gegenbauer
/// coefficients are not guaranteed to be nonnegative.
pub fn hermite_certificate(code: &SphericalCode, f: &PotentialSpec) -> Result<SphereCertificate> {
    let dist = distance_distribution(code, DEFAULT_CLUSTER_TOL)?;
    let nodes = dist.off_diagonal(1e-9);
    if nodes.is_empty() {
        return Err(Error::Domain("code has no pairs of distinct points".into()));
    }
    if nodes.windows(2).any(|w| w[1] - w[0] < 1e-12) {
        return Err(Error::Domain("repeated interpolation nodes".into()));
    }
    let values: Vec<f64> = nodes.iter().map(|&t| f.value(2.0 - 2.0 * t)).collect();
    let slopes: Vec<f64> = nodes.iter().map(|&t| -2.0 * f.derivative(2.0 - 2.0 * t, 1)).collect();
    if values.iter().chain(&slopes).any(|v| !v.is_finite()) {
        return Err(Error::Domain("potential is not differentiable at an inner product".into()));
    }
    let poly = hermite_interpolate(&nodes, &values, &slopes);
    let h = gegenbauer_expand(code.dimension(), &poly)?;
    SphereCertificate::new(code.dimension(), CertificateContext::Energy { potential: f.clone() }, h)
}

/// Tangent line to `f(2-2t)` at `t = -1/(N-1)`:
/// `h(t) = f(2 + 2/(N-1)) - 2 f'(2 + 2/(N-1)) (t + 1/(N-1))`.
pub fn tangent_line_certificate(n: usize, count: usize, f: &PotentialSpec) -> Result<SphereCertificate> {
    if count < 2 {
        return Err(Error::Domain("tangent-line certificate needs N >= 2".into()));
    }
    let t0 = -1.0 / (count as f64 - 1.0);
    let d = 2.0 - 2.0 * t0;
    let slope = -2.0 * f.derivative(d, 1);
    let h0 = f.value(d) - slope * t0;
    SphereCertificate::new(n, CertificateContext::Energy { potential: f.clone() }, vec![h0, slope])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_reproduces_cubic() {
        let p = |t: f64| 1.0 - 2.0 * t + 0.5 * t * t * t;
        let dp = |t: f64| -2.0 + 1.5 * t * t;
        let nodes = [-0.7, 0.4];
        let poly = hermite_interpolate(&nodes, &nodes.map(p), &nodes.map(dp));
        let expected = [1.0, -2.0, 0.0, 0.5];
        for (a, b) in poly.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12, "{poly:?}");
        }
    }
}
