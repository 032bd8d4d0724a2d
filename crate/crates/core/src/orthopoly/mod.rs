//! Ultraspherical polynomials, their Gauss quadrature, the radial Fourier
//! eigenbasis and spherical-harmonic dimension counts.

mod eigenbasis;
mod gegenbauer;
mod quadrature;

pub use eigenbasis::{eigenbasis_eval, fourier_eigenvalue, RadialEigenbasis};
pub use gegenbauer::{
    gegenbauer_eval, gegenbauer_expand, gegenbauer_expand_exact, gegenbauer_monomials, GegenbauerBasis,
};
pub use quadrature::{jacobi_quadrature, JacobiQuadrature};

use crate::error::{Error, Result};
use crate::special::binomial;

/// Dimension of the space of degree-`k` spherical harmonics on `S^{n-1}`.
///
/// Homogeneous polynomials of degree `k` in `n` variables, minus those of
/// degree `k - 2` (the image of multiplication by `|x|^2`).
pub fn harmonic_dim(n: usize, k: usize) -> Result<u128> {
    if n < 2 {
        return Err(Error::Domain(format!("harmonic_dim needs n >= 2, got {n}")));
    }
    let homogeneous = |deg: usize| binomial((n + deg - 1) as u64, (n - 1) as u64);
    let top = homogeneous(k).ok_or_else(|| Error::Capability("harmonic dimension overflows u128".into()))?;
    let lower = if k >= 2 {
        homogeneous(k - 2).ok_or_else(|| Error::Capability("harmonic dimension overflows u128".into()))?
    } else {
        0
    };
    Ok(top - lower)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_dimensions() {
        assert_eq!(harmonic_dim(2, 3).unwrap(), 2);
        assert_eq!(harmonic_dim(2, 0).unwrap(), 1);
        assert_eq!(harmonic_dim(17, 0).unwrap(), 1);
        assert_eq!(harmonic_dim(3, 2).unwrap(), 5);
        assert_eq!(harmonic_dim(3, 4).unwrap(), 9);
        // Degree-2 harmonics in 8 variables: 36 quadratics minus |x|^2.
        assert_eq!(harmonic_dim(8, 2).unwrap(), 35);
        assert!(harmonic_dim(1, 2).is_err());
    }
}
