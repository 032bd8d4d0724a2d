//! Linear programming bounds for sphere packings, spherical codes and
//! pair-potential energies, together with the lattice, orthogonal polynomial
//! and optimization machinery they are built from.
//!
//! The crate is organised by subsystem:
//!
//! * [`orthopoly`]: Gegenbauer polynomials, Gauss quadrature for their weight,
//!   the radial Fourier eigenbasis and spherical-harmonic dimensions.
//! * [`lattices`]: lattice constructions, duals, LLL, enumeration, integer
//!   relations and the Golay code.
//! * [`codes`]: spherical codes, distance distributions, energies, designs.
//! * [`lp`]: a dense revised simplex solver.
//! * [`sphere_lp`]: Delsarte/Yudin bounds on spheres.
//! * [`euclid_lp`]: sphere packing density bounds in Euclidean space.
//! * [`minimize`]: energy minimization and greedy saturated packings.

pub mod codes;
pub mod error;
pub mod euclid_lp;
pub mod exact;
pub mod lattices;
pub mod lp;
pub mod minimize;
pub mod orthopoly;
pub mod special;
pub mod sphere_lp;

pub use error::{Error, Result};
