//! Lattices: constructions, duals, LLL reduction, shortest and closest
//! vector enumeration, packing densities, the Golay code, and integer
//! relation detection.

mod basis;
mod construct;
mod enumerate;
mod golay;
mod lll;
mod relation;

pub use basis::{dual, LatticeBasis, LatticeInfo};
pub use construct::{best_known_lattice, construct, construct_named, leech_scaled_generators, LatticeName};
pub use enumerate::{
    nearest_point, norms_within, packing_density, shortest_vectors, shortest_vectors_with, EnumerationSettings,
    NearestPoint, PreparedLattice, ShortVectorReport, MAX_ENUM_DIMENSION,
};
pub use golay::{golay_generate, GolayCode, GOLAY_GENERATOR_POLY};
pub use lll::{is_lll_reduced, lll_gram, lll_reduce, lll_reduce_integer_rows, LllScalar};
pub use relation::{find_integer_relation, PreciseReal, RelationResult};
