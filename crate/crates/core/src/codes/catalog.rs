use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::SphericalCode;
use crate::error::{Error, Result};
use crate::lattices::{construct, shortest_vectors_with, EnumerationSettings, LatticeName};

/// Named configurations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum CodeName {
    /// `count <= n + 1` points with pairwise inner products `-1/(count-1)`.
    Simplex { n: usize, count: usize },
    CrossPolytope { n: usize },
    /// Regular `count`-gon on the circle.
    Polygon { count: usize },
    Hexagon,
    Icosahedron,
    /// North pole plus a square at polar angle `latitude` (radians).
    SquarePyramid { latitude: f64 },
    TriangularBipyramid,
    Cell600,
    E8Roots,
    D4MinVectors,
    LeechMinVectors,
}

impl CodeName {
    /// Parse `simplex:N:COUNT`, `cross_polytope:N`, `polygon:COUNT`,
    /// `square_pyramid:LATITUDE`, or a bare name.
    pub fn parse(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase().replace('-', "_");
        let parts: Vec<&str> = lower.split(':').collect();
        let int = |i: usize| -> Result<usize> {
            parts
                .get(i)
                .ok_or_else(|| Error::Parse(format!("{s:?} is missing a parameter")))?
                .parse()
                .map_err(|_| Error::Parse(format!("bad parameter in {s:?}")))
        };
        Ok(match parts[0] {
            "simplex" => Self::Simplex { n: int(1)?, count: int(2)? },
            "cross_polytope" | "cross" => Self::CrossPolytope { n: int(1)? },
            "polygon" => Self::Polygon { count: int(1)? },
            "hexagon" => Self::Hexagon,
            "icosahedron" => Self::Icosahedron,
            "square_pyramid" => Self::SquarePyramid {
                latitude: parts
                    .get(1)
                    .ok_or_else(|| Error::Parse("square_pyramid needs a latitude".into()))?
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad latitude in {s:?}")))?,
            },
            "triangular_bipyramid" | "bipyramid" => Self::TriangularBipyramid,
            "cell600" | "600_cell" => Self::Cell600,
            "e8_roots" | "e8" => Self::E8Roots,
            "d4_min_vectors" | "d4" => Self::D4MinVectors,
            "leech_min_vectors" | "leech" => Self::LeechMinVectors,
            _ => return Err(Error::UnknownName(s.to_string())),
        })
    }
}

pub fn catalog(name: &CodeName) -> Result<SphericalCode> {
    match *name {
        CodeName::Simplex { n, count } => simplex(n, count),
        CodeName::CrossPolytope { n } => {
            if n == 0 {
                return Err(Error::Domain("cross polytope needs n >= 1".into()));
            }
            let mut pts = Vec::with_capacity(2 * n);
            for i in 0..n {
                for s in [1.0, -1.0] {
                    let mut p = vec![0.0; n];
                    p[i] = s;
                    pts.push(p);
                }
            }
            SphericalCode::new(pts)
        }
        CodeName::Polygon { count } => polygon(count),
        CodeName::Hexagon => polygon(6),
        CodeName::Icosahedron => {
            let phi = (1.0 + 5f64.sqrt()) / 2.0;
            let mut pts = Vec::with_capacity(12);
            for a in [1.0, -1.0] {
                for b in [phi, -phi] {
                    pts.push(vec![0.0, a, b]);
                    pts.push(vec![a, b, 0.0]);
                    pts.push(vec![b, 0.0, a]);
                }
            }
            SphericalCode::normalized(pts)
        }
        CodeName::SquarePyramid { latitude } => {
            if !(latitude > 0.0 && latitude < PI) {
                return Err(Error::Domain("square latitude must lie in (0, pi)".into()));
            }
            let (s, c) = latitude.sin_cos();
            let mut pts = vec![vec![0.0, 0.0, 1.0]];
            pts.extend([(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)].map(|(x, y)| vec![s * x, s * y, c]));
            SphericalCode::normalized(pts)
        }
        CodeName::TriangularBipyramid => {
            let h = 3f64.sqrt() / 2.0;
            SphericalCode::normalized(vec![
                vec![0.0, 0.0, 1.0],
                vec![0.0, 0.0, -1.0],
                vec![1.0, 0.0, 0.0],
                vec![-0.5, h, 0.0],
                vec![-0.5, -h, 0.0],
            ])
        }
        CodeName::Cell600 => cell600(),
        CodeName::E8Roots => lattice_min_vectors(LatticeName::E8),
        CodeName::D4MinVectors => lattice_min_vectors(LatticeName::Dn(4)),
        CodeName::LeechMinVectors => lattice_min_vectors(LatticeName::Leech),
    }
}

fn polygon(count: usize) -> Result<SphericalCode> {
    if count == 0 {
        return Err(Error::Domain("polygon needs at least one vertex".into()));
    }
    let pts = (0..count)
        .map(|k| {
            let a = 2.0 * PI * k as f64 / count as f64;
            vec![a.cos(), a.sin()]
        })
        .collect();
    SphericalCode::normalized(pts)
}

/// Regular simplex through the centred standard basis of `R^count`,
/// written in Helmert coordinates and padded to `R^n`.
fn simplex(n: usize, count: usize) -> Result<SphericalCode> {
    if n == 0 || count == 0 {
        return Err(Error::Domain("simplex needs n >= 1 and at least one point".into()));
    }
    if count > n + 1 {
        return Err(Error::Domain(format!("a simplex in R^{n} has at most {} points, not {count}", n + 1)));
    }
    if count == 1 {
        let mut p = vec![0.0; n];
        p[0] = 1.0;
        return SphericalCode::new(vec![p]);
    }
    let pts = (0..count)
        .map(|i| {
            let mut p = vec![0.0; n];
            for k in 1..count {
                // Helmert vector h_k = (1,...,1, -k, 0,...)/sqrt(k(k+1)), k ones.
                let norm = ((k * (k + 1)) as f64).sqrt();
                p[k - 1] = if i < k {
                    1.0 / norm
                } else if i == k {
                    -(k as f64) / norm
                } else {
                    0.0
                };
            }
            p
        })
        .collect();
    SphericalCode::normalized(pts)
}

fn cell600() -> Result<SphericalCode> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut pts = Vec::with_capacity(120);
    for i in 0..4 {
        for s in [1.0, -1.0] {
            let mut p = vec![0.0; 4];
            p[i] = s;
            pts.push(p);
        }
    }
    for mask in 0..16 {
        pts.push((0..4).map(|i| if mask >> i & 1 == 1 { -0.5 } else { 0.5 }).collect());
    }
    let base = [phi / 2.0, 0.5, 1.0 / (2.0 * phi), 0.0];
    let even_perms = [
        [0, 1, 2, 3],
        [0, 2, 3, 1],
        [0, 3, 1, 2],
        [1, 0, 3, 2],
        [1, 2, 0, 3],
        [1, 3, 2, 0],
        [2, 0, 1, 3],
        [2, 1, 3, 0],
        [2, 3, 0, 1],
        [3, 0, 2, 1],
        [3, 1, 0, 2],
        [3, 2, 1, 0],
    ];
    for perm in even_perms {
        for mask in 0..8 {
            let signs = [mask & 1, mask >> 1 & 1, mask >> 2 & 1];
            let mut p = vec![0.0; 4];
            for (slot, &src) in perm.iter().enumerate() {
                let v = base[src];
                p[slot] = if src < 3 && signs[src] == 1 { -v } else { v };
            }
            pts.push(p);
        }
    }
    SphericalCode::normalized(pts)
}

fn lattice_min_vectors(name: LatticeName) -> Result<SphericalCode> {
    let l = construct(&name)?;
    let settings = EnumerationSettings {
        keep_vectors: true,
        ..Default::default()
    };
    let report = shortest_vectors_with(&l, None, &settings)?;
    SphericalCode::normalized(report.vectors.unwrap_or_default())
}
