use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::basis::LatticeBasis;
use super::lll::lll_reduce;
use crate::error::{Error, Result};
use crate::exact::format_rational;
use crate::special::ball_volume;

/// Largest dimension the enumerator accepts.
pub const MAX_ENUM_DIMENSION: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnumerationSettings {
    /// Search-tree nodes visited before giving up.
    pub node_budget: u64,
    /// Return the vectors themselves, not just counts.
    pub keep_vectors: bool,
    /// LLL parameter for preprocessing.
    pub delta: f64,
}

impl Default for EnumerationSettings {
    fn default() -> Self {
        Self {
            node_budget: 1_000_000_000,
            keep_vectors: false,
            delta: 0.99,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShortVectorReport {
    pub min_sq_norm: f64,
    /// Exact minimum as `"p/q"` when the Gram matrix is known exactly.
    pub min_sq_norm_exact: Option<String>,
    /// Vectors attaining the minimum, `v` and `-v` counted separately.
    pub count: usize,
    /// Number of nonzero vectors with squared norm at most the requested bound.
    pub within_bound: Option<usize>,
    pub nodes: u64,
    /// Minimal vectors (or all vectors within the bound, if one was given).
    pub vectors: Option<Vec<Vec<f64>>>,
}

/// An LLL-reduced copy of a lattice with everything the enumerator needs.
pub struct PreparedLattice {
    pub reduced: LatticeBasis,
    // Fincke–Pohst form: q[i][i] pivots, q[i][j] (j > i) multipliers.
    q: Vec<Vec<f64>>,
    // Exact Gram matrix of the reduced basis scaled to integers.
    int_gram: Option<(Vec<Vec<i128>>, BigInt)>,
}

fn integer_scaled(g: &[Vec<BigRational>]) -> Option<(Vec<Vec<i128>>, BigInt)> {
    let mut scale = BigInt::one();
    for x in g.iter().flatten() {
        scale = scale.lcm(x.denom());
    }
    let limit = BigInt::from(1i64 << 40);
    let mut out = Vec::with_capacity(g.len());
    for row in g {
        let mut r = Vec::with_capacity(row.len());
        for x in row {
            let v = x.numer() * (&scale / x.denom());
            if v > limit || -v.clone() > limit {
                return None;
            }
            r.push(v.to_i128()?);
        }
        out.push(r);
    }
    Some((out, scale))
}

impl PreparedLattice {
    pub fn new(l: &LatticeBasis, settings: &EnumerationSettings) -> Result<Self> {
        let n = l.dimension();
        if n > MAX_ENUM_DIMENSION {
            return Err(Error::Capability(format!(
                "enumeration supports dimension up to {MAX_ENUM_DIMENSION}, got {n}"
            )));
        }
        let reduced = lll_reduce(l, settings.delta)?;
        let g = reduced.gram();
        let mut q = vec![vec![0.0; n]; n];
        for i in 0..n {
            let mut d = g[i][i];
            for k in 0..i {
                d -= q[k][k] * q[k][i] * q[k][i];
            }
            q[i][i] = d;
            for j in i + 1..n {
                let mut s = g[i][j];
                for k in 0..i {
                    s -= q[k][k] * q[k][i] * q[k][j];
                }
                q[i][j] = s / d;
            }
        }
        let int_gram = reduced.exact_gram().and_then(integer_scaled);
        Ok(Self { reduced, q, int_gram })
    }

    pub fn dimension(&self) -> usize {
        self.q.len()
    }

    /// Exact squared norm scaled by the common denominator, if available.
    pub fn exact_scaled_norm(&self, x: &[i64]) -> Option<i128> {
        let (m, _) = self.int_gram.as_ref()?;
        let mut s: i128 = 0;
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let mut row: i128 = 0;
            for (j, &b) in x.iter().enumerate() {
                row += m[i][j] * b as i128;
            }
            s += a as i128 * row;
        }
        Some(s)
    }

    pub fn exact_scale(&self) -> Option<&BigInt> {
        self.int_gram.as_ref().map(|(_, s)| s)
    }

    /// Ambient coordinates of the reduced-basis combination `x`.
    pub fn ambient(&self, x: &[i64]) -> Vec<f64> {
        let coeffs: Vec<f64> = x.iter().map(|&v| v as f64).collect();
        self.reduced.vector(&coeffs)
    }

    /// Depth-first enumeration of integer vectors `x` (coordinates in the
    /// reduced basis) with `|x - center|^2 <= radius`.
    ///
    /// Without a center only one of each pair `±x` is visited and the zero
    /// vector is skipped. `visit` may return a smaller radius to prune the
    /// rest of the search. Returns the number of nodes visited.
    pub fn enumerate(
        &self,
        center: Option<&[f64]>,
        radius: f64,
        budget: u64,
        visit: &mut dyn FnMut(&[i64], f64) -> Option<f64>,
    ) -> Result<u64> {
        let n = self.dimension();
        let mut st = EnumState {
            q: &self.q,
            center,
            x: vec![0; n],
            radius,
            nodes: 0,
            budget,
            exceeded: false,
            visit,
        };
        st.level(n - 1, 0.0, true);
        if st.exceeded {
            return Err(Error::Resource {
                what: format!("enumeration node budget of {budget} exceeded"),
                partial: true,
            });
        }
        Ok(st.nodes)
    }
}

struct EnumState<'a, 'b> {
    q: &'a [Vec<f64>],
    center: Option<&'a [f64]>,
    x: Vec<i64>,
    radius: f64,
    nodes: u64,
    budget: u64,
    exceeded: bool,
    visit: &'b mut dyn FnMut(&[i64], f64) -> Option<f64>,
}

impl EnumState<'_, '_> {
    fn limit(&self) -> f64 {
        self.radius * (1.0 + 1e-12) + 1e-300
    }

    fn level(&mut self, i: usize, partial: f64, zero_above: bool) {
        let n = self.q.len();
        let y = |j: usize| self.center.map_or(0.0, |c| c[j]);
        let mut s = 0.0;
        for j in i + 1..n {
            s += self.q[i][j] * (self.x[j] as f64 - y(j));
        }
        let c = y(i) - s;
        let qii = self.q[i][i];
        let half = self.center.is_none() && zero_above;
        let start = if half { 0 } else { c.round() as i64 };
        let mut v = start;
        loop {
            if !self.try_value(i, v, c, qii, partial, zero_above) {
                break;
            }
            v += 1;
        }
        if !half {
            let mut v = start - 1;
            while self.try_value(i, v, c, qii, partial, zero_above) {
                v -= 1;
            }
        }
    }

    // Returns false once `v` lies outside the radius (or the budget is gone).
    fn try_value(&mut self, i: usize, v: i64, c: f64, qii: f64, partial: f64, zero_above: bool) -> bool {
        if self.exceeded {
            return false;
        }
        let d = partial + qii * (v as f64 - c) * (v as f64 - c);
        if d > self.limit() {
            return false;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exceeded = true;
            return false;
        }
        self.x[i] = v;
        if i == 0 {
            let is_zero = zero_above && v == 0;
            if !(self.center.is_none() && is_zero) {
                if let Some(r) = (self.visit)(&self.x, d) {
                    self.radius = r;
                }
            }
        } else {
            self.level(i - 1, d, zero_above && v == 0);
        }
        self.x[i] = 0;
        true
    }
}

fn exact_min_string(prep: &PreparedLattice, scaled: i128) -> Option<String> {
    let scale = prep.exact_scale()?;
    Some(format_rational(&BigRational::new(BigInt::from(scaled), scale.clone())))
}

/// Minimum squared norm and minimal vectors of a lattice, with an optional
/// enumeration of every vector up to `sq_norm_bound`.
pub fn shortest_vectors(l: &LatticeBasis, sq_norm_bound: Option<f64>) -> Result<ShortVectorReport> {
    shortest_vectors_with(l, sq_norm_bound, &EnumerationSettings::default())
}

pub fn shortest_vectors_with(
    l: &LatticeBasis,
    sq_norm_bound: Option<f64>,
    settings: &EnumerationSettings,
) -> Result<ShortVectorReport> {
    let prep = PreparedLattice::new(l, settings)?;
    let n = prep.dimension();
    let g = prep.reduced.gram();
    let start = (0..n).map(|i| g[i][i]).fold(f64::INFINITY, f64::min);
    const REL: f64 = 1e-9;

    let mut best = f64::INFINITY;
    let mut found: Vec<(Vec<i64>, f64)> = Vec::new();
    let mut nodes = prep.enumerate(None, start * (1.0 + REL), settings.node_budget, &mut |x, d| {
        if d < best * (1.0 - REL) {
            best = d;
            found.retain(|(_, e)| *e <= best * (1.0 + REL));
            found.push((x.to_vec(), d));
            Some(best * (1.0 + REL))
        } else {
            if d <= best * (1.0 + REL) {
                found.push((x.to_vec(), d));
            }
            None
        }
    })?;

    // Exact tie-breaking when possible.
    let mut exact_min = None;
    if prep.exact_scale().is_some() {
        let norms: Vec<i128> = found.iter().map(|(x, _)| prep.exact_scaled_norm(x).unwrap()).collect();
        if let Some(&m) = norms.iter().min() {
            exact_min = Some(m);
            let kept: Vec<(Vec<i64>, f64)> = found
                .into_iter()
                .zip(norms)
                .filter(|(_, e)| *e == m)
                .map(|(f, _)| f)
                .collect();
            found = kept;
        }
    }
    let min_sq_norm = match (exact_min, prep.exact_scale()) {
        (Some(m), Some(s)) => m as f64 / s.to_f64().unwrap_or(f64::NAN),
        _ => found.iter().map(|(_, d)| *d).fold(f64::INFINITY, f64::min),
    };
    let min_sq_norm_exact = exact_min.and_then(|m| exact_min_string(&prep, m));
    let count = 2 * found.len();

    let mut within_bound = None;
    let mut kept = found;
    if let Some(bound) = sq_norm_bound {
        let mut all: Vec<(Vec<i64>, f64)> = Vec::new();
        let keep = settings.keep_vectors;
        let mut total = 0usize;
        nodes += prep.enumerate(None, bound, settings.node_budget, &mut |x, d| {
            total += 1;
            if keep {
                all.push((x.to_vec(), d));
            }
            None
        })?;
        within_bound = Some(2 * total);
        kept = all;
    }
    let vectors = settings.keep_vectors.then(|| {
        let mut out = Vec::with_capacity(2 * kept.len());
        for (x, _) in &kept {
            let v = prep.ambient(x);
            out.push(v.iter().map(|a| -a).collect());
            out.push(v);
        }
        out
    });
    Ok(ShortVectorReport {
        min_sq_norm,
        min_sq_norm_exact,
        count,
        within_bound,
        nodes,
        vectors,
    })
}

/// Squared norms of all nonzero lattice vectors with norm at most `bound`,
/// one entry per `±v` pair.
pub fn norms_within(l: &LatticeBasis, bound: f64, settings: &EnumerationSettings) -> Result<Vec<f64>> {
    let prep = PreparedLattice::new(l, settings)?;
    let mut out = Vec::new();
    prep.enumerate(None, bound, settings.node_budget, &mut |_, d| {
        out.push(d);
        None
    })?;
    Ok(out)
}

/// Density of the sphere packing given by the lattice: balls of radius half
/// the minimal distance, divided by the covolume.
pub fn packing_density(l: &LatticeBasis) -> Result<f64> {
    let report = shortest_vectors(l, None)?;
    Ok(ball_volume(l.dimension(), report.min_sq_norm.sqrt() / 2.0) / l.covolume())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NearestPoint {
    pub vector: Vec<f64>,
    /// Integer coordinates of `vector` in the input basis.
    pub coefficients: Vec<i64>,
    pub distance: f64,
}

/// Closest lattice vector to `x`, exact up to floating rounding.
pub fn nearest_point(l: &LatticeBasis, x: &[f64]) -> Result<NearestPoint> {
    let settings = EnumerationSettings::default();
    let prep = PreparedLattice::new(l, &settings)?;
    let y = prep.reduced.coordinates(x)?;
    let n = y.len();
    let g = prep.reduced.gram();
    let babai: Vec<f64> = y.iter().map(|v| v.round() - v).collect();
    let mut r0 = 0.0;
    for i in 0..n {
        for j in 0..n {
            r0 += babai[i] * babai[j] * g[i][j];
        }
    }
    let mut best = (f64::INFINITY, vec![0i64; n]);
    prep.enumerate(Some(&y), r0 * (1.0 + 1e-9) + 1e-12, settings.node_budget, &mut |z, d| {
        if d < best.0 {
            best = (d, z.to_vec());
            Some(d * (1.0 + 1e-12) + 1e-15)
        } else {
            None
        }
    })?;
    let vector = prep.ambient(&best.1);
    let coefficients = l.coordinates(&vector)?.iter().map(|c| c.round() as i64).collect();
    let distance = vector.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
    Ok(NearestPoint {
        vector,
        coefficients,
        distance,
    })
}
