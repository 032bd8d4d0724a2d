use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational, rational_det, rational_inverse, rational_to_f64};

/// A full-rank lattice in `R^n` given by `n` basis rows.
///
/// The Gram matrix and covolume are cached. When the lattice is known
/// exactly (rational rows, or a rational Gram matrix for lattices such as
/// Leech whose rows involve a square root) the exact Gram matrix is kept
/// alongside the floating-point data.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeBasis {
    name: String,
    rows: Vec<Vec<f64>>,
    gram: Vec<Vec<f64>>,
    covolume: f64,
    exact_rows: Option<Vec<Vec<BigRational>>>,
    exact_gram: Option<Vec<Vec<BigRational>>>,
}

fn float_gram(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = rows.len();
    let mut g = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let v: f64 = rows[i].iter().zip(&rows[j]).map(|(a, b)| a * b).sum();
            g[i][j] = v;
            g[j][i] = v;
        }
    }
    g
}

pub(crate) fn rational_gram(rows: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = rows.len();
    let mut g = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut v = BigRational::zero();
            for (a, b) in rows[i].iter().zip(&rows[j]) {
                v += a * b;
            }
            g[i][j] = v.clone();
            g[j][i] = v;
        }
    }
    g
}

/// Modified Gram–Schmidt: every vector keeps a non-negligible component
/// orthogonal to the previous ones.
fn independent(rows: &[Vec<f64>]) -> bool {
    let mut ortho: Vec<Vec<f64>> = Vec::with_capacity(rows.len());
    for r in rows {
        let norm: f64 = r.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut v = r.clone();
        for q in &ortho {
            let d: f64 = v.iter().zip(q).map(|(a, b)| a * b).sum();
            for (a, b) in v.iter_mut().zip(q) {
                *a -= d * b;
            }
        }
        let rest: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(rest > 1e-10 * norm) {
            return false;
        }
        ortho.push(v.into_iter().map(|x| x / rest).collect());
    }
    true
}

/// Determinant by partial-pivot elimination.
pub(crate) fn float_det(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs())).unwrap();
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            if f != 0.0 {
                for k in c..n {
                    a[r][k] -= f * a[c][k];
                }
            }
        }
    }
    det
}

/// Inverse by Gauss–Jordan with partial pivoting.
pub(crate) fn float_inverse(m: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs()))?;
        if a[p][c].abs() < 1e-300 {
            return None;
        }
        a.swap(p, c);
        let piv = a[c][c];
        for v in a[c].iter_mut() {
            *v /= piv;
        }
        let prow = a[c].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == c || row[c] == 0.0 {
                continue;
            }
            let f = row[c];
            for (v, p) in row.iter_mut().zip(&prow) {
                *v -= f * p;
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Lower-triangular rows `L` with `L L^T = G`, used to realise a lattice
/// given only by its Gram matrix.
pub(crate) fn cholesky_rows(g: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = g.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                let d = g[i][i] - s;
                if d <= 0.0 {
                    return None;
                }
                l[i][i] = d.sqrt();
            } else {
                l[i][j] = (g[i][j] - s) / l[j][j];
            }
        }
    }
    Some(l)
}

impl LatticeBasis {
    /// Build from floating-point rows. The rows must be square and independent.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Domain("a lattice needs at least one basis vector".into()));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Domain(format!("basis must be {n} x {n}")));
        }
        if rows.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Domain("basis entries must be finite".into()));
        }
        if !independent(&rows) {
            return Err(Error::Domain("basis vectors are linearly dependent".into()));
        }
        let gram = float_gram(&rows);
        Ok(Self {
            name: "custom".into(),
            covolume: float_det(&rows).abs(),
            rows,
            gram,
            exact_rows: None,
            exact_gram: None,
        })
    }

    /// Build from exact rational rows; the exact Gram matrix is retained.
    pub fn from_rational_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let float_rows: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(rational_to_f64).collect()).collect();
        let mut out = Self::from_rows(float_rows)?;
        if rational_det(&rows).is_zero() {
            return Err(Error::Domain("basis vectors are linearly dependent".into()));
        }
        out.exact_gram = Some(rational_gram(&rows));
        out.exact_rows = Some(rows);
        Ok(out)
    }

    /// Build from floating rows together with their exact Gram matrix.
    pub fn with_exact_gram(rows: Vec<Vec<f64>>, gram: Vec<Vec<BigRational>>) -> Result<Self> {
        let mut out = Self::from_rows(rows)?;
        if gram.len() != out.dimension() || gram.iter().any(|r| r.len() != out.dimension()) {
            return Err(Error::Domain("exact Gram matrix has the wrong shape".into()));
        }
        let drift = out
            .gram
            .iter()
            .flatten()
            .zip(gram.iter().flatten())
            .map(|(a, b)| (a - rational_to_f64(b)).abs())
            .fold(0.0, f64::max);
        if drift > 1e-8 * (1.0 + out.gram.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()))) {
            return Err(Error::Domain("exact Gram matrix disagrees with the basis".into()));
        }
        out.exact_gram = Some(gram);
        Ok(out)
    }

    /// Realise a lattice from an exact positive-definite Gram matrix.
    pub fn from_exact_gram(gram: Vec<Vec<BigRational>>) -> Result<Self> {
        let g: Vec<Vec<f64>> = gram.iter().map(|r| r.iter().map(rational_to_f64).collect()).collect();
        let rows = cholesky_rows(&g).ok_or_else(|| Error::Domain("Gram matrix is not positive definite".into()))?;
        Self::with_exact_gram(rows, gram)
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn gram(&self) -> &[Vec<f64>] {
        &self.gram
    }

    pub fn covolume(&self) -> f64 {
        self.covolume
    }

    pub fn exact_rows(&self) -> Option<&[Vec<BigRational>]> {
        self.exact_rows.as_deref()
    }

    pub fn exact_gram(&self) -> Option<&[Vec<BigRational>]> {
        self.exact_gram.as_deref()
    }

    /// `det(Gram)` exactly, when the Gram matrix is known exactly.
    pub fn exact_gram_det(&self) -> Option<BigRational> {
        self.exact_gram.as_ref().map(|g| rational_det(g))
    }

    /// Every inner product between basis vectors is an integer (exactly).
    pub fn is_integral(&self) -> Option<bool> {
        self.exact_gram.as_ref().map(|g| g.iter().flatten().all(|x| x.is_integer()))
    }

    /// Integral with every squared norm even.
    pub fn is_even(&self) -> Option<bool> {
        let g = self.exact_gram.as_ref()?;
        let two = BigInt::from(2);
        Some(self.is_integral()? && g.iter().enumerate().all(|(i, r)| (r[i].numer() % &two).is_zero()))
    }

    /// Integral with determinant one, i.e. equal to its dual lattice.
    pub fn is_self_dual(&self) -> Option<bool> {
        Some(self.is_integral()? && self.exact_gram_det()?.abs().is_one())
    }

    /// Lattice vector with coefficient vector `coeffs` in this basis.
    pub fn vector(&self, coeffs: &[f64]) -> Vec<f64> {
        let n = self.dimension();
        let mut v = vec![0.0; n];
        for (c, row) in coeffs.iter().zip(&self.rows) {
            for (x, b) in v.iter_mut().zip(row) {
                *x += c * b;
            }
        }
        v
    }

    /// Squared norm of the lattice vector with integer coefficients `coeffs`.
    pub fn sq_norm(&self, coeffs: &[i64]) -> f64 {
        let mut s = 0.0;
        for (i, &a) in coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in coeffs.iter().enumerate() {
                s += (a * b) as f64 * self.gram[i][j];
            }
        }
        s
    }

    /// Coordinates of the point `x` with respect to this basis.
    pub fn coordinates(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dimension() {
            return Err(Error::Domain(format!("point has {} coordinates, lattice dimension {}", x.len(), self.dimension())));
        }
        let inv = float_inverse(&self.rows).ok_or_else(|| Error::Domain("singular basis".into()))?;
        let n = self.dimension();
        Ok((0..n).map(|j| (0..n).map(|i| x[i] * inv[i][j]).sum()).collect())
    }

    /// Basis scaled by `factor` (all lengths multiplied).
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let rows = self.rows.iter().map(|r| r.iter().map(|x| x * factor).collect()).collect();
        Ok(Self::from_rows(rows)?.named(format!("{}*{factor}", self.name)))
    }

    /// Whether `self` and `other` generate the same lattice, up to `tol` in
    /// the change-of-basis coefficients.
    pub fn same_lattice(&self, other: &Self, tol: f64) -> bool {
        if self.dimension() != other.dimension() {
            return false;
        }
        let contains = |a: &Self, b: &Self| {
            b.rows.iter().all(|v| match a.coordinates(v) {
                Ok(c) => c.iter().all(|x| (x - x.round()).abs() <= tol),
                Err(_) => false,
            })
        };
        contains(self, other) && contains(other, self)
    }

    /// Plain-text form: one basis vector per row. Exact rows are written as
    /// rationals, others as shortest round-trip decimals.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match &self.exact_rows {
            Some(rows) => {
                for r in rows {
                    out.push_str(&r.iter().map(format_rational).collect::<Vec<_>>().join(" "));
                    out.push('\n');
                }
            }
            None => {
                for r in &self.rows {
                    out.push_str(&r.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(" "));
                    out.push('\n');
                }
            }
        }
        out
    }

    /// Parse the text form. Lines starting with `#` are ignored. All entries
    /// are read exactly, so the result carries an exact Gram matrix.
    pub fn from_text(text: &str) -> Result<Self> {
        let rows: Vec<Vec<BigRational>> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| l.split_whitespace().map(parse_rational).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        Self::from_rational_rows(rows)
    }
}

/// Dual lattice: basis rows `B^{-T}`, so that `<b*_i, b_j> = delta_ij`.
pub fn dual(l: &LatticeBasis) -> Result<LatticeBasis> {
    let name = format!("dual({})", l.name);
    if let Some(rows) = &l.exact_rows {
        let inv = rational_inverse(rows).ok_or_else(|| Error::Domain("singular basis".into()))?;
        let n = rows.len();
        let t: Vec<Vec<BigRational>> = (0..n).map(|i| (0..n).map(|j| inv[j][i].clone()).collect()).collect();
        return Ok(LatticeBasis::from_rational_rows(t)?.named(name));
    }
    let inv = float_inverse(&l.rows).ok_or_else(|| Error::Domain("singular basis".into()))?;
    let n = l.dimension();
    let t: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| inv[j][i]).collect()).collect();
    let out = match &l.exact_gram {
        Some(g) => {
            let gi = rational_inverse(g).ok_or_else(|| Error::Domain("singular Gram matrix".into()))?;
            LatticeBasis::with_exact_gram(t, gi)?
        }
        None => LatticeBasis::from_rows(t)?,
    };
    Ok(out.named(name))
}

/// Serializable summary of a basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeInfo {
    pub name: String,
    pub dimension: usize,
    pub covolume: f64,
    pub gram_det: Option<String>,
    pub integral: Option<bool>,
    pub even: Option<bool>,
    pub self_dual: Option<bool>,
}

impl LatticeBasis {
    pub fn info(&self) -> LatticeInfo {
        LatticeInfo {
            name: self.name.clone(),
            dimension: self.dimension(),
            covolume: self.covolume,
            gram_det: self.exact_gram_det().map(|d| format_rational(&d)),
            integral: self.is_integral(),
            even: self.is_even(),
            self_dual: self.is_self_dual(),
        }
    }
}
