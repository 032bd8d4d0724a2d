use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, Zero};

use super::basis::LatticeBasis;
use crate::error::{Error, Result};
use crate::exact::rational_from_f64;

/// Scalars LLL can run over: `f64` for floating bases, `BigRational` for
/// exact ones.
pub trait LllScalar: Clone + PartialOrd + Num + Signed + FromPrimitive {
    fn round_nearest(&self) -> Self;
}

impl LllScalar for f64 {
    fn round_nearest(&self) -> Self {
        self.round()
    }
}

impl LllScalar for BigRational {
    fn round_nearest(&self) -> Self {
        self.round()
    }
}

/// Gram-matrix LLL. Returns the reduced Gram matrix and the unimodular
/// transform `U` with `reduced rows = U * rows`.
///
/// Incremental Gram–Schmidt with swap updates; vectors must be independent.
pub fn lll_gram<T: LllScalar>(gram: &[Vec<T>], delta: &T) -> (Vec<Vec<T>>, Vec<Vec<T>>) {
    let n = gram.len();
    let mut g = gram.to_vec();
    let mut u: Vec<Vec<T>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect();
    if n <= 1 {
        return (g, u);
    }
    let half = T::from_f64(0.5).unwrap();
    let mut mu = vec![vec![T::zero(); n]; n];
    let mut b = vec![T::zero(); n];
    b[0] = g[0][0].clone();
    let mut k = 1;
    let mut kmax = 0;

    let reduce = |k: usize, l: usize, g: &mut Vec<Vec<T>>, u: &mut Vec<Vec<T>>, mu: &mut Vec<Vec<T>>| {
        if mu[k][l].abs() <= half {
            return;
        }
        let q = mu[k][l].round_nearest();
        // b_k <- b_k - q b_l
        let gkk = g[k][k].clone() - (q.clone() + q.clone()) * g[k][l].clone() + q.clone() * q.clone() * g[l][l].clone();
        for i in 0..n {
            if i != k {
                let v = g[k][i].clone() - q.clone() * g[l][i].clone();
                g[k][i] = v.clone();
                g[i][k] = v;
            }
        }
        g[k][k] = gkk;
        for c in 0..n {
            let v = u[k][c].clone() - q.clone() * u[l][c].clone();
            u[k][c] = v;
        }
        mu[k][l] = mu[k][l].clone() - q.clone();
        for i in 0..l {
            let v = mu[k][i].clone() - q.clone() * mu[l][i].clone();
            mu[k][i] = v;
        }
    };

    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..k {
                let mut s = g[k][j].clone();
                for i in 0..j {
                    s = s - mu[j][i].clone() * mu[k][i].clone() * b[i].clone();
                }
                mu[k][j] = s / b[j].clone();
            }
            let mut s = g[k][k].clone();
            for j in 0..k {
                s = s - mu[k][j].clone() * mu[k][j].clone() * b[j].clone();
            }
            b[k] = s;
        }
        reduce(k, k - 1, &mut g, &mut u, &mut mu);
        let lhs = b[k].clone();
        let rhs = (delta.clone() - mu[k][k - 1].clone() * mu[k][k - 1].clone()) * b[k - 1].clone();
        if lhs < rhs {
            // Swap b_k and b_{k-1}.
            g.swap(k, k - 1);
            for row in g.iter_mut() {
                row.swap(k, k - 1);
            }
            u.swap(k, k - 1);
            for j in 0..k - 1 {
                let t = mu[k][j].clone();
                mu[k][j] = mu[k - 1][j].clone();
                mu[k - 1][j] = t;
            }
            let m = mu[k][k - 1].clone();
            let bn = b[k].clone() + m.clone() * m.clone() * b[k - 1].clone();
            mu[k][k - 1] = m.clone() * b[k - 1].clone() / bn.clone();
            let bk1 = b[k - 1].clone();
            b[k - 1] = bn.clone();
            b[k] = bk1 * b[k].clone() / bn;
            for i in k + 1..=kmax {
                let t = mu[i][k].clone();
                mu[i][k] = mu[i][k - 1].clone() - m.clone() * t.clone();
                mu[i][k - 1] = t + mu[k][k - 1].clone() * mu[i][k].clone();
            }
            if k > 1 {
                k -= 1;
            }
        } else {
            for l in (0..k - 1).rev() {
                reduce(k, l, &mut g, &mut u, &mut mu);
            }
            k += 1;
        }
    }
    (g, u)
}

/// Whether `gram` satisfies the size and Lovász conditions with `delta`
/// (with slack `eps` for floating input).
pub fn is_lll_reduced(gram: &[Vec<f64>], delta: f64, eps: f64) -> bool {
    let n = gram.len();
    let mut mu = vec![vec![0.0; n]; n];
    let mut b = vec![0.0; n];
    for k in 0..n {
        for j in 0..k {
            let s: f64 = (0..j).map(|i| mu[j][i] * mu[k][i] * b[i]).sum();
            mu[k][j] = (gram[k][j] - s) / b[j];
        }
        b[k] = gram[k][k] - (0..k).map(|j| mu[k][j] * mu[k][j] * b[j]).sum::<f64>();
    }
    for k in 1..n {
        if (0..k).any(|j| mu[k][j].abs() > 0.5 + eps) {
            return false;
        }
        if b[k] < (delta - mu[k][k - 1] * mu[k][k - 1]) * b[k - 1] * (1.0 - eps) {
            return false;
        }
    }
    true
}

fn apply_transform(u: &[Vec<f64>], rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    u.iter()
        .map(|ur| {
            let mut v = vec![0.0; rows[0].len()];
            for (c, row) in ur.iter().zip(rows) {
                if *c != 0.0 {
                    for (x, b) in v.iter_mut().zip(row) {
                        *x += c * b;
                    }
                }
            }
            v
        })
        .collect()
}

/// Integer transform matrix from a floating LLL run, as big integers.
fn transform_to_bigint(u: &[Vec<f64>]) -> Option<Vec<Vec<BigInt>>> {
    u.iter()
        .map(|r| r.iter().map(|x| if x.abs() < 9e15 { BigInt::from_f64(*x) } else { None }).collect())
        .collect()
}

fn conjugate_exact(g: &[Vec<BigRational>], u: &[Vec<BigInt>]) -> Vec<Vec<BigRational>> {
    let n = g.len();
    let ur: Vec<Vec<BigRational>> = u.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    let mut ug = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if ur[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                ug[i][j] += &ur[i][k] * &g[k][j];
            }
        }
    }
    let mut out = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut s = BigRational::zero();
            for k in 0..n {
                if !ur[j][k].is_zero() {
                    s += &ug[i][k] * &ur[j][k];
                }
            }
            out[i][j] = s;
        }
    }
    out
}

/// LLL-reduce a basis with Lovász parameter `delta` in `(1/4, 1)`.
///
/// Bases with exact rational rows are reduced in exact arithmetic. Other
/// bases are reduced in floating point (repeating until the reduction
/// conditions hold on a fresh Gram matrix); an exact Gram matrix, if
/// present, is carried through the integer transform.
pub fn lll_reduce(l: &LatticeBasis, delta: f64) -> Result<LatticeBasis> {
    if !(delta > 0.25 && delta < 1.0) {
        return Err(Error::Domain(format!("LLL parameter {delta} outside (1/4, 1)")));
    }
    if let Some(rows) = l.exact_rows() {
        let g = super::basis::rational_gram(rows);
        let (_, u) = lll_gram(&g, &rational_from_f64(delta));
        let n = rows.len();
        let new_rows: Vec<Vec<BigRational>> = u
            .iter()
            .map(|ur| {
                (0..n)
                    .map(|c| {
                        let mut s = BigRational::zero();
                        for (a, row) in ur.iter().zip(rows) {
                            if !a.is_zero() {
                                s += a * &row[c];
                            }
                        }
                        s
                    })
                    .collect()
            })
            .collect();
        return Ok(LatticeBasis::from_rational_rows(new_rows)?.named(l.name()));
    }
    let (reduced_rows, u_total) = float_lll_rows(l.rows(), delta)?;
    let out = match l.exact_gram() {
        Some(g) => {
            let u = transform_to_bigint(&u_total).ok_or_else(|| Error::Precision("LLL transform overflowed".into()))?;
            LatticeBasis::with_exact_gram(reduced_rows, conjugate_exact(g, &u))?
        }
        None => LatticeBasis::from_rows(reduced_rows)?,
    };
    Ok(out.named(l.name()))
}

/// Floating LLL on explicit rows; returns reduced rows and the accumulated
/// transform.
pub(crate) fn float_lll_rows(rows: &[Vec<f64>], delta: f64) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    let n = rows.len();
    let mut current = rows.to_vec();
    let mut u_total: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    for _ in 0..20 {
        let g = gram_of(&current);
        if is_lll_reduced(&g, delta, 1e-9) {
            return Ok((current, u_total));
        }
        let (_, u) = lll_gram(&g, &delta);
        current = apply_transform(&u, &current);
        u_total = apply_transform(&u, &u_total);
    }
    let g = gram_of(&current);
    if is_lll_reduced(&g, delta, 1e-6) {
        Ok((current, u_total))
    } else {
        Err(Error::Precision("floating-point LLL did not converge; supply an exact basis".into()))
    }
}

fn gram_of(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    rows.iter().map(|a| rows.iter().map(|b| a.iter().zip(b).map(|(x, y)| x * y).sum()).collect()).collect()
}

/// Exact LLL on integer rows (used for relation finding).
pub fn lll_reduce_integer_rows(rows: &[Vec<BigInt>], delta: &BigRational) -> Vec<Vec<BigInt>> {
    let n = rows.len();
    let g: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let s: BigInt = rows[i].iter().zip(&rows[j]).map(|(a, b)| a * b).sum();
                    BigRational::from_integer(s)
                })
                .collect()
        })
        .collect();
    let (_, u) = lll_gram(&g, delta);
    u.iter()
        .map(|ur| {
            (0..rows[0].len())
                .map(|c| {
                    let mut s = BigInt::zero();
                    for (a, row) in ur.iter().zip(rows) {
                        if !a.is_zero() {
                            s += a.to_integer() * &row[c];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat_int;

    #[test]
    fn skewed_plane_basis() {
        let l = LatticeBasis::from_rows(vec![vec![1.0, 0.0], vec![1e6, 1.0]]).unwrap();
        let r = lll_reduce(&l, 0.75).unwrap();
        let n0: f64 = r.gram()[0][0];
        assert!((n0 - 1.0).abs() < 1e-9);
        assert!((r.covolume() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn exact_rows_stay_exact() {
        let rows = vec![vec![rat_int(1), rat_int(0)], vec![rat_int(1_000_000), rat_int(1)]];
        let l = LatticeBasis::from_rational_rows(rows).unwrap();
        let r = lll_reduce(&l, 0.99).unwrap();
        assert_eq!(r.exact_gram_det().unwrap(), rat_int(1));
        let g = r.exact_gram().unwrap();
        assert_eq!(g[0][0], rat_int(1));
        assert_eq!(g[1][1], rat_int(1));
    }

    #[test]
    fn rejects_bad_delta() {
        let l = LatticeBasis::from_rows(vec![vec![1.0]]).unwrap();
        assert!(lll_reduce(&l, 0.2).is_err());
        assert!(lll_reduce(&l, 1.0).is_err());
    }
}
