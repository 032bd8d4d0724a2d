//! Exact rational arithmetic helpers: parsing, formatting, polynomials over
//! the rationals (with Sturm-sequence sign certification), and small exact
//! linear algebra.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Parse `"p/q"`, an integer, or a decimal (optionally with exponent) into an
/// exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let q: BigInt = q.trim().parse().map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..].parse().map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::Parse(format!("not a number: {s:?}")));
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(Error::Parse(format!("not a number: {s:?}")));
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut num: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().unwrap() };
    if negative {
        num = -num;
    }
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    })
}

/// Number of significant decimal digits written in a decimal literal.
pub fn significant_digits(s: &str) -> usize {
    let mantissa = s.trim().split(['e', 'E']).next().unwrap_or("");
    if mantissa.contains('/') {
        return usize::MAX;
    }
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    digits.trim_start_matches('0').len()
}

/// `"p/q"`, or `"p"` for integers.
pub fn format_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Fall back to scaled division for huge numerators/denominators.
        let shift = x.numer().bits().max(x.denom().bits()).saturating_sub(900) as usize;
        let n = (x.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (x.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_int(p: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(p))
}

/// Exact rational from a finite double (every double is a dyadic rational).
pub fn rational_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap_or_else(BigRational::zero)
}

/// Serde adapter writing optional rational vectors as `"p/q"` strings.
pub mod rational_strings {
    use num_rational::BigRational;
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    use super::{format_rational, parse_rational};

    pub fn serialize<S: Serializer>(v: &Option<Vec<BigRational>>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref()
            .map(|v| v.iter().map(format_rational).collect::<Vec<_>>())
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<BigRational>>, D::Error> {
        let v: Option<Vec<String>> = Option::deserialize(d)?;
        v.map(|v| {
            v.iter()
                .map(|s| parse_rational(s).map_err(D::Error::custom))
                .collect::<Result<Vec<_>, _>>()
        })
        .transpose()
    }
}

// ---------------------------------------------------------------------------
// Polynomials with rational coefficients, ascending order.

pub type RatPoly = Vec<BigRational>;

fn trim(mut p: RatPoly) -> RatPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

pub fn poly_eval(p: &[BigRational], t: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * t + c)
}

pub fn poly_mul(a: &[BigRational], b: &[BigRational]) -> RatPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// Product of `(t - root)^multiplicity` over the given roots.
pub fn poly_from_roots(roots: &[(BigRational, u32)]) -> RatPoly {
    let mut p = vec![BigRational::one()];
    for (r, m) in roots {
        for _ in 0..*m {
            p = poly_mul(&p, &[-r.clone(), BigRational::one()]);
        }
    }
    p
}

pub fn poly_derivative(p: &[BigRational]) -> RatPoly {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
            .collect(),
    )
}

/// Quotient and remainder of polynomial division.
pub fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (RatPoly, RatPoly) {
    let b = trim(b.to_vec());
    assert!(!b.is_empty(), "division by the zero polynomial");
    let mut rem = trim(a.to_vec());
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - b.len() + 1];
    let lead = b.last().unwrap().clone();
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let factor = rem.last().unwrap() / &lead;
        for (i, c) in b.iter().enumerate() {
            rem[shift + i] -= &factor * c;
        }
        quot[shift] = factor;
        rem.pop();
        rem = trim(rem);
    }
    (trim(quot), rem)
}

pub fn poly_gcd(a: &[BigRational], b: &[BigRational]) -> RatPoly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let (_, r) = poly_divrem(&x, &y);
        x = y;
        y = r;
    }
    if let Some(lead) = x.last().cloned() {
        for c in x.iter_mut() {
            *c = &*c / &lead;
        }
    }
    x
}

fn sturm_sequence(g: &[BigRational]) -> Vec<RatPoly> {
    let mut seq = vec![g.to_vec(), poly_derivative(g)];
    loop {
        let n = seq.len();
        if seq[n - 1].is_empty() {
            seq.pop();
            break;
        }
        let (_, r) = poly_divrem(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    seq
}

fn sign_variations(seq: &[RatPoly], t: &BigRational) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for p in seq {
        let v = poly_eval(p, t);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Check `p(t) <= 0` for every `t` in `[a, b]`, exactly.
///
/// Returns `Ok(())` or the rational point where `p` is positive. Distinct
/// roots of the square-free part are isolated with a Sturm sequence; `p` is
/// then evaluated at points separating consecutive roots, which fixes its
/// sign on every root-free gap.
pub fn certify_nonpositive(p: &[BigRational], a: &BigRational, b: &BigRational) -> std::result::Result<(), BigRational> {
    let p = trim(p.to_vec());
    if p.is_empty() {
        return Ok(());
    }
    let mut test_points = vec![a.clone(), b.clone()];
    if p.len() > 1 {
        let dp = poly_derivative(&p);
        let g0 = poly_gcd(&p, &dp);
        let (g, _) = poly_divrem(&p, &g0);
        let seq = sturm_sequence(&g);
        let count = |lo: &BigRational, hi: &BigRational| sign_variations(&seq, lo) - sign_variations(&seq, hi);
        let is_root = |t: &BigRational| poly_eval(&g, t).is_zero();

        // Pull the working interval off any endpoint roots.
        let mut lo = a.clone();
        if is_root(a) {
            let mut step = (b - a) / rat_int(2);
            loop {
                let cand = a + &step;
                if !is_root(&cand) && count(a, &cand) == 0 {
                    lo = cand;
                    break;
                }
                step /= rat_int(2);
            }
            test_points.push(lo.clone());
        }
        let mut hi = b.clone();
        if is_root(b) {
            let mut step = (b - &lo) / rat_int(2);
            loop {
                let cand = b - &step;
                if !is_root(&cand) && count(&cand, b) == 1 {
                    hi = cand;
                    break;
                }
                step /= rat_int(2);
            }
            test_points.push(hi.clone());
        }

        let mut stack = vec![(lo, hi)];
        while let Some((l, h)) = stack.pop() {
            let c = count(&l, &h);
            if c == 0 {
                continue;
            }
            if c == 1 {
                test_points.push(l);
                test_points.push(h);
                continue;
            }
            let mut mid = None;
            for k in 2..64i64 {
                let cand = &l + (&h - &l) / rat_int(k);
                if !is_root(&cand) {
                    mid = Some(cand);
                    break;
                }
            }
            let mid = mid.expect("polynomial has finitely many roots");
            stack.push((l, mid.clone()));
            stack.push((mid, h));
        }
    }
    for t in test_points {
        if poly_eval(&p, &t).is_positive() {
            return Err(t);
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Exact linear algebra.

/// Determinant by fraction-exact Gaussian elimination.
pub fn rational_det(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for c in col..n {
                let v = &f * &a[col][c];
                a[r][c] -= v;
            }
        }
    }
    det
}

/// Inverse by Gauss–Jordan; `None` when singular.
pub fn rational_inverse(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(piv, col);
        let p = a[col][col].clone();
        for c in 0..2 * n {
            a[col][c] = &a[col][c] / &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in 0..2 * n {
                let v = &f * &a[col][c];
                a[r][c] -= v;
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Row-echelon basis of the integer row span of `rows` (Hermite-style
/// reduction with Euclidean steps). Zero rows are dropped.
pub fn integer_row_basis(mut rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        loop {
            let candidates: Vec<usize> = (rank..rows.len()).filter(|&r| !rows[r][c].is_zero()).collect();
            if candidates.is_empty() {
                break;
            }
            let best = *candidates.iter().min_by_key(|&&r| rows[r][c].abs()).unwrap();
            rows.swap(rank, best);
            if candidates.len() == 1 && candidates[0] == best {
                break;
            }
            let pivot = rows[rank][c].clone();
            let mut changed = false;
            for r in rank + 1..rows.len() {
                if rows[r][c].is_zero() {
                    continue;
                }
                let q = rows[r][c].div_floor(&pivot);
                if !q.is_zero() {
                    for k in c..cols {
                        let v = &q * &rows[rank][k];
                        rows[r][k] -= v;
                    }
                    changed = true;
                }
            }
            if !changed && (rank + 1..rows.len()).all(|r| rows[r][c].is_zero()) {
                break;
            }
        }
        if rank < rows.len() && !rows[rank][c].is_zero() {
            if rows[rank][c].is_negative() {
                for k in 0..cols {
                    rows[rank][k] = -rows[rank][k].clone();
                }
            }
            rank += 1;
        }
    }
    rows.truncate(rank);
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_numbers() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-0.25").unwrap(), rat(-1, 4));
        assert_eq!(parse_rational("1.5e2").unwrap(), rat_int(150));
        assert_eq!(parse_rational("2e-3").unwrap(), rat(1, 500));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
        assert_eq!(format_rational(&rat(-6, 4)), "-3/2");
        assert_eq!(format_rational(&rat_int(240)), "240");
        assert_eq!(significant_digits("-7.82646099323767402929927644895"), 30);
        assert_eq!(significant_digits("0.1345"), 4);
    }

    #[test]
    fn polynomial_division_and_gcd() {
        // (t-1)^2 (t+2) and (t-1)(t+3)
        let a = poly_from_roots(&[(rat_int(1), 2), (rat_int(-2), 1)]);
        let b = poly_from_roots(&[(rat_int(1), 1), (rat_int(-3), 1)]);
        assert_eq!(poly_gcd(&a, &b), vec![rat_int(-1), rat_int(1)]);
        let (q, r) = poly_divrem(&a, &b);
        let back = poly_mul(&q, &b);
        let sum: Vec<_> = (0..a.len())
            .map(|i| back.get(i).cloned().unwrap_or_default() + r.get(i).cloned().unwrap_or_default())
            .collect();
        assert_eq!(sum, a);
    }

    #[test]
    fn certifies_sign_with_touching_roots() {
        // -(t+1)(t)^2(t-1/2)^2 <= 0 on [-1, 1], touching zero at 0 and 1/2.
        let mut p = poly_from_roots(&[(rat_int(-1), 1), (rat_int(0), 2), (rat(1, 2), 2)]);
        for c in p.iter_mut() {
            *c = -c.clone();
        }
        assert!(certify_nonpositive(&p, &rat_int(-1), &rat_int(1)).is_ok());
        // (t+1)(t-1/2) is positive beyond 1/2.
        let q = poly_from_roots(&[(rat_int(-1), 1), (rat(1, 2), 1)]);
        assert!(certify_nonpositive(&q, &rat_int(-1), &rat(1, 2)).is_ok());
        assert!(certify_nonpositive(&q, &rat_int(-1), &rat_int(1)).is_err());
        // t^2 - 2 has irrational roots; sign is negative only inside.
        let r = vec![rat_int(-2), rat_int(0), rat_int(1)];
        assert!(certify_nonpositive(&r, &rat_int(-1), &rat_int(1)).is_ok());
        assert!(certify_nonpositive(&r, &rat_int(-1), &rat_int(2)).is_err());
    }

    #[test]
    fn det_inverse_and_row_basis() {
        let m = vec![vec![rat_int(2), rat_int(1)], vec![rat_int(1), rat_int(1)]];
        assert_eq!(rational_det(&m), rat_int(1));
        let inv = rational_inverse(&m).unwrap();
        assert_eq!(inv, vec![vec![rat_int(1), rat_int(-1)], vec![rat_int(-1), rat_int(2)]]);
        let rows = vec![
            vec![BigInt::from(2), BigInt::from(0)],
            vec![BigInt::from(1), BigInt::from(1)],
            vec![BigInt::from(0), BigInt::from(2)],
        ];
        let basis = integer_row_basis(rows);
        assert_eq!(basis.len(), 2);
        let det = &basis[0][0] * &basis[1][1] - &basis[0][1] * &basis[1][0];
        assert_eq!(det.abs(), BigInt::from(2));
    }
}
