use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::basis::LatticeBasis;
use super::golay::golay_generate;
use crate::error::{Error, Result};
use crate::exact::{integer_row_basis, rat, rat_int};

/// Built-in lattices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum LatticeName {
    Zn(usize),
    Dn(usize),
    An(usize),
    E6,
    E7,
    E8,
    Leech,
}

impl LatticeName {
    /// Parse names such as `z5`, `d4`, `a2`, `e8`, `leech`.
    pub fn parse(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let unknown = || Error::UnknownName(s.to_string());
        match lower.as_str() {
            "e6" => return Ok(Self::E6),
            "e7" => return Ok(Self::E7),
            "e8" => return Ok(Self::E8),
            "leech" | "lambda24" => return Ok(Self::Leech),
            _ => {}
        }
        let (head, rest) = lower.split_at(1.min(lower.len()));
        let rest = rest.trim_start_matches('n').trim_matches(|c| c == '(' || c == ')');
        let n: usize = rest.parse().map_err(|_| unknown())?;
        match head {
            "z" => Ok(Self::Zn(n)),
            "d" => Ok(Self::Dn(n)),
            "a" => Ok(Self::An(n)),
            _ => Err(unknown()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Zn(n) => format!("Z{n}"),
            Self::Dn(n) => format!("D{n}"),
            Self::An(n) => format!("A{n}"),
            Self::E6 => "E6".into(),
            Self::E7 => "E7".into(),
            Self::E8 => "E8".into(),
            Self::Leech => "Leech".into(),
        }
    }
}

pub fn construct(name: &LatticeName) -> Result<LatticeBasis> {
    let l = match *name {
        LatticeName::Zn(n) => zn(n)?,
        LatticeName::Dn(n) => dn(n)?,
        LatticeName::An(n) => an(n)?,
        LatticeName::E6 => from_diagram(6, &[(0, 2), (2, 3), (3, 4), (4, 5), (1, 3)])?,
        LatticeName::E7 => from_diagram(7, &[(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 3)])?,
        LatticeName::E8 => e8()?,
        LatticeName::Leech => leech()?,
    };
    Ok(l.named(name.label()))
}

/// Parse a name and construct it.
pub fn construct_named(name: &str) -> Result<LatticeBasis> {
    construct(&LatticeName::parse(name)?)
}

fn identity_rows(n: usize) -> Vec<Vec<BigRational>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { rat_int(1) } else { rat_int(0) }).collect())
        .collect()
}

fn zn(n: usize) -> Result<LatticeBasis> {
    if n == 0 {
        return Err(Error::Domain("Z^n needs n >= 1".into()));
    }
    LatticeBasis::from_rational_rows(identity_rows(n))
}

/// `D_n`: integer vectors with even coordinate sum, basis `{2e_1, e_i - e_1}`.
fn dn_rows(n: usize) -> Vec<Vec<BigRational>> {
    let mut rows = identity_rows(n);
    rows[0][0] = rat_int(2);
    for row in rows.iter_mut().skip(1) {
        row[0] = rat_int(-1);
    }
    rows
}

fn dn(n: usize) -> Result<LatticeBasis> {
    if n < 3 {
        return Err(Error::Domain("D_n needs n >= 3".into()));
    }
    LatticeBasis::from_rational_rows(dn_rows(n))
}

/// `E_8 = D_8 ∪ (D_8 + (1/2, ..., 1/2))`: the `D_8` basis with `e_8 - e_1`
/// replaced by the glue vector.
fn e8() -> Result<LatticeBasis> {
    let mut rows = dn_rows(8);
    rows[7] = vec![rat(1, 2); 8];
    LatticeBasis::from_rational_rows(rows)
}

/// Lattice with Gram matrix `2I - adjacency` of a simply-laced diagram.
fn from_diagram(n: usize, edges: &[(usize, usize)]) -> Result<LatticeBasis> {
    let mut g = vec![vec![BigRational::zero(); n]; n];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = rat_int(2);
    }
    for &(a, b) in edges {
        g[a][b] = rat_int(-1);
        g[b][a] = rat_int(-1);
    }
    LatticeBasis::from_exact_gram(g)
}

fn an(n: usize) -> Result<LatticeBasis> {
    if n == 0 {
        return Err(Error::Domain("A_n needs n >= 1".into()));
    }
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    from_diagram(n, &edges)
}

/// Generators of the Leech lattice scaled by `sqrt(8)`, as integer vectors:
/// twice the Golay generators, `4(e_0 + e_i)`, `4(e_0 - e_1)`, and
/// `(-3, 1, ..., 1)`.
pub fn leech_scaled_generators() -> Vec<Vec<BigInt>> {
    let code = golay_generate();
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for g in code.generators {
        rows.push((0..24).map(|i| BigInt::from(2 * ((g >> i) & 1) as i64)).collect());
    }
    for i in 1..24 {
        let mut r = vec![BigInt::zero(); 24];
        r[0] = BigInt::from(4);
        r[i] = BigInt::from(4);
        rows.push(r);
    }
    let mut r = vec![BigInt::zero(); 24];
    r[0] = BigInt::from(4);
    r[1] = BigInt::from(-4);
    rows.push(r);
    let mut r = vec![BigInt::from(1); 24];
    r[0] = BigInt::from(-3);
    rows.push(r);
    rows
}

fn leech() -> Result<LatticeBasis> {
    let basis = integer_row_basis(leech_scaled_generators());
    if basis.len() != 24 {
        return Err(Error::Domain("Leech generators do not span R^24".into()));
    }
    let s = 8f64.sqrt();
    let rows: Vec<Vec<f64>> = basis
        .iter()
        .map(|r| r.iter().map(|x| x.to_string().parse::<f64>().unwrap() / s).collect())
        .collect();
    let eight = BigRational::from_integer(BigInt::from(8));
    let gram: Vec<Vec<BigRational>> = basis
        .iter()
        .map(|a| {
            basis
                .iter()
                .map(|b| BigRational::from_integer(a.iter().zip(b).map(|(x, y)| x * y).sum::<BigInt>()) / &eight)
                .collect()
        })
        .collect();
    LatticeBasis::with_exact_gram(rows, gram)
}

/// Catalog lattice with the densest known packing in dimension `n`, for
/// `n` in `1..=8` or `24`.
pub fn best_known_lattice(n: usize) -> Result<LatticeBasis> {
    let name = match n {
        1 => LatticeName::Zn(1),
        2 => LatticeName::An(2),
        3 => LatticeName::Dn(3),
        4 => LatticeName::Dn(4),
        5 => LatticeName::Dn(5),
        6 => LatticeName::E6,
        7 => LatticeName::E7,
        8 => LatticeName::E8,
        24 => LatticeName::Leech,
        _ => return Err(Error::Capability(format!("no catalog lattice for dimension {n}"))),
    };
    construct(&name)
}
