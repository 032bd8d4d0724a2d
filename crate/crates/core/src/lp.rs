//! Dense revised simplex solver for small linear programs.
//!
//! Programs are converted to the standard form `min c^T z, A z = b, z >= 0`
//! (bound shifts, free-variable splitting, slacks, row and column scaling),
//! then solved by a two-phase revised simplex with an explicit basis
//! inverse. Entering columns follow Dantzig's rule; after a streak of
//! degenerate pivots the solver switches to Bland's rule until progress
//! resumes. All tie-breaking is by index, so identical inputs give identical
//! pivots.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<f64>,
    pub sense: Sense,
    pub constraints: Vec<Constraint>,
    /// Per-variable `(lower, upper)`; infinities allowed.
    pub bounds: Vec<(f64, f64)>,
}

impl LinearProgram {
    /// A program with zero objective and every variable bounded below by 0.
    pub fn new(num_vars: usize, sense: Sense) -> Self {
        Self {
            num_vars,
            objective: vec![0.0; num_vars],
            sense,
            constraints: Vec::new(),
            bounds: vec![(0.0, f64::INFINITY); num_vars],
        }
    }

    pub fn set_objective(&mut self, c: Vec<f64>) {
        self.objective = c;
    }

    pub fn set_bounds(&mut self, var: usize, lower: f64, upper: f64) {
        self.bounds[var] = (lower, upper);
    }

    pub fn set_free(&mut self, var: usize) {
        self.bounds[var] = (f64::NEG_INFINITY, f64::INFINITY);
    }

    pub fn add_constraint(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    pub fn validate(&self) -> Result<()> {
        if self.objective.len() != self.num_vars {
            return Err(Error::Lp(format!(
                "objective has {} coefficients for {} variables",
                self.objective.len(),
                self.num_vars
            )));
        }
        if self.bounds.len() != self.num_vars {
            return Err(Error::Lp("bounds length differs from variable count".into()));
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(Error::Lp("objective coefficients must be finite".into()));
        }
        for (i, row) in self.constraints.iter().enumerate() {
            if row.coeffs.len() != self.num_vars {
                return Err(Error::Lp(format!(
                    "row {i} has {} coefficients for {} variables",
                    row.coeffs.len(),
                    self.num_vars
                )));
            }
            if row.coeffs.iter().any(|c| !c.is_finite()) || !row.rhs.is_finite() {
                return Err(Error::Lp(format!("row {i} has non-finite entries")));
            }
        }
        for (j, &(lo, hi)) in self.bounds.iter().enumerate() {
            if lo.is_nan() || hi.is_nan() || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
                return Err(Error::Lp(format!("variable {j} has invalid bounds")));
            }
        }
        Ok(())
    }

    /// Row-oriented text dump:
    ///
    /// ```text
    /// vars 2
    /// sense min
    /// objective 1 1
    /// bound 0 0 inf
    /// row >= 4 : 1 2
    /// ```
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "vars {}", self.num_vars);
        let sense = match self.sense {
            Sense::Minimize => "min",
            Sense::Maximize => "max",
        };
        let _ = writeln!(out, "sense {sense}");
        let _ = writeln!(out, "objective {}", join(&self.objective));
        for (j, (lo, hi)) in self.bounds.iter().enumerate() {
            let _ = writeln!(out, "bound {j} {} {}", fmt_num(*lo), fmt_num(*hi));
        }
        for row in &self.constraints {
            let _ = writeln!(out, "row {} {} : {}", row.relation.symbol(), fmt_num(row.rhs), join(&row.coeffs));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |line: &str| Error::Parse(format!("bad LP line: {line:?}"));
        let num = |s: &str| -> Result<f64> {
            match s {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                _ => s.parse().map_err(|_| Error::Parse(format!("bad number {s:?}"))),
            }
        };
        let mut lp: Option<LinearProgram> = None;
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let mut parts = line.split_whitespace();
            match parts.next() {
                Some("vars") => {
                    let n: usize = parts.next().and_then(|s| s.parse().ok()).ok_or_else(|| bad(line))?;
                    lp = Some(LinearProgram::new(n, Sense::Minimize));
                }
                Some(key) => {
                    let lp = lp.as_mut().ok_or_else(|| bad(line))?;
                    match key {
                        "sense" => {
                            lp.sense = match parts.next() {
                                Some("min") => Sense::Minimize,
                                Some("max") => Sense::Maximize,
                                _ => return Err(bad(line)),
                            }
                        }
                        "objective" => lp.objective = parts.map(num).collect::<Result<_>>()?,
                        "bound" => {
                            let j: usize = parts.next().and_then(|s| s.parse().ok()).ok_or_else(|| bad(line))?;
                            let lo = num(parts.next().ok_or_else(|| bad(line))?)?;
                            let hi = num(parts.next().ok_or_else(|| bad(line))?)?;
                            if j >= lp.num_vars {
                                return Err(bad(line));
                            }
                            lp.bounds[j] = (lo, hi);
                        }
                        "row" => {
                            let relation = match parts.next() {
                                Some("<=") => Relation::Le,
                                Some("=") => Relation::Eq,
                                Some(">=") => Relation::Ge,
                                _ => return Err(bad(line)),
                            };
                            let rhs = num(parts.next().ok_or_else(|| bad(line))?)?;
                            if parts.next() != Some(":") {
                                return Err(bad(line));
                            }
                            let coeffs = parts.map(num).collect::<Result<_>>()?;
                            lp.add_constraint(coeffs, relation, rhs);
                        }
                        _ => return Err(bad(line)),
                    }
                }
                None => {}
            }
        }
        let lp = lp.ok_or_else(|| Error::Parse("missing 'vars' line".into()))?;
        lp.validate()?;
        Ok(lp)
    }
}

fn fmt_num(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x:e}")
    }
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| fmt_num(*x)).collect::<Vec<_>>().join(" ")
}

/// Solver tolerances and limits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverSettings {
    /// Primal feasibility tolerance (scaled rows). Default 1e-9.
    pub feasibility_tol: f64,
    /// Smallest pivot magnitude accepted in the ratio test. Default 1e-11.
    pub pivot_tol: f64,
    /// Reduced-cost tolerance for optimality. Default 1e-9.
    pub optimality_tol: f64,
    pub max_iterations: usize,
    /// Pivots between fresh factorizations of the basis.
    pub refactor_interval: usize,
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub degeneracy_streak: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            feasibility_tol: 1e-9,
            pivot_tol: 1e-11,
            optimality_tol: 1e-9,
            max_iterations: 100_000,
            refactor_interval: 100,
            degeneracy_streak: 50,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    pub status: LpStatus,
    pub values: Vec<f64>,
    pub objective: f64,
    /// Sensitivity of the optimal objective to each constraint's right-hand side.
    pub duals: Vec<f64>,
    pub dual_objective: f64,
    pub iterations: usize,
    /// Standard-form basis at termination, for reproducibility checks.
    pub basis: Vec<usize>,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    /// `max_i` violation of the original constraints and bounds by `values`.
    pub fn primal_residual(&self, lp: &LinearProgram) -> f64 {
        let mut worst: f64 = 0.0;
        for row in &lp.constraints {
            let ax: f64 = row.coeffs.iter().zip(&self.values).map(|(a, x)| a * x).sum();
            let scale = 1.0 + row.rhs.abs();
            let v = match row.relation {
                Relation::Le => (ax - row.rhs).max(0.0),
                Relation::Ge => (row.rhs - ax).max(0.0),
                Relation::Eq => (ax - row.rhs).abs(),
            };
            worst = worst.max(v / scale);
        }
        for (x, (lo, hi)) in self.values.iter().zip(&lp.bounds) {
            worst = worst.max((lo - x).max(0.0)).max((x - hi).max(0.0));
        }
        worst
    }

    /// `max_i |dual_i * slack_i|` over the inequality rows.
    pub fn complementary_slackness(&self, lp: &LinearProgram) -> f64 {
        lp.constraints
            .iter()
            .zip(&self.duals)
            .map(|(row, y)| {
                let ax: f64 = row.coeffs.iter().zip(&self.values).map(|(a, x)| a * x).sum();
                (y * (row.rhs - ax)).abs()
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy)]
enum VarMap {
    Shift { col: usize, lower: f64 },
    Flip { col: usize, upper: f64 },
    Split { pos: usize, neg: usize },
}

struct Standard {
    // Sparse columns of the scaled, sign-fixed matrix (structural, then slack, then artificial).
    columns: Vec<Vec<(usize, f64)>>,
    cost: Vec<f64>,
    rhs: Vec<f64>,
    structural: usize,
    first_artificial: usize,
    initial_basis: Vec<usize>,
    // Factor mapping scaled standard row duals back to original constraints.
    row_factor: Vec<f64>,
    col_scale: Vec<f64>,
    var_map: Vec<VarMap>,
    cost_offset: f64,
    original_rows: usize,
}

fn build_standard(lp: &LinearProgram) -> Standard {
    let mut var_map = Vec::with_capacity(lp.num_vars);
    let mut structural = 0;
    let mut upper_rows: Vec<(usize, f64)> = Vec::new();
    for &(lo, hi) in &lp.bounds {
        if lo.is_finite() {
            var_map.push(VarMap::Shift { col: structural, lower: lo });
            if hi.is_finite() {
                upper_rows.push((structural, hi - lo));
            }
            structural += 1;
        } else if hi.is_finite() {
            var_map.push(VarMap::Flip { col: structural, upper: hi });
            structural += 1;
        } else {
            var_map.push(VarMap::Split {
                pos: structural,
                neg: structural + 1,
            });
            structural += 2;
        }
    }

    let mut cost = vec![0.0; structural];
    let sign = if lp.sense == Sense::Maximize { -1.0 } else { 1.0 };
    let mut cost_offset = 0.0;
    let substitute = |coeffs: &[f64], dense: &mut Vec<f64>| -> f64 {
        let mut shift = 0.0;
        for (j, &a) in coeffs.iter().enumerate() {
            match var_map[j] {
                VarMap::Shift { col, lower } => {
                    dense[col] += a;
                    shift += a * lower;
                }
                VarMap::Flip { col, upper } => {
                    dense[col] -= a;
                    shift += a * upper;
                }
                VarMap::Split { pos, neg } => {
                    dense[pos] += a;
                    dense[neg] -= a;
                }
            }
        }
        shift
    };
    {
        let mut dense = vec![0.0; structural];
        let shift = substitute(&lp.objective, &mut dense);
        for (c, d) in cost.iter_mut().zip(&dense) {
            *c = sign * d;
        }
        cost_offset += sign * shift;
    }

    // Rows: (dense coefficients, relation, rhs)
    let mut rows: Vec<(Vec<f64>, Relation, f64)> = Vec::with_capacity(lp.constraints.len() + upper_rows.len());
    for row in &lp.constraints {
        let mut dense = vec![0.0; structural];
        let shift = substitute(&row.coeffs, &mut dense);
        rows.push((dense, row.relation, row.rhs - shift));
    }
    for &(col, ub) in &upper_rows {
        let mut dense = vec![0.0; structural];
        dense[col] = 1.0;
        rows.push((dense, Relation::Le, ub));
    }

    let m = rows.len();
    let mut row_factor = vec![1.0; m];
    for (i, (dense, _, rhs)) in rows.iter_mut().enumerate() {
        let s = dense.iter().fold(0.0f64, |acc, a| acc.max(a.abs()));
        let s = if s > 0.0 { s } else { 1.0 };
        for a in dense.iter_mut() {
            *a /= s;
        }
        *rhs /= s;
        row_factor[i] = 1.0 / s;
    }
    let mut col_scale = vec![1.0; structural];
    for (j, cs) in col_scale.iter_mut().enumerate() {
        let s = rows.iter().fold(0.0f64, |acc, r| acc.max(r.0[j].abs()));
        if s > 0.0 {
            *cs = s;
        }
    }
    for (dense, _, _) in rows.iter_mut() {
        for (a, s) in dense.iter_mut().zip(&col_scale) {
            *a /= s;
        }
    }
    for (c, s) in cost.iter_mut().zip(&col_scale) {
        *c /= s;
    }

    let mut columns: Vec<Vec<(usize, f64)>> = vec![Vec::new(); structural];
    let mut rhs = vec![0.0; m];
    let mut flips = vec![1.0; m];
    for (i, (_, _, b)) in rows.iter().enumerate() {
        if *b < 0.0 {
            flips[i] = -1.0;
        }
        rhs[i] = flips[i] * b;
    }
    for (i, (dense, _, _)) in rows.iter().enumerate() {
        for (j, &a) in dense.iter().enumerate() {
            if a != 0.0 {
                columns[j].push((i, flips[i] * a));
            }
        }
    }
    let mut initial_basis = vec![usize::MAX; m];
    for (i, (_, rel, _)) in rows.iter().enumerate() {
        let coef = match rel {
            Relation::Le => 1.0,
            Relation::Ge => -1.0,
            Relation::Eq => continue,
        } * flips[i];
        columns.push(vec![(i, coef)]);
        cost.push(0.0);
        if coef > 0.0 {
            initial_basis[i] = columns.len() - 1;
        }
    }
    let first_artificial = columns.len();
    for (i, slot) in initial_basis.iter_mut().enumerate() {
        if *slot == usize::MAX {
            columns.push(vec![(i, 1.0)]);
            cost.push(0.0);
            *slot = columns.len() - 1;
        }
    }
    for (f, flip) in row_factor.iter_mut().zip(&flips) {
        *f *= flip;
    }
    Standard {
        columns,
        cost,
        rhs,
        structural,
        first_artificial,
        initial_basis,
        row_factor,
        col_scale,
        var_map,
        cost_offset,
        original_rows: lp.constraints.len(),
    }
}

struct Simplex<'a> {
    std: &'a Standard,
    settings: SolverSettings,
    m: usize,
    head: Vec<usize>,
    is_basic: Vec<bool>,
    binv: Vec<f64>,
    x_b: Vec<f64>,
    iterations: usize,
    since_refactor: usize,
}

enum PhaseOutcome {
    Optimal,
    Unbounded,
    IterationLimit,
}

impl<'a> Simplex<'a> {
    fn new(std: &'a Standard, settings: SolverSettings) -> Self {
        let m = std.rhs.len();
        let mut binv = vec![0.0; m * m];
        for i in 0..m {
            binv[i * m + i] = 1.0;
        }
        let mut is_basic = vec![false; std.columns.len()];
        for &h in &std.initial_basis {
            is_basic[h] = true;
        }
        // The initial basis columns are unit vectors with coefficient +1.
        Self {
            std,
            settings,
            m,
            head: std.initial_basis.clone(),
            is_basic,
            binv,
            x_b: std.rhs.clone(),
            iterations: 0,
            since_refactor: 0,
        }
    }

    fn is_artificial(&self, j: usize) -> bool {
        j >= self.std.first_artificial
    }

    fn column_times_binv(&self, j: usize) -> Vec<f64> {
        let m = self.m;
        let mut u = vec![0.0; m];
        for &(r, v) in &self.std.columns[j] {
            for (i, ui) in u.iter_mut().enumerate() {
                *ui += self.binv[i * m + r] * v;
            }
        }
        u
    }

    fn duals(&self, cost: &[f64]) -> Vec<f64> {
        let m = self.m;
        let mut y = vec![0.0; m];
        for (i, &h) in self.head.iter().enumerate() {
            let c = cost[h];
            if c != 0.0 {
                let row = &self.binv[i * m..(i + 1) * m];
                for (yj, b) in y.iter_mut().zip(row) {
                    *yj += c * b;
                }
            }
        }
        // One step of iterative refinement against the basic columns.
        for (i, &h) in self.head.iter().enumerate() {
            let r = cost[h] - self.std.columns[h].iter().map(|&(k, v)| y[k] * v).sum::<f64>();
            if r != 0.0 {
                let row = &self.binv[i * m..(i + 1) * m];
                for (yj, b) in y.iter_mut().zip(row) {
                    *yj += r * b;
                }
            }
        }
        y
    }

    /// Refine `x_b` against `B x_b = rhs`.
    fn refine_primal(&mut self) {
        let m = self.m;
        let mut r = self.std.rhs.clone();
        for (&h, &x) in self.head.iter().zip(&self.x_b) {
            for &(k, v) in &self.std.columns[h] {
                r[k] -= v * x;
            }
        }
        for i in 0..m {
            let row = &self.binv[i * m..(i + 1) * m];
            self.x_b[i] += row.iter().zip(&r).map(|(b, ri)| b * ri).sum::<f64>();
        }
    }

    fn refactor(&mut self) -> Result<()> {
        let m = self.m;
        // Dense B, then Gauss-Jordan with partial pivoting.
        let mut a = vec![0.0; m * 2 * m];
        for (i, &h) in self.head.iter().enumerate() {
            for &(r, v) in &self.std.columns[h] {
                a[r * 2 * m + i] = v;
            }
        }
        for i in 0..m {
            a[i * 2 * m + m + i] = 1.0;
        }
        for col in 0..m {
            let piv = (col..m)
                .max_by(|&x, &y| a[x * 2 * m + col].abs().total_cmp(&a[y * 2 * m + col].abs()))
                .unwrap();
            if a[piv * 2 * m + col].abs() < 1e-14 {
                return Err(Error::Lp("basis matrix became singular".into()));
            }
            if piv != col {
                for k in 0..2 * m {
                    a.swap(piv * 2 * m + k, col * 2 * m + k);
                }
            }
            let p = a[col * 2 * m + col];
            for k in 0..2 * m {
                a[col * 2 * m + k] /= p;
            }
            for r in 0..m {
                if r == col {
                    continue;
                }
                let f = a[r * 2 * m + col];
                if f != 0.0 {
                    for k in 0..2 * m {
                        a[r * 2 * m + k] -= f * a[col * 2 * m + k];
                    }
                }
            }
        }
        for i in 0..m {
            self.binv[i * m..(i + 1) * m].copy_from_slice(&a[i * 2 * m + m..(i + 1) * 2 * m]);
        }
        for i in 0..m {
            let row = &self.binv[i * m..(i + 1) * m];
            self.x_b[i] = row.iter().zip(&self.std.rhs).map(|(b, r)| b * r).sum();
        }
        self.refine_primal();
        for x in self.x_b.iter_mut() {
            if *x < 0.0 && *x > -self.settings.feasibility_tol {
                *x = 0.0;
            }
        }
        self.since_refactor = 0;
        Ok(())
    }

    fn pivot(&mut self, r: usize, q: usize, u: &[f64]) {
        let m = self.m;
        let theta = self.x_b[r] / u[r];
        for (i, x) in self.x_b.iter_mut().enumerate() {
            if i != r {
                *x -= theta * u[i];
                if *x < 0.0 && *x > -self.settings.feasibility_tol {
                    *x = 0.0;
                }
            }
        }
        self.x_b[r] = theta;
        let ur = u[r];
        for k in 0..m {
            self.binv[r * m + k] /= ur;
        }
        let pivot_row: Vec<f64> = self.binv[r * m..(r + 1) * m].to_vec();
        for (i, &ui) in u.iter().enumerate() {
            if i == r || ui == 0.0 {
                continue;
            }
            let row = &mut self.binv[i * m..(i + 1) * m];
            for (b, p) in row.iter_mut().zip(&pivot_row) {
                *b -= ui * p;
            }
        }
        self.is_basic[self.head[r]] = false;
        self.is_basic[q] = true;
        self.head[r] = q;
        self.iterations += 1;
        self.since_refactor += 1;
    }

    fn run_phase(&mut self, cost: &[f64], allow_artificial: bool) -> Result<PhaseOutcome> {
        let mut degenerate = 0usize;
        let mut bland = false;
        let ncols = self.std.columns.len();
        loop {
            if self.iterations >= self.settings.max_iterations {
                return Ok(PhaseOutcome::IterationLimit);
            }
            if self.since_refactor >= self.settings.refactor_interval {
                self.refactor()?;
            }
            let y = self.duals(cost);
            let mut entering: Option<(usize, f64)> = None;
            for j in 0..ncols {
                if self.is_basic[j] || (!allow_artificial && self.is_artificial(j)) {
                    continue;
                }
                let d = cost[j] - self.std.columns[j].iter().map(|&(r, v)| y[r] * v).sum::<f64>();
                if d < -self.settings.optimality_tol {
                    if bland {
                        entering = Some((j, d));
                        break;
                    }
                    if entering.map_or(true, |(_, best)| d < best) {
                        entering = Some((j, d));
                    }
                }
            }
            let Some((q, _)) = entering else {
                return Ok(PhaseOutcome::Optimal);
            };
            let u = self.column_times_binv(q);

            // Ratio test; artificials stuck in the basis at zero leave first.
            let mut leave: Option<(usize, f64)> = None;
            if !allow_artificial {
                for i in 0..self.m {
                    if self.is_artificial(self.head[i]) && u[i].abs() > self.settings.pivot_tol {
                        leave = Some((i, 0.0));
                        break;
                    }
                }
            }
            if leave.is_none() {
                for i in 0..self.m {
                    if u[i] <= self.settings.pivot_tol {
                        continue;
                    }
                    let ratio = self.x_b[i].max(0.0) / u[i];
                    match leave {
                        None => leave = Some((i, ratio)),
                        Some((li, lr)) => {
                            let tie = (ratio - lr).abs() <= 1e-12 * (1.0 + lr.abs());
                            let better = if tie {
                                if bland {
                                    self.head[i] < self.head[li]
                                } else {
                                    u[i] > u[li]
                                }
                            } else {
                                ratio < lr
                            };
                            if better {
                                leave = Some((i, ratio));
                            }
                        }
                    }
                }
            }
            let Some((r, ratio)) = leave else {
                return Ok(PhaseOutcome::Unbounded);
            };
            if ratio <= 1e-12 {
                degenerate += 1;
                if degenerate > self.settings.degeneracy_streak {
                    bland = true;
                }
            } else {
                degenerate = 0;
                bland = false;
            }
            if self.is_artificial(self.head[r]) && !allow_artificial {
                // Force the artificial out at its (zero) level.
                self.x_b[r] = 0.0;
            }
            self.pivot(r, q, &u);
        }
    }

    fn drive_out_artificials(&mut self) {
        for r in 0..self.m {
            if !self.is_artificial(self.head[r]) {
                continue;
            }
            let row: Vec<f64> = self.binv[r * self.m..(r + 1) * self.m].to_vec();
            let mut best: Option<(usize, f64)> = None;
            for j in 0..self.std.first_artificial {
                if self.is_basic[j] {
                    continue;
                }
                let v: f64 = self.std.columns[j].iter().map(|&(i, a)| row[i] * a).sum();
                if v.abs() > 1e-9 && best.map_or(true, |(_, b)| v.abs() > b.abs()) {
                    best = Some((j, v));
                }
            }
            if let Some((q, _)) = best {
                let u = self.column_times_binv(q);
                self.x_b[r] = 0.0;
                self.pivot(r, q, &u);
            }
        }
    }
}

/// Solve a linear program.
pub fn solve(lp: &LinearProgram, settings: &SolverSettings) -> Result<LpSolution> {
    lp.validate()?;
    let std = build_standard(lp);
    let mut sx = Simplex::new(&std, *settings);

    let has_artificial = std.first_artificial < std.columns.len();
    if has_artificial {
        let mut phase1 = vec![0.0; std.columns.len()];
        for c in phase1.iter_mut().skip(std.first_artificial) {
            *c = 1.0;
        }
        match sx.run_phase(&phase1, true)? {
            PhaseOutcome::IterationLimit => return Ok(finish(lp, &std, &sx, LpStatus::IterationLimit)),
            PhaseOutcome::Unbounded => return Err(Error::Lp("phase one reported unbounded".into())),
            PhaseOutcome::Optimal => {}
        }
        sx.refactor()?;
        let infeasibility: f64 = sx
            .head
            .iter()
            .zip(&sx.x_b)
            .filter(|(h, _)| **h >= std.first_artificial)
            .map(|(_, x)| x.abs())
            .sum();
        let scale = 1.0 + std.rhs.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        if infeasibility > settings.feasibility_tol * scale * 10.0 {
            return Ok(finish(lp, &std, &sx, LpStatus::Infeasible));
        }
        sx.drive_out_artificials();
    }
    let status = match sx.run_phase(&std.cost, false)? {
        PhaseOutcome::Optimal => LpStatus::Optimal,
        PhaseOutcome::Unbounded => LpStatus::Unbounded,
        PhaseOutcome::IterationLimit => LpStatus::IterationLimit,
    };
    if status == LpStatus::Optimal {
        sx.refactor()?;
        // A fresh factorization can expose a few remaining improving columns.
        if let PhaseOutcome::Optimal = sx.run_phase(&std.cost, false)? {
        } else {
            return Ok(finish(lp, &std, &sx, LpStatus::IterationLimit));
        }
    }
    Ok(finish(lp, &std, &sx, status))
}

fn finish(lp: &LinearProgram, std: &Standard, sx: &Simplex, status: LpStatus) -> LpSolution {
    let mut z = vec![0.0; std.columns.len()];
    for (&h, &x) in sx.head.iter().zip(&sx.x_b) {
        z[h] = x;
    }
    let xs: Vec<f64> = (0..std.structural).map(|j| z[j] / std.col_scale[j]).collect();
    let values: Vec<f64> = std
        .var_map
        .iter()
        .map(|vm| match *vm {
            VarMap::Shift { col, lower } => lower + xs[col],
            VarMap::Flip { col, upper } => upper - xs[col],
            VarMap::Split { pos, neg } => xs[pos] - xs[neg],
        })
        .collect();
    let objective: f64 = lp.objective.iter().zip(&values).map(|(c, x)| c * x).sum();
    let sign = if lp.sense == Sense::Maximize { -1.0 } else { 1.0 };
    let y = sx.duals(&std.cost);
    let duals: Vec<f64> = (0..std.original_rows).map(|i| sign * y[i] * std.row_factor[i]).collect();
    let dual_std: f64 = y.iter().zip(&std.rhs).map(|(a, b)| a * b).sum();
    let dual_objective = sign * (dual_std + std.cost_offset);
    LpSolution {
        status,
        values,
        objective,
        duals,
        dual_objective,
        iterations: sx.iterations,
        basis: sx.head.clone(),
    }
}
