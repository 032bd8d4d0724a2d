use std::path::Path;

use lpbounds::codes::{
    catalog, check_delsarte, design_strength, distance_distribution, energy, gegenbauer_moments, min_angle, CodeName,
    PotentialSpec, SphericalCode, DEFAULT_CLUSTER_TOL,
};
use lpbounds::euclid_lp::{
    density_bound, density_table, optimize_density_bound, periodic_check, poisson_check, taylor_report,
    trivial_bound, DensityRow, PoissonInput, RadialFunction,
};
use lpbounds::exact::parse_rational;
use lpbounds::lattices::{
    construct_named, dual, find_integer_relation, packing_density, shortest_vectors_with, EnumerationSettings,
    LatticeBasis, PreciseReal,
};
use lpbounds::minimize::{
    five_point_crossover, five_point_experiment, greedy_saturate_torus, minimize_energy, FivePointRecord,
    MinimizeSettings, SaturationSettings,
};
use lpbounds::sphere_lp::{
    kissing_certificate, optimize_code_bound, optimize_energy_bound, sharpness_check, verify_certificate,
    CertificateContext, SphereCertificate,
};
use serde_json::{json, Value};

use crate::{
    BoundCommand, Cli, CodeBoundArgs, CodeCommand, CodeSource, Command, EnergyBoundArgs, EuclidArgs, Failure,
    LatticeCommand, LatticeSource, Output, PoissonArgs, RelationArgs,
};

type Res = Result<Output, Failure>;

const SPHERE_DEGREE: usize = 20;
const SPHERE_GRID: usize = 1000;
const EUCLID_DEGREE: usize = 13;
const EUCLID_GRID: usize = 300;
/// Verification grids are this many times finer than the LP grid.
const CHECK_FACTOR: usize = 10;
const DESIGN_DEGREE: usize = 20;
const POISSON_TOL: f64 = 1e-9;

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("result serializes")
}

fn ok(value: Value) -> Res {
    Ok(Output::Json { value, passed: true })
}

fn merge(mut a: Value, b: Value) -> Value {
    if let (Some(a), Value::Object(b)) = (a.as_object_mut(), b) {
        a.extend(b);
    }
    a
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_lattice(src: &LatticeSource) -> Result<LatticeBasis, Failure> {
    match (&src.name, &src.file) {
        (Some(name), _) => Ok(construct_named(name)?),
        (None, Some(path)) => {
            let stem = path.file_stem().map(|s| s.to_string_lossy().to_string()).unwrap_or_default();
            Ok(LatticeBasis::from_text(&read(path)?)?.named(stem))
        }
        (None, None) => Err(Failure::Input("give --name or --file".into())),
    }
}

fn load_code(src: &CodeSource) -> Result<SphericalCode, Failure> {
    match (&src.name, &src.file) {
        (Some(name), _) => Ok(catalog(&CodeName::parse(name)?)?),
        (None, Some(path)) => Ok(SphericalCode::from_text(&read(path)?)?),
        (None, None) => Err(Failure::Input("give --name or --file".into())),
    }
}

/// Exact integers become JSON integers, anything else stays a `"p/q"` string.
fn exact_number(s: &str) -> Value {
    s.parse::<i64>().map(Value::from).unwrap_or_else(|_| Value::from(s))
}

fn grid_for(cli: &Cli, default: usize, degree: usize) -> usize {
    cli.grid.unwrap_or(default.max(10 * degree))
}

pub fn dispatch(cli: &Cli) -> Res {
    match &cli.command {
        Command::Lattice(c) => lattice(c),
        Command::Relation(a) => relation(cli, a),
        Command::Poisson(a) => poisson(cli, a),
        Command::Bound(BoundCommand::Code(a)) => bound_code(cli, a),
        Command::Bound(BoundCommand::Energy(a)) => bound_energy(cli, a),
        Command::Bound(BoundCommand::Euclid(a)) => bound_euclid(cli, a),
        Command::Bound(BoundCommand::Trivial(a)) => ok(to_value(&trivial_bound(a.n)?)),
        Command::Kissing(a) => kissing(a.n),
        Command::Table(a) => table(cli, &a.dims),
        Command::Minimize(a) => {
            let f = PotentialSpec::parse(&a.potential)?;
            let mut settings = MinimizeSettings {
                restarts: a.restarts,
                max_iterations: a.max_iterations,
                seed: cli.seed,
                ..MinimizeSettings::default()
            };
            if let Some(t) = cli.tol {
                settings.gradient_tol = t;
            }
            let r = minimize_energy(a.n, a.count, &f, &settings)?;
            ok(merge(json!({ "potential": f.label() }), to_value(&r)))
        }
        Command::FivePoint(a) => five_point(&a.s, &a.bracket),
        Command::Saturate(a) => {
            let settings = SaturationSettings {
                seed: cli.seed,
                patience: a.patience,
                probe_slack: a.slack,
            };
            let p = greedy_saturate_torus(a.n, a.edge, &settings)?;
            let min_distance = p.min_distance();
            ok(merge(to_value(&p), json!({ "min_distance": min_distance })))
        }
        Command::Design(src) => {
            let code = load_code(src)?;
            let k_max = cli.degree.unwrap_or(DESIGN_DEGREE);
            let strength = design_strength(&code, k_max)?;
            let moments = gegenbauer_moments(&code, k_max)?;
            ok(json!({
                "dimension": code.dimension(),
                "size": code.len(),
                "strength": strength,
                "checked_to_degree": k_max,
                "moments": moments,
            }))
        }
        Command::Code(CodeCommand::Info(a)) => {
            let code = load_code(&a.code)?;
            let k_max = cli.degree.unwrap_or(DESIGN_DEGREE);
            let dist = distance_distribution(&code, DEFAULT_CLUSTER_TOL)?;
            let mut v = json!({
                "dimension": code.dimension(),
                "size": code.len(),
                "min_angle": to_value(&min_angle(&code)?),
                "distance_distribution": dist.entries,
                "design_strength": design_strength(&code, k_max)?,
                "delsarte": to_value(&check_delsarte(&dist, code.dimension(), k_max)?),
            });
            if let Some(p) = &a.potential {
                let f = PotentialSpec::parse(p)?;
                v["energy"] = json!({ "potential": f.label(), "value": energy(&code, &f)? });
            }
            ok(v)
        }
    }
}

fn lattice(c: &LatticeCommand) -> Res {
    match c {
        LatticeCommand::Info(src) => {
            let l = load_lattice(src)?;
            let basis: Vec<String> = l.to_text().lines().map(String::from).collect();
            ok(merge(to_value(&l.info()), json!({ "basis": basis })))
        }
        LatticeCommand::Svp(a) => {
            let l = load_lattice(&a.lattice)?;
            let settings = EnumerationSettings {
                node_budget: a.budget,
                keep_vectors: a.vectors,
                ..EnumerationSettings::default()
            };
            let r = shortest_vectors_with(&l, a.bound, &settings)?;
            ok(merge(json!({ "name": l.name(), "dimension": l.dimension() }), to_value(&r)))
        }
        LatticeCommand::Density(src) => {
            let l = load_lattice(src)?;
            let density = packing_density(&l)?;
            ok(json!({
                "name": l.name(),
                "dimension": l.dimension(),
                "covolume": l.covolume(),
                "density": density,
            }))
        }
        LatticeCommand::Dual(src) => {
            let l = load_lattice(src)?;
            let d = dual(&l)?;
            let basis: Vec<String> = d.to_text().lines().map(String::from).collect();
            let same = d.same_lattice(&l, 1e-9);
            ok(merge(to_value(&d.info()), json!({ "basis": basis, "equals_input": same })))
        }
    }
}

fn relation(cli: &Cli, a: &RelationArgs) -> Res {
    let alphas: Vec<PreciseReal> = match (&a.alpha, &a.values) {
        (Some(x), _) => {
            let degree = cli
                .degree
                .ok_or_else(|| Failure::Input("--alpha needs --degree for the powers searched".into()))?;
            PreciseReal::parse(x)?.powers(degree)
        }
        (None, Some(v)) => v.iter().map(|s| PreciseReal::parse(s)).collect::<Result<_, _>>()?,
        (None, None) => return Err(Failure::Input("give --alpha or --values".into())),
    };
    let scale = parse_rational(&a.scale)?;
    let r = find_integer_relation(&alphas, &scale, a.digits)?;
    let coefficients: Vec<Value> = r.coefficients.iter().map(|c| exact_number(&c.to_string())).collect();
    Ok(Output::Json {
        value: json!({
            "coefficients": coefficients,
            "residual": r.residual,
            "within_digit_bound": r.within_digit_bound,
        }),
        passed: r.within_digit_bound,
    })
}

fn poisson(cli: &Cli, a: &PoissonArgs) -> Res {
    let l = load_lattice(&a.lattice)?;
    let input = match &a.function {
        Some(path) => PoissonInput::Radial {
            function: RadialFunction::from_json(&read(path)?)?,
        },
        None => PoissonInput::Gaussian { width: a.width },
    };
    let tol = cli.tol.unwrap_or(POISSON_TOL);
    let report = poisson_check(&l, &input)?;
    let mut passed = report.relative_difference < tol;
    let mut v = merge(to_value(&report), json!({ "input": to_value(&input), "tol": tol, "passed": passed }));
    if let Some(shift) = &a.shift {
        let width = match &input {
            PoissonInput::Gaussian { width } => *width,
            PoissonInput::Radial { .. } => return Err(Failure::Input("--shift works with Gaussian input only".into())),
        };
        let p = periodic_check(&l, shift, width)?;
        let scale = p.direct.abs().max(f64::MIN_POSITIVE);
        let periodic_ok = p.difference.abs() / scale < tol;
        passed &= periodic_ok;
        v["periodic"] = merge(to_value(&p), json!({ "passed": periodic_ok }));
        v["passed"] = json!(passed);
    }
    Ok(Output::Json { value: v, passed })
}

fn sphere_result(h: &SphereCertificate, report: Value, save: Option<&Path>) -> Res {
    if let Some(path) = save {
        write(path, &h.to_json())?;
    }
    let cert: Value = serde_json::from_str(&h.to_json()).expect("certificate is JSON");
    ok(merge(report, json!({ "certificate": cert })))
}

fn bound_code(cli: &Cli, a: &CodeBoundArgs) -> Res {
    let degree = cli.degree.unwrap_or(SPHERE_DEGREE);
    let grid = grid_for(cli, SPHERE_GRID, degree);
    let h = match &a.cert {
        Some(path) => SphereCertificate::from_json(&read(path)?)?,
        None => {
            let n = a.n.ok_or_else(|| Failure::Input("--n is required".into()))?;
            let cos = match (a.angle, a.cos) {
                (Some(deg), _) => deg.to_radians().cos(),
                (None, Some(c)) => c,
                (None, None) => return Err(Failure::Input("give --angle or --cos".into())),
            };
            optimize_code_bound(n, cos, degree, grid)?
        }
    };
    if !matches!(h.context, CertificateContext::Code { .. }) {
        return Err(Failure::Input("certificate is not for a code bound".into()));
    }
    let report = verify_certificate(&h, None, CHECK_FACTOR * grid)?;
    let mut v = to_value(&report);
    if let Some(e) = &report.exact_bound {
        v["exact_bound"] = Value::from(e.as_str());
    }
    sphere_result(&h, v, a.save.as_deref())
}

fn bound_energy(cli: &Cli, a: &EnergyBoundArgs) -> Res {
    let degree = cli.degree.unwrap_or(SPHERE_DEGREE);
    let grid = grid_for(cli, SPHERE_GRID, degree);
    let h = match &a.cert {
        Some(path) => SphereCertificate::from_json(&read(path)?)?,
        None => {
            let n = a.n.ok_or_else(|| Failure::Input("--n is required".into()))?;
            let f = PotentialSpec::parse(&a.potential)?;
            optimize_energy_bound(n, a.count, &f, degree, grid)?
        }
    };
    if !matches!(h.context, CertificateContext::Energy { .. }) {
        return Err(Failure::Input("certificate is not for an energy bound".into()));
    }
    let mut report = verify_certificate(&h, Some(a.count), CHECK_FACTOR * grid)?;
    let mut extra = json!({ "count": a.count });
    if let Some(path) = &a.code {
        let code = SphericalCode::from_text(&read(path)?)?;
        if let CertificateContext::Energy { potential } = &h.context {
            extra["code_energy"] = json!(energy(&code, potential)?);
        }
        report.sharpness = Some(sharpness_check(&code, &h)?);
    }
    sphere_result(&h, merge(to_value(&report), extra), a.save.as_deref())
}

fn bound_euclid(cli: &Cli, a: &EuclidArgs) -> Res {
    let degree = cli.degree.unwrap_or(EUCLID_DEGREE);
    let grid = grid_for(cli, EUCLID_GRID, degree);
    let (f, report) = match &a.function {
        Some(path) => {
            let f = RadialFunction::from_json(&read(path)?)?;
            let r = density_bound(&f, CHECK_FACTOR * grid)?;
            (f, r)
        }
        None => {
            let n = a.n.ok_or_else(|| Failure::Input("--n is required".into()))?;
            optimize_density_bound(n, degree, grid)?
        }
    };
    if let Some(path) = &a.save {
        write(path, &f.to_json())?;
    }
    let function: Value = serde_json::from_str(&f.to_json()).expect("radial function is JSON");
    ok(merge(
        to_value(&report),
        json!({ "taylor": to_value(&taylor_report(&f)?), "function": function }),
    ))
}

fn kissing(n: usize) -> Res {
    let h = kissing_certificate(n)?;
    let report = verify_certificate(&h, None, CHECK_FACTOR * SPHERE_GRID)?;
    let exact = report
        .exact_bound
        .clone()
        .ok_or_else(|| Failure::Verification("built-in certificate lacks exact coefficients".into()))?;
    let coefficients = to_value(&h)["h_exact"].clone();
    Ok(Output::Json {
        value: json!({
            "n": n,
            "cos_theta": 0.5,
            "bound": exact_number(&exact),
            "exact_bound": exact,
            "exact": report.exact_certified,
            "coefficients": coefficients,
            "min_coefficient": report.min_coefficient,
        }),
        passed: report.exact_certified,
    })
}

fn table(cli: &Cli, dims: &[usize]) -> Res {
    let degree = cli.degree.unwrap_or(EUCLID_DEGREE);
    let grid = grid_for(cli, EUCLID_GRID, degree);
    let rows = density_table(dims, degree, grid)?;
    Ok(Output::Table {
        header: DensityRow::CSV_HEADER,
        rows: rows.iter().map(DensityRow::to_csv).collect(),
        json: json!({ "degree": degree, "rows": to_value(&rows) }),
    })
}

fn five_point(s: &[f64], bracket: &[f64]) -> Res {
    let [lo, hi] = bracket else {
        return Err(Failure::Input("--bracket takes two exponents LO,HI".into()));
    };
    let records = five_point_experiment(s)?;
    let crossover = five_point_crossover(*lo, *hi)?;
    Ok(Output::Table {
        header: FivePointRecord::CSV_HEADER,
        rows: records.iter().map(FivePointRecord::to_csv).collect(),
        json: json!({ "records": to_value(&records), "crossover": crossover }),
    })
}
