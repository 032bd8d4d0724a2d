use std::path::Path;
use std::process::{Command, Output};

use lpbounds::codes::{catalog, CodeName};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lpbounds")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

/// Runs a command expected to succeed and parses its JSON.
fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(code(&out), 0, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn num(v: &Value, key: &str) -> f64 {
    v[key].as_f64().unwrap_or_else(|| panic!("{key} missing in {v}"))
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn manifest_accompanies_every_result() {
    let v = json(&["kissing", "--n", "8"]);
    let m = &v["manifest"];
    assert_eq!(m["subcommand"], "kissing");
    assert_eq!(m["seed"], 0);
    assert_eq!(m["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(m["params"]["command"]["kissing"]["n"], 8);
    assert!(m.get("wall_time_s").is_none());
    let out = run(&["kissing", "--n", "8"]);
    let stderr: Value = serde_json::from_str(String::from_utf8_lossy(&out.stderr).lines().next().unwrap()).unwrap();
    assert!(stderr["wall_time_s"].as_f64().unwrap() >= 0.0);
}

#[test]
fn kissing_bounds_are_exact() {
    let v = json(&["kissing", "--n", "8"]);
    assert_eq!(v["bound"], 240);
    assert_eq!(v["exact"], true);
    assert_eq!(v["exact_bound"], "240");
    assert!(v["coefficients"].as_array().unwrap().iter().all(|c| c.is_string()));
    let v = json(&["kissing", "--n", "24"]);
    assert_eq!(v["bound"], 196560);
    assert_eq!(v["exact"], true);
    assert_eq!(code(&run(&["kissing", "--n", "5"])), 2);
}

#[test]
fn lattice_subcommands() {
    let info = json(&["lattice", "info", "--name", "e8"]);
    assert_eq!(info["dimension"], 8);
    assert_eq!(info["gram_det"], "1");
    assert_eq!(info["self_dual"], true);
    assert_eq!(info["even"], true);
    assert_eq!(info["basis"].as_array().unwrap().len(), 8);

    let svp = json(&["lattice", "svp", "--name", "leech"]);
    assert_eq!(svp["min_sq_norm"], 4.0);
    assert_eq!(svp["count"], 196560);

    let density = json(&["lattice", "density", "--name", "e8"]);
    let oracle = std::f64::consts::PI.powi(4) / 384.0;
    assert!((num(&density, "density") / oracle - 1.0).abs() < 1e-12);

    let dual = json(&["lattice", "dual", "--name", "e8"]);
    assert_eq!(dual["equals_input"], true);
    let dual = json(&["lattice", "dual", "--name", "d4"]);
    assert_eq!(dual["equals_input"], false);
    assert_eq!(dual["gram_det"], "1/4");
}

#[test]
fn lattice_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("hex.txt");
    // A2 scaled so that the Gram matrix is rational: rows (1, 0) and (1/2, 1/2).
    std::fs::write(&file, "# test lattice\n1 0\n1/2 1/2\n").unwrap();
    let v = json(&["lattice", "svp", "--file", path_str(&file)]);
    assert_eq!(v["min_sq_norm_exact"], "1/2");
    assert_eq!(v["count"], 4);
    let v = json(&["lattice", "info", "--file", path_str(&file)]);
    assert_eq!(v["gram_det"], "1/4");

    std::fs::write(&file, "1 0\n1 x\n").unwrap();
    assert_eq!(code(&run(&["lattice", "info", "--file", path_str(&file)])), 2);
    let missing = dir.path().join("none.txt");
    assert_eq!(code(&run(&["lattice", "info", "--file", path_str(&missing)])), 2);
}

#[test]
fn enumeration_budget_is_a_resource_limit() {
    let out = run(&["lattice", "svp", "--name", "e8", "--budget", "10"]);
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("resource limit"));
}

#[test]
fn relation_recovers_the_polynomial() {
    let v = json(&[
        "relation",
        "--alpha=-7.82646099323767402929927644895",
        "--degree",
        "5",
        "--scale",
        "1e20",
    ]);
    let c: Vec<i64> = v["coefficients"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect();
    assert_eq!(c, vec![71, -5, 12, -19, 13, 2]);
    assert!(num(&v, "residual") < 1e-25);
    assert_eq!(v["within_digit_bound"], true);

    // pi has no relation with one-digit coefficients.
    let out = run(&["relation", "--values", "1,3.14159265358979323846", "--scale", "1e20", "--digits", "1"]);
    assert_eq!(code(&out), 3);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["within_digit_bound"], false);

    assert_eq!(code(&run(&["relation", "--alpha", "1.5"])), 2);
}

#[test]
fn poisson_identity() {
    for name in ["z3", "d4", "e8", "leech"] {
        let v = json(&["poisson", "--name", name]);
        assert!(num(&v, "relative_difference") < 1e-9, "{name}");
        assert_eq!(v["passed"], true);
    }
    let v = json(&["poisson", "--name", "a2", "--width", "0.7", "--shift", "0.3,0.1"]);
    assert_eq!(v["periodic"]["passed"], true);
    assert_eq!(code(&run(&["poisson", "--name", "z2", "--width", "-1"])), 2);
    assert_eq!(code(&run(&["poisson", "--name", "z2", "--shift", "0.5"])), 2);
}

#[test]
fn poisson_with_a_radial_function() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.json");
    std::fs::write(&f, r#"{"n": 2, "coefficients": [1.0, -0.5, 0.25]}"#).unwrap();
    let v = json(&["poisson", "--name", "a2", "--function", path_str(&f)]);
    assert!(num(&v, "relative_difference") < 1e-9);
    assert_eq!(v["input"]["kind"], "radial");
}

#[test]
fn code_bound_optimize_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let cos = (2.0 * std::f64::consts::PI / 5.0).cos().to_string();
    let v = json(&["bound", "code", "--n", "2", "--cos", &cos, "--save", path_str(&cert)]);
    assert!((num(&v, "bound") - 5.0).abs() < 1e-6);
    assert_eq!(v["certificate"]["context"]["type"], "code");

    let again = json(&["bound", "code", "--cert", path_str(&cert)]);
    assert_eq!(num(&again, "bound"), num(&v, "bound"));

    // Making a coefficient negative invalidates the certificate.
    let mut c: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    c["h"][1] = Value::from(-1.0);
    std::fs::write(&cert, c.to_string()).unwrap();
    let out = run(&["bound", "code", "--cert", path_str(&cert)]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("negative"));

    let v = json(&["bound", "code", "--n", "3", "--angle", "60", "--degree", "12"]);
    assert!(num(&v, "bound") >= 12.0 - 1e-9);
}

#[test]
fn energy_bound_with_a_code() {
    let dir = tempfile::tempdir().unwrap();
    let code_file = dir.path().join("ico.txt");
    std::fs::write(&code_file, catalog(&CodeName::Icosahedron).unwrap().to_text()).unwrap();
    let v = json(&[
        "bound",
        "energy",
        "--n",
        "3",
        "--count",
        "12",
        "--degree",
        "10",
        "--code",
        path_str(&code_file),
    ]);
    let e = num(&v, "code_energy");
    assert!((e - 49.1652530576).abs() < 1e-9);
    let bound = num(&v, "bound");
    assert!(bound <= e + 1e-9 && bound > e - 1e-3, "{bound}");
    assert!(v["sharpness"].is_object());
    assert_eq!(v["certificate"]["context"]["potential"]["kind"]["kind"], "riesz");
    assert_eq!(code(&run(&["bound", "energy", "--n", "3", "--count", "4", "--potential", "yukawa"])), 2);
}

#[test]
fn euclid_bound_in_one_dimension() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.json");
    let v = json(&["bound", "euclid", "--n", "1", "--degree", "13", "--save", path_str(&f)]);
    let bound = num(&v, "bound");
    assert!(bound >= 1.0 && bound - 1.0 < 1e-6, "{bound}");
    assert_eq!(v["tail_certified"], true);
    assert!(v["taylor"]["f_quadratic"].is_number());
    assert_eq!(v["function"]["n"], 1);

    let again = json(&["bound", "euclid", "--function", path_str(&f)]);
    assert!((num(&again, "bound") - bound).abs() < 1e-12);

    // A bare Gaussian is positive everywhere, so it is not admissible.
    std::fs::write(&f, r#"{"n": 1, "coefficients": [1.0]}"#).unwrap();
    assert_eq!(code(&run(&["bound", "euclid", "--function", path_str(&f)])), 3);
}

#[test]
fn euclid_bound_at_degree_eight() {
    // Degree 8 stays 3% above the optimum; the bound is still valid.
    let v = json(&["bound", "euclid", "--n", "1", "--degree", "8"]);
    let bound = num(&v, "bound");
    assert!(bound >= 1.0 && bound < 1.04, "{bound}");
}

#[test]
fn trivial_bound() {
    let v = json(&["bound", "trivial", "--n", "3"]);
    assert!((num(&v, "bound") - 1.0).abs() < 1e-9);
    assert_eq!(code(&run(&["bound", "trivial", "--n", "40"])), 2);
}

#[test]
fn table_as_csv_and_json() {
    let out = run(&["table", "--dims", "1,2", "--degree", "9", "--csv"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,lp_bound,best_known,log10_bound,log10_best");
    assert_eq!(lines.len(), 3);
    for line in &lines[1..] {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert!(cols[1] >= cols[2]);
    }
    let v = json(&["table", "--dims", "2", "--degree", "9"]);
    let row = &v["rows"][0];
    assert_eq!(row["best_lattice"], "A2");
    assert!(num(row, "lp_bound") >= num(row, "best_known"));
}

#[test]
fn minimize_is_reproducible() {
    let args = ["minimize", "--n", "3", "--count", "5", "--restarts", "6", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!((num(&v, "best_energy") - 6.4746914947).abs() < 1e-8);
    assert_eq!(v["best"]["points"].as_array().unwrap().len(), 5);
    assert_eq!(v["manifest"]["seed"], 7);
    assert_eq!(code(&run(&["minimize", "--n", "1", "--count", "5"])), 2);
}

#[test]
fn out_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("ico.json");
    let out = run(&["minimize", "--n", "3", "--count", "12", "--out", path_str(&file)]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert!((num(&v, "best_energy") - 49.1652530576).abs() < 1e-6);
}

#[test]
fn five_point_outputs() {
    let out = run(&["five-point", "--s", "1,20", "--csv"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "s,bipyramid_energy,pyramid_energy,pyramid_latitude,winner");
    assert!(lines[1].ends_with(",bipyramid"));
    assert!(lines[2].ends_with(",square_pyramid"));

    let v = json(&["five-point", "--s", "1"]);
    assert_eq!(v["records"][0]["winner"], "bipyramid");
    let s = num(&v, "crossover");
    assert!(s > 1.0 && s < 30.0);
    assert_eq!(code(&run(&["five-point", "--bracket", "1"])), 2);
}

#[test]
fn saturate_is_reproducible() {
    let args = ["saturate", "--n", "2", "--edge", "12", "--seed", "3"];
    let a = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, run(&args).stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(num(&v, "density") >= 0.25);
    assert!(num(&v, "min_distance") >= 2.0 - 1e-9);
    assert_eq!(code(&run(&["saturate", "--n", "5", "--edge", "12"])), 2);
}

#[test]
fn design_and_code_info() {
    let v = json(&["design", "--name", "icosahedron"]);
    assert_eq!(v["strength"], 5);
    let v = json(&["design", "--name", "e8", "--degree", "10"]);
    assert_eq!(v["strength"], 7);

    let v = json(&["code", "info", "--name", "e8", "--potential", "coulomb"]);
    assert_eq!(v["size"], 240);
    assert!((num(&v["min_angle"], "degrees") - 60.0).abs() < 1e-9);
    let total: u64 = v["distance_distribution"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e[1].as_u64().unwrap())
        .sum();
    assert_eq!(total, 240 * 240);
    assert!(v["delsarte"].as_array().unwrap().iter().all(|e| e["nonnegative"] == true));
    assert!(v["energy"]["value"].is_number());

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("square.txt");
    std::fs::write(&file, "1 0\n0 1\n-1 0\n0 -1\n").unwrap();
    let v = json(&["code", "info", "--file", path_str(&file)]);
    assert_eq!(v["design_strength"], 3);
    assert_eq!(code(&run(&["code", "info", "--name", "dodecahedron"])), 2);
}

#[test]
fn usage_errors() {
    for args in [
        &["kissing", "--n", "8", "--frobnicate"][..],
        &["kissing", "--n", "8", "--csv"],
        &["kissing", "--n", "8", "--json", "--csv"],
        &["kissing", "--n", "8", "--threads", "0"],
        &["lattice", "svp"],
        &["bound"],
    ] {
        let out = run(args);
        assert_eq!(code(&out), 2, "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn thread_cap_does_not_change_results() {
    let a = run(&["minimize", "--n", "3", "--count", "6", "--restarts", "4", "--threads", "1"]);
    let b = run(&["minimize", "--n", "3", "--count", "6", "--restarts", "4", "--threads", "3"]);
    let strip = |o: &Output| {
        let mut v: Value = serde_json::from_slice(&o.stdout).unwrap();
        v.as_object_mut().unwrap().remove("manifest");
        v
    };
    assert_eq!(strip(&a), strip(&b));
}
