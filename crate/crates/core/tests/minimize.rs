use lpbounds::codes::{catalog, energy, random_code, random_rotation, CodeName, PotentialSpec};
use lpbounds::minimize::*;
use lpbounds::special::unit_ball_volume;

fn coulomb_minimum(n: usize, count: usize, restarts: usize, seed: u64) -> LocalMinReport {
    let settings = MinimizeSettings {
        restarts,
        seed,
        ..MinimizeSettings::default()
    };
    minimize_energy(n, count, &PotentialSpec::coulomb(), &settings).unwrap()
}

#[test]
fn two_points_are_antipodal() {
    let r = coulomb_minimum(3, 2, 4, 1);
    assert!((r.best_energy - 0.5).abs() < 1e-10);
    let p = r.best.points();
    let dot: f64 = p[0].iter().zip(&p[1]).map(|(a, b)| a * b).sum();
    assert!((dot + 1.0).abs() < 1e-9);
}

#[test]
fn twelve_points_find_the_icosahedron() {
    let ico = catalog(&CodeName::Icosahedron).unwrap();
    let oracle = energy(&ico, &PotentialSpec::coulomb()).unwrap();
    assert!((oracle - 49.1652530576).abs() < 1e-9);
    let r = coulomb_minimum(3, 12, 20, 0);
    assert!((r.best_energy - oracle).abs() < 1e-6);
    assert!(r.converged);
}

#[test]
fn four_points_form_a_tetrahedron() {
    let r = coulomb_minimum(3, 4, 5, 2);
    let p = r.best.points();
    for i in 0..4 {
        for j in i + 1..4 {
            let dot: f64 = p[i].iter().zip(&p[j]).map(|(a, b)| a * b).sum();
            assert!((dot + 1.0 / 3.0).abs() < 1e-6, "{dot}");
        }
    }
}

#[test]
fn small_universal_optima() {
    let cases = [
        (2, CodeName::Simplex { n: 3, count: 2 }),
        (3, CodeName::Simplex { n: 3, count: 3 }),
        (4, CodeName::Simplex { n: 3, count: 4 }),
        (6, CodeName::CrossPolytope { n: 3 }),
        (12, CodeName::Icosahedron),
    ];
    for (count, name) in cases {
        let oracle = energy(&catalog(&name).unwrap(), &PotentialSpec::coulomb()).unwrap();
        let r = coulomb_minimum(3, count, 20, 5);
        assert!((r.best_energy - oracle).abs() < 1e-6, "N={count}");
    }
}

#[test]
fn report_is_consistent() {
    let r = coulomb_minimum(3, 7, 8, 3);
    let min = r.restarts.iter().map(|x| x.energy).fold(f64::INFINITY, f64::min);
    assert_eq!(r.best_energy, min);
    assert_eq!(r.restarts[r.best_restart].energy, min);
    let direct = energy(&r.best, &PotentialSpec::coulomb()).unwrap();
    assert!((direct - r.best_energy).abs() < 1e-12 * direct);
    for x in &r.restarts {
        if x.status == RunStatus::Converged {
            assert!(x.gradient_norm <= 1e-8 * (1.0 + x.energy));
        }
    }
}

#[test]
fn seed_determines_the_run() {
    let a = coulomb_minimum(3, 9, 6, 42);
    let b = coulomb_minimum(3, 9, 6, 42);
    assert_eq!(a, b);
    let c = coulomb_minimum(3, 9, 6, 43);
    assert_ne!(a.restarts, c.restarts);
}

#[test]
fn accepted_steps_never_raise_energy() {
    let f = PotentialSpec::riesz(2.0).unwrap();
    let start = random_code(3, 10, 9).unwrap().into_points();
    let mut last = f64::INFINITY;
    for iterations in 0..60 {
        let settings = MinimizeSettings {
            max_iterations: iterations,
            ..MinimizeSettings::default()
        };
        let (_, r) = descend(start.clone(), &f, &settings);
        assert!(r.energy <= last);
        last = r.energy;
    }
}

#[test]
fn minima_are_rotation_invariant() {
    let r = coulomb_minimum(4, 10, 4, 8);
    for seed in 0..3 {
        let rotated = r.best.transformed(&random_rotation(4, seed)).unwrap();
        let e = energy(&rotated, &PotentialSpec::coulomb()).unwrap();
        assert!((e - r.best_energy).abs() < 1e-10);
    }
}

#[test]
fn minimizer_preconditions() {
    let f = PotentialSpec::coulomb();
    let zero = MinimizeSettings {
        restarts: 0,
        ..MinimizeSettings::default()
    };
    assert!(minimize_energy(3, 5, &f, &zero).is_err());
    assert!(minimize_energy(1, 5, &f, &MinimizeSettings::default()).is_err());
    assert!(minimize_energy(3, 1, &f, &MinimizeSettings::default()).is_err());
}

#[test]
fn analytic_gradient_matches_differences() {
    let coulomb = gradient_check(3, 7, &PotentialSpec::coulomb(), 1, 1e-6).unwrap();
    assert!(coulomb < 1e-5, "{coulomb}");
    let gauss = gradient_check(3, 7, &PotentialSpec::gaussian(1.5).unwrap(), 1, 1e-6).unwrap();
    assert!(gauss < 1e-5, "{gauss}");
    let riesz = gradient_check(5, 9, &PotentialSpec::riesz(3.0).unwrap(), 2, 1e-6).unwrap();
    assert!(riesz < 1e-5, "{riesz}");
    let constant = PotentialSpec::gaussian(0.0).unwrap();
    assert_eq!(gradient_check(3, 7, &constant, 1, 1e-6).unwrap(), 0.0);
    let pts = random_code(3, 7, 1).unwrap().into_points();
    assert!(tangential_gradient(&pts, &constant).iter().flatten().all(|&g| g == 0.0));
}

/// Square pyramid energy from its three distances: apex to square, side
/// and diagonal.
fn pyramid_oracle(latitude: f64, s: f64) -> f64 {
    let f = |d2: f64| d2.powf(-s / 2.0);
    let sin2 = latitude.sin().powi(2);
    4.0 * f(2.0 - 2.0 * latitude.cos()) + 4.0 * f(2.0 * sin2) + 2.0 * f(4.0 * sin2)
}

fn scan_minimum(s: f64) -> (f64, f64) {
    let m = 20_000;
    (1..m)
        .map(|i| {
            let t = std::f64::consts::PI * i as f64 / m as f64;
            (t, pyramid_oracle(t, s))
        })
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap()
}

#[test]
fn five_points_coulomb() {
    let rec = &five_point_experiment(&[1.0]).unwrap()[0];
    let oracle = 0.5 + 6.0 / 2f64.sqrt() + 3f64.sqrt();
    assert!((rec.bipyramid_energy - oracle).abs() < 1e-12);
    assert!((rec.bipyramid_energy - 6.4746914947).abs() < 1e-8);
    let (t, scan) = scan_minimum(1.0);
    assert!(rec.pyramid_energy <= scan + 1e-12);
    assert!((rec.pyramid_energy - scan).abs() < 1e-8);
    assert!((rec.pyramid_latitude - t).abs() < 1e-3);
    assert_eq!(rec.winner, "bipyramid");
}

#[test]
fn five_points_steep_potential() {
    let recs = five_point_experiment(&[1.0, 20.0]).unwrap();
    let steep = &recs[1];
    let (_, scan) = scan_minimum(20.0);
    assert!((steep.pyramid_energy - scan).abs() < 1e-8 * scan);
    assert_eq!(steep.winner, "square_pyramid");
    assert!(steep.pyramid_energy < steep.bipyramid_energy);
    // the square moves as the exponent changes
    assert!((recs[0].pyramid_latitude - steep.pyramid_latitude).abs() > 0.05);
}

#[test]
fn five_point_crossover_is_a_tie() {
    let s = five_point_crossover(5.0, 30.0).unwrap().unwrap();
    let rec = &five_point_experiment(&[s]).unwrap()[0];
    assert!((rec.pyramid_energy / rec.bipyramid_energy - 1.0).abs() < 1e-9);
    assert_eq!(five_point_crossover(1.0, 3.0).unwrap(), None);
}

#[test]
fn five_point_rejects_bad_exponent() {
    assert!(five_point_experiment(&[0.0]).is_err());
    assert!(five_point_experiment(&[-1.0]).is_err());
}

#[test]
fn saturated_tori_beat_two_to_the_minus_n() {
    for (n, edge) in [(1, 10.0), (2, 12.0), (3, 8.0)] {
        for seed in 0..5 {
            let settings = SaturationSettings {
                seed,
                ..SaturationSettings::default()
            };
            let p = greedy_saturate_torus(n, edge, &settings).unwrap();
            let density = p.centers.len() as f64 * unit_ball_volume(n) / f64::powi(edge, n as i32);
            assert!((p.density - density).abs() < 1e-15);
            assert!(density >= 0.5f64.powi(n as i32), "n={n} seed={seed}: {density}");
            assert!(p.min_distance() >= 2.0 - 1e-9);
            // Re-probe on a grid twice as fine as spacing 0.25.
            assert!(probe_torus(&p, 0.125) < 2.0 + 0.05);
        }
    }
}

#[test]
fn saturation_is_reproducible() {
    let s = SaturationSettings::default();
    assert_eq!(greedy_saturate_torus(2, 9.0, &s).unwrap(), greedy_saturate_torus(2, 9.0, &s).unwrap());
}

#[test]
fn saturation_preconditions() {
    let s = SaturationSettings::default();
    assert!(greedy_saturate_torus(4, 8.0, &s).is_err());
    assert!(greedy_saturate_torus(0, 8.0, &s).is_err());
    assert!(greedy_saturate_torus(2, 5.0, &s).is_err());
}
