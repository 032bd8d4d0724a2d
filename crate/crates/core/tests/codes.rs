use approx::assert_relative_eq;
use lpbounds::codes::*;
use lpbounds::Error;
use proptest::prelude::*;

fn named(s: &str) -> SphericalCode {
    catalog(&CodeName::parse(s).unwrap()).unwrap()
}

#[test]
fn simplex_inner_products() {
    let c = catalog(&CodeName::Simplex { n: 3, count: 4 }).unwrap();
    assert_eq!(c.len(), 4);
    let d = distance_distribution(&c, DEFAULT_CLUSTER_TOL).unwrap();
    assert_eq!(d.entries.len(), 2);
    assert_relative_eq!(d.entries[0].0, -1.0 / 3.0, max_relative = 1e-12);
    assert_eq!(d.entries[0].1, 12);
    assert_relative_eq!(min_angle(&c).unwrap().degrees, (-1.0f64 / 3.0).acos().to_degrees(), max_relative = 1e-12);

    let c = catalog(&CodeName::Simplex { n: 7, count: 8 }).unwrap();
    let d = distance_distribution(&c, DEFAULT_CLUSTER_TOL).unwrap();
    assert_eq!(d.entries.len(), 2);
    assert_relative_eq!(d.entries[0].0, -1.0 / 7.0, max_relative = 1e-12);
    assert_eq!((d.entries[0].1, d.entries[1].1), (56, 8));
    assert!(catalog(&CodeName::Simplex { n: 3, count: 5 }).is_err());
}

#[test]
fn cross_polytope_and_antipodes() {
    let c = named("cross_polytope:3");
    assert_eq!(c.len(), 6);
    let d = distance_distribution(&c, DEFAULT_CLUSTER_TOL).unwrap();
    let ts: Vec<f64> = d.entries.iter().map(|e| e.0).collect();
    assert_eq!(ts, vec![-1.0, 0.0, 1.0]);
    let m = min_angle(&named("cross_polytope:4")).unwrap();
    assert_relative_eq!(m.degrees, 90.0);
    assert!(m.kissing_valid);

    let pair = SphericalCode::new(vec![vec![0.0, 0.0, 1.0], vec![0.0, 0.0, -1.0]]).unwrap();
    let d = distance_distribution(&pair, DEFAULT_CLUSTER_TOL).unwrap();
    assert_eq!(d.entries, vec![(-1.0, 2), (1.0, 2)]);
    assert_relative_eq!(energy(&pair, &PotentialSpec::coulomb()).unwrap(), 0.5);
}

#[test]
fn icosahedron_support_and_energy() {
    let c = named("icosahedron");
    let d = distance_distribution(&c, DEFAULT_CLUSTER_TOL).unwrap();
    let s = 1.0 / 5f64.sqrt();
    let expected = [-1.0, -s, s, 1.0];
    assert_eq!(d.entries.len(), 4);
    for (e, t) in d.entries.iter().zip(expected) {
        assert!((e.0 - t).abs() < 1e-12);
    }
    let e = energy(&c, &PotentialSpec::coulomb()).unwrap();
    assert!((e - 49.1652530576).abs() < 1e-9, "{e}");
    assert_eq!(design_strength(&c, 10).unwrap(), 5);
}

#[test]
fn bipyramid_energy() {
    let c = named("triangular_bipyramid");
    let e = energy(&c, &PotentialSpec::coulomb()).unwrap();
    let oracle = 0.5 + 6.0 / 2f64.sqrt() + 3f64.sqrt();
    assert_relative_eq!(e, oracle, max_relative = 1e-14);
    assert!((e - 6.4746914947).abs() < 1e-9);
}

#[test]
fn e8_roots() {
    let c = named("e8_roots");
    assert_eq!((c.len(), c.dimension()), (240, 8));
    let m = min_angle(&c).unwrap();
    assert!((m.degrees - 60.0).abs() < 1e-9);
    assert!(m.kissing_valid);
    assert_eq!(design_strength(&c, 10).unwrap(), 7);
}

#[test]
fn cell600_and_d4() {
    let c = named("cell600");
    assert_eq!(c.len(), 120);
    assert!(c.points().iter().all(|p| (p.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-14));
    let d = distance_distribution(&c, DEFAULT_CLUSTER_TOL).unwrap();
    assert_eq!(d.entries.len(), 9);
    assert_eq!(design_strength(&c, 20).unwrap(), 11);
    let d4 = named("d4_min_vectors");
    assert_eq!(d4.len(), 24);
    assert_eq!(design_strength(&d4, 10).unwrap(), 5);
}

#[test]
fn leech_min_vectors_sampled() {
    let c = named("leech_min_vectors");
    assert_eq!(c.len(), 196_560);
    // The shell is distance-invariant, so a few base points suffice.
    let pts = c.points();
    let mut max_ip = f64::NEG_INFINITY;
    for i in [0, 1, 77_777, 196_559] {
        for (j, q) in pts.iter().enumerate() {
            if j != i {
                let t: f64 = pts[i].iter().zip(q).map(|(a, b)| a * b).sum();
                max_ip = max_ip.max(t);
            }
        }
    }
    assert!((max_ip - 0.5).abs() < 1e-12);
}

#[test]
fn design_strength_edge_cases() {
    let single = SphericalCode::new(vec![vec![1.0, 0.0, 0.0]]).unwrap();
    assert_eq!(design_strength(&single, 5).unwrap(), 0);
    for n in 2..7 {
        let c = catalog(&CodeName::Simplex { n, count: n + 1 }).unwrap();
        // Oracle: the first two moment sums are |sum x|^2 = 0 and, for the
        // second, sum (n t^2 - 1)/(n - 1) over the two inner products.
        let first: f64 = {
            let mut s = vec![0.0; n];
            for p in c.points() {
                for (a, b) in s.iter_mut().zip(p) {
                    *a += b;
                }
            }
            s.iter().map(|x| x * x).sum()
        };
        assert!(first.abs() < 1e-12);
        let m = (n + 1) as f64;
        let t = -1.0 / n as f64;
        let second = m * 1.0 + m * (m - 1.0) * (n as f64 * t * t - 1.0) / (n as f64 - 1.0);
        assert!(second.abs() < 1e-10);
        assert!(design_strength(&c, 10).unwrap() >= 2);
    }
    assert!(design_strength(&named("icosahedron"), 21).is_err());
}

#[test]
fn delsarte_examples() {
    let c = catalog(&CodeName::Simplex { n: 7, count: 8 }).unwrap();
    let d = distance_distribution(&c, DEFAULT_CLUSTER_TOL).unwrap();
    let r = check_delsarte(&d, 7, 6).unwrap();
    assert!((r[0].value - 64.0).abs() < 1e-9);
    assert!(r[1].value.abs() < 1e-9);
    assert!(r.iter().all(|e| e.nonnegative));

    let c = random_code(8, 30, 7).unwrap();
    let d = distance_distribution(&c, DEFAULT_CLUSTER_TOL).unwrap();
    assert!(check_delsarte(&d, 8, 20).unwrap().iter().all(|e| e.nonnegative));
}

#[test]
fn potentials() {
    let f = PotentialSpec::parse("riesz:2").unwrap();
    assert_relative_eq!(f.value(4.0), 0.25);
    assert_relative_eq!(f.derivative(4.0, 1), -1.0 / 16.0);
    assert_relative_eq!(f.derivative(4.0, 2), 2.0 / 64.0);
    let g = PotentialSpec::parse("gaussian:3").unwrap();
    assert_relative_eq!(g.derivative(0.5, 2), 9.0 * (-1.5f64).exp());
    assert!(matches!(PotentialSpec::parse("lennard-jones"), Err(Error::UnknownName(_))));
    let t = PotentialSpec::tabulated(vec![0.0, 1.0, 4.0], vec![3.0, 1.0, 0.0]).unwrap();
    assert!(t.decreasing && t.convex && !t.completely_monotonic);
    assert_relative_eq!(t.value(2.5), 0.5);

    let dup = SphericalCode::new(vec![vec![1.0, 0.0], vec![1.0, 0.0]]).unwrap();
    assert!(matches!(energy(&dup, &PotentialSpec::coulomb()), Err(Error::Domain(_))));
}

#[test]
fn energy_consistency_on_catalog() {
    let f = PotentialSpec::coulomb();
    let g = PotentialSpec::gaussian(2.0).unwrap();
    for name in ["simplex:5:6", "cross_polytope:5", "icosahedron", "hexagon", "polygon:7", "triangular_bipyramid", "square_pyramid:1.7", "cell600", "e8_roots", "d4"] {
        let c = named(name);
        let d = distance_distribution(&c, DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(d.total(), (c.len() * c.len()) as u64);
        assert_eq!(d.count_at(1.0, 1e-9), Some(c.len() as u64));
        for p in [&f, &g] {
            let direct = energy(&c, p).unwrap();
            let hist = energy_from_distribution(&d, p, DEFAULT_CLUSTER_TOL).unwrap();
            assert_relative_eq!(direct, hist, max_relative = 1e-10);
        }
    }
}

#[test]
fn text_round_trip() {
    let c = named("icosahedron");
    let back = SphericalCode::from_text(&c.to_text()).unwrap();
    assert_eq!(back, c);
    assert!(SphericalCode::from_text("1 0\n0 1 0\n").is_err());
}

#[test]
fn simplex_is_optimal_among_random_codes() {
    for (n, count) in [(3, 3), (3, 4), (4, 5), (5, 4)] {
        let bound = -1.0 / (count as f64 - 1.0);
        let c = catalog(&CodeName::Simplex { n, count }).unwrap();
        assert!((max_inner_product(&c).unwrap() - bound).abs() < 1e-12);
        let best = (0..200)
            .map(|seed| max_inner_product(&random_code(n, count, seed).unwrap()).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert!(best >= bound - 1e-9);
    }
}

fn code_strategy() -> impl Strategy<Value = (usize, usize, u64)> {
    (prop::sample::select(vec![2usize, 3, 4, 8]), 1usize..25, any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn distribution_identities((n, count, seed) in code_strategy()) {
        let c = random_code(n, count, seed).unwrap();
        let d = distance_distribution(&c, DEFAULT_CLUSTER_TOL).unwrap();
        prop_assert_eq!(d.total(), (count * count) as u64);
        prop_assert_eq!(d.count_at(1.0, 1e-9), Some(count as u64));
        prop_assert!(d.entries.windows(2).all(|w| w[0].0 < w[1].0));
    }

    #[test]
    fn design_strength_is_rotation_invariant((n, count, seed) in code_strategy()) {
        let c = random_code(n, count, seed).unwrap();
        let r = c.transformed(&random_rotation(n, seed ^ 1)).unwrap();
        prop_assert_eq!(design_strength(&c, 6).unwrap(), design_strength(&r, 6).unwrap());
        prop_assert!(design_strength(&c, 3).unwrap() <= design_strength(&c, 6).unwrap());
        let e1 = energy(&c, &PotentialSpec::gaussian(1.0).unwrap()).unwrap();
        let e2 = energy(&r, &PotentialSpec::gaussian(1.0).unwrap()).unwrap();
        prop_assert!((e1 - e2).abs() <= 1e-10 * e1.abs().max(1.0));
    }
}
