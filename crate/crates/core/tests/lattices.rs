use std::f64::consts::PI;

use approx::assert_relative_eq;
use lpbounds::exact::{parse_rational, rat, rat_int};
use lpbounds::lattices::*;
use lpbounds::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn zn(n: usize) -> LatticeBasis {
    construct(&LatticeName::Zn(n)).unwrap()
}

#[test]
fn zn_basic_invariants() {
    let l = zn(5);
    assert_relative_eq!(l.covolume(), 1.0);
    let r = shortest_vectors(&l, None).unwrap();
    assert_eq!(r.min_sq_norm, 1.0);
    assert_eq!(r.count, 10);
    let r = shortest_vectors(&zn(6), None).unwrap();
    assert_eq!(r.count, 12);
}

#[test]
fn d3_and_d4() {
    let d3 = construct(&LatticeName::Dn(3)).unwrap();
    let r = shortest_vectors(&d3, None).unwrap();
    assert_eq!((r.min_sq_norm, r.count), (2.0, 12));

    let d4 = construct(&LatticeName::Dn(4)).unwrap();
    assert_relative_eq!(d4.covolume(), 2.0, max_relative = 1e-12);
    let r = shortest_vectors(&d4, None).unwrap();
    assert_eq!((r.min_sq_norm, r.count), (2.0, 24));
    assert_relative_eq!(packing_density(&d4).unwrap(), PI * PI / 16.0, max_relative = 1e-12);
    assert!(construct(&LatticeName::Dn(2)).is_err());
}

#[test]
fn e8_invariants() {
    let e8 = construct(&LatticeName::E8).unwrap();
    assert_relative_eq!(e8.covolume(), 1.0, max_relative = 1e-12);
    let r = shortest_vectors(&e8, None).unwrap();
    assert_eq!(r.min_sq_norm_exact.as_deref(), Some("2"));
    assert_eq!(r.count, 240);
    assert_eq!(e8.is_even(), Some(true));
    assert_eq!(e8.is_self_dual(), Some(true));
    let d = dual(&e8).unwrap();
    assert!(d.same_lattice(&e8, 1e-9));
    assert_relative_eq!(packing_density(&e8).unwrap(), PI.powi(4) / 384.0, max_relative = 1e-12);
}

#[test]
fn e8_vectors_have_even_norms() {
    let e8 = construct(&LatticeName::E8).unwrap();
    let prep = PreparedLattice::new(&e8, &EnumerationSettings::default()).unwrap();
    let mut count = 0;
    prep.enumerate(None, 6.0, 1_000_000, &mut |x, _| {
        let s = prep.exact_scaled_norm(x).unwrap();
        let scale = prep.exact_scale().unwrap();
        assert_eq!(BigInt::from(s) % (BigInt::from(2) * scale), BigInt::from(0));
        count += 1;
        None
    })
    .unwrap();
    // 240 + 2160 + 6720 vectors of norm 2, 4, 6.
    assert_eq!(2 * count, 240 + 2160 + 6720);
}

#[test]
fn leech_exact_invariants() {
    let l = construct(&LatticeName::Leech).unwrap();
    assert_relative_eq!(l.covolume(), 1.0, max_relative = 1e-9);
    assert_eq!(l.is_even(), Some(true));
    assert_eq!(l.is_self_dual(), Some(true));
    assert_eq!(l.exact_gram_det(), Some(rat_int(1)));
}

#[test]
fn other_catalog_lattices() {
    let a2 = construct_named("a2").unwrap();
    let r = shortest_vectors(&a2, None).unwrap();
    assert_eq!(r.count, 6);
    assert_relative_eq!(packing_density(&a2).unwrap(), PI / 12f64.sqrt(), max_relative = 1e-12);
    for (name, kiss) in [("e6", 72), ("e7", 126), ("a3", 12)] {
        let l = construct_named(name).unwrap();
        assert_eq!(shortest_vectors(&l, None).unwrap().count, kiss, "{name}");
    }
    assert!(matches!(construct_named("q7"), Err(Error::UnknownName(_))));
}

#[test]
fn dual_examples() {
    let z3 = zn(3);
    assert!(dual(&z3).unwrap().same_lattice(&z3, 1e-12));
    let d4 = construct(&LatticeName::Dn(4)).unwrap();
    let dd = dual(&d4).unwrap();
    let c = dd.coordinates(&[0.5, 0.5, 0.5, 0.5]).unwrap();
    assert!(c.iter().all(|x| (x - x.round()).abs() < 1e-12));
    assert_relative_eq!(dd.covolume() * d4.covolume(), 1.0, max_relative = 1e-12);
}

#[test]
fn nearest_point_examples() {
    let p = nearest_point(&zn(3), &[0.2, 0.2, 0.2]).unwrap();
    assert_eq!(p.coefficients, vec![0, 0, 0]);
    assert_relative_eq!(p.distance, 0.12f64.sqrt(), max_relative = 1e-12);
    let d6 = construct(&LatticeName::Dn(6)).unwrap();
    let p = nearest_point(&d6, &[0.5; 6]).unwrap();
    assert_relative_eq!(p.distance, 1.5f64.sqrt(), max_relative = 1e-12);
    let p = nearest_point(&d6, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
    assert_relative_eq!(p.distance, 1.0, max_relative = 1e-12);
}

#[test]
fn dimension_limit() {
    let l = zn(33);
    assert!(matches!(shortest_vectors(&l, None), Err(Error::Capability(_))));
}

#[test]
fn node_budget_reports_partial() {
    let settings = EnumerationSettings {
        node_budget: 10,
        ..Default::default()
    };
    let e8 = construct(&LatticeName::E8).unwrap();
    match shortest_vectors_with(&e8, None, &settings) {
        Err(Error::Resource { partial, .. }) => assert!(partial),
        other => panic!("expected a resource error, got {other:?}"),
    }
}

#[test]
fn lll_examples() {
    let z = zn(4);
    let r = lll_reduce(&z, 0.99).unwrap();
    assert_eq!(r.exact_gram(), z.exact_gram());

    // {(1,0),(10^6,1)}: oracle = exhaustive search of small combinations.
    let l = LatticeBasis::from_rows(vec![vec![1.0, 0.0], vec![1e6, 1.0]]).unwrap();
    let r = lll_reduce(&l, 0.75).unwrap();
    let mut lambda1 = f64::INFINITY;
    for a in -5i64..=5 {
        for b in -5i64..=5 {
            if (a, b) != (0, 0) {
                lambda1 = lambda1.min(l.sq_norm(&[a, b]));
            }
        }
    }
    assert!(r.gram()[0][0] <= 2.0 * lambda1 + 1e-9);
}

#[test]
fn scrambled_e8_is_recovered() {
    let e8 = construct(&LatticeName::E8).unwrap();
    let rows = e8.exact_rows().unwrap().to_vec();
    // Unimodular scramble: add integer multiples of earlier rows.
    let mut scrambled = rows.clone();
    for i in 1..8 {
        for j in 0..i {
            let f = rat_int(((3 * i + 5 * j) % 7) as i64 - 3);
            let add: Vec<BigRational> = scrambled[j].iter().map(|x| x * &f).collect();
            for (a, b) in scrambled[i].iter_mut().zip(add) {
                *a += b;
            }
        }
    }
    let l = LatticeBasis::from_rational_rows(scrambled).unwrap();
    assert!(l.same_lattice(&e8, 1e-9));
    let r = lll_reduce(&l, 0.99).unwrap();
    assert_eq!(r.exact_gram_det(), Some(rat_int(1)));
    let s = shortest_vectors(&r, None).unwrap();
    assert_eq!((s.min_sq_norm, s.count), (2.0, 240));
}

#[test]
fn integer_relation_quintic_example() {
    let alpha = PreciseReal::parse("-7.82646099323767402929927644895").unwrap();
    let c = parse_rational("1e20").unwrap();
    let r = find_integer_relation(&alpha.powers(5), &c, 6).unwrap();
    assert_eq!(r.coefficients, vec![71, -5, 12, -19, 13, 2]);
    assert!(r.residual < 1e-25, "residual {}", r.residual);
    assert!(r.within_digit_bound);
}

#[test]
fn integer_relation_repeating_decimal() {
    // Oracle: 1/10 + 345/9990 = 224/1665, so 224 - 1665 x = 0.
    let x = PreciseReal::parse("0.1345345345345345345").unwrap();
    let one = PreciseReal::parse("1").unwrap();
    let r = find_integer_relation(&[one, x], &parse_rational("1e12").unwrap(), 6).unwrap();
    let (a, b) = (r.coefficients[0], r.coefficients[1]);
    assert_eq!(a * 1665, -b * 224);
    assert_eq!(rat(224, 1665), rat(1, 10) + rat(345, 9990));
}

#[test]
fn integer_relation_exact_dependence() {
    let xs: Vec<PreciseReal> = ["1", "2", "3"].iter().map(|s| PreciseReal::parse(s).unwrap()).collect();
    let r = find_integer_relation(&xs, &parse_rational("1e6").unwrap(), 3).unwrap();
    assert_eq!(r.residual, 0.0);
    assert!(r.coefficients.iter().any(|&c| c != 0));
}

#[test]
fn integer_relation_precision_check() {
    let x = PreciseReal::parse("3.14159").unwrap();
    let one = PreciseReal::parse("1").unwrap();
    let err = find_integer_relation(&[one, x], &parse_rational("1e20").unwrap(), 6);
    assert!(matches!(err, Err(Error::Precision(_))));
}

#[test]
fn golay_code() {
    let g = golay_generate();
    assert_eq!(g.weight_distribution()[8], 759);
    assert!(g.contains(0));
    assert!(g.is_self_dual());
}

#[test]
fn text_round_trip() {
    let e8 = construct(&LatticeName::E8).unwrap();
    let back = LatticeBasis::from_text(&e8.to_text()).unwrap();
    assert_eq!(back.exact_gram(), e8.exact_gram());
    let l = LatticeBasis::from_text("# comment\n2 0\n1/2 3\n").unwrap();
    assert_relative_eq!(l.covolume(), 6.0);
    assert!(LatticeBasis::from_text("1 2\n2 4\n").is_err());
}

#[test]
fn bounded_enumeration_matches_theta() {
    let z2 = zn(2);
    let r = shortest_vectors(&z2, Some(2.0)).unwrap();
    assert_eq!(r.within_bound, Some(8));
}

fn brute_force_min(l: &LatticeBasis) -> (f64, usize) {
    let n = l.dimension();
    let mut best = f64::INFINITY;
    let mut count = 0;
    let total = 13usize.pow(n as u32);
    for idx in 1..total {
        let mut k = idx;
        let x: Vec<i64> = (0..n)
            .map(|_| {
                let v = (k % 13) as i64 - 6;
                k /= 13;
                v
            })
            .collect();
        if x.iter().all(|&v| v == 0) {
            continue;
        }
        let d = l.sq_norm(&x);
        if d < best * (1.0 - 1e-9) {
            best = d;
            count = 1;
        } else if d <= best * (1.0 + 1e-9) {
            count += 1;
        }
    }
    (best, count)
}

fn basis_strategy() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (2usize..=4).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::vec(-1.5f64..1.5, n), n).prop_map(move |mut rows| {
            for (i, row) in rows.iter_mut().enumerate() {
                row[i] += 3.0;
            }
            rows
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn enumeration_matches_brute_force(rows in basis_strategy()) {
        let l = LatticeBasis::from_rows(rows).unwrap();
        let (best, count) = brute_force_min(&l);
        let settings = EnumerationSettings { keep_vectors: true, ..Default::default() };
        let r = shortest_vectors_with(&l, None, &settings).unwrap();
        prop_assert!((r.min_sq_norm - best).abs() <= 1e-9 * best, "enum {} brute {}", r.min_sq_norm, best);
        prop_assert_eq!(r.count, count);
        for v in r.vectors.unwrap() {
            let c: Vec<i64> = l.coordinates(&v).unwrap().iter().map(|x| x.round() as i64).collect();
            prop_assert!((l.sq_norm(&c) - best).abs() <= 1e-9 * best);
        }
    }

    #[test]
    fn dual_covolumes_multiply_to_one(rows in basis_strategy()) {
        let l = LatticeBasis::from_rows(rows).unwrap();
        let d = dual(&l).unwrap();
        prop_assert!((l.covolume() * d.covolume() - 1.0).abs() < 1e-9);
        prop_assert!(dual(&d).unwrap().same_lattice(&l, 1e-7));
    }

    #[test]
    fn lll_preserves_covolume(rows in basis_strategy()) {
        let l = LatticeBasis::from_rows(rows).unwrap();
        let r = lll_reduce(&l, 0.99).unwrap();
        prop_assert!((r.covolume() / l.covolume() - 1.0).abs() < 1e-9);
        prop_assert!(r.gram()[0][0] <= l.gram()[0][0] * (1.0 + 1e-12));
        prop_assert!(is_lll_reduced(r.gram(), 0.99, 1e-9));
        prop_assert!(r.same_lattice(&l, 1e-7));
    }

    #[test]
    fn exact_lll_preserves_determinant(entries in prop::collection::vec(-20i64..20, 9)) {
        let rows: Vec<Vec<BigRational>> = (0..3)
            .map(|i| (0..3).map(|j| rat_int(entries[3 * i + j] + if i == j { 50 } else { 0 })).collect())
            .collect();
        let l = LatticeBasis::from_rational_rows(rows).unwrap();
        let r = lll_reduce(&l, 0.99).unwrap();
        prop_assert_eq!(r.exact_gram_det(), l.exact_gram_det());
    }
}
