use std::sync::Arc;

use proptest::prelude::*;
use quartic_core::arith::{factor_mod_p, IntPoly};
use quartic_core::field::make_field_i64;
use quartic_core::geodesic::{angle_condition, angle_lattice_distance};
use quartic_core::invariants::compute_invariants;
use quartic_core::rep::{KmType, VirtualDecomposition};
use quartic_core::splitting::{FieldClass, PrimeSet};

fn binomial(n: i64, k: i64) -> i64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn km_type() -> impl Strategy<Value = KmType> {
    prop_oneof![
        Just(KmType::Triv),
        Just(KmType::Delta),
        (0i32..4, 0i32..4)
            .prop_filter("nonzero weight", |(l, k)| *l != 0 || *k != 0)
            .prop_map(|(l, k)| KmType::pair(l, k).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn key_round_trip(c in prop::collection::vec(-50i64..50, 4)) {
        let f = IntPoly::from_i64(&[c[0], c[1], c[2], c[3], 1]);
        prop_assert_eq!(IntPoly::parse_key(&f.key()).unwrap(), f);
    }

    #[test]
    fn factorization_multiplies_back(c in prop::collection::vec(-20i64..20, 4), p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13])) {
        let f = IntPoly::from_i64(&[c[0], c[1], c[2], c[3], 1]);
        let fac = factor_mod_p(&f, p).unwrap();
        let diff: Vec<i64> = fac.product().coeffs().iter().zip(f.coeffs())
            .map(|(a, b)| ((a - b) % p).try_into().unwrap())
            .collect();
        prop_assert!(diff.iter().all(|&d| d == 0));
    }

    #[test]
    fn exterior_power_dimensions(types in prop::collection::vec(km_type(), 1..4)) {
        let pairs: Vec<(KmType, i64)> = types.iter().map(|&t| (t, 1)).collect();
        let v = VirtualDecomposition::from_pairs(&pairs).character();
        let d = v.dim();
        for n in 0..=d {
            let power = v.exterior_power(n as usize).unwrap();
            prop_assert_eq!(power.dim(), binomial(d, n));
            prop_assert!(power.decompose().unwrap().is_genuine());
        }
    }

    #[test]
    fn angle_condition_symmetries(theta in 0.0f64..std::f64::consts::PI, phi in 0.0f64..std::f64::consts::PI) {
        prop_assert_eq!(angle_condition(theta, phi), angle_condition(phi, theta));
        let pi = std::f64::consts::PI;
        prop_assert!((angle_lattice_distance(theta) - angle_lattice_distance(theta + pi)).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // x⁴ + a x² + b with a² < 4b is totally complex
    #[test]
    fn cc_unit_structure(a in -6i64..=6, b in 1i64..=12) {
        prop_assume!(a * a < 4 * b);
        let Ok(field) = make_field_i64(&[b, 0, a, 0, 1]) else { return Ok(()) };
        let s = PrimeSet::new(&[2, 3]).unwrap();
        let row = compute_invariants(Arc::new(field), &s, 60.0).unwrap();
        if let Some(detail) = &row.detail {
            prop_assert_eq!(row.class == Some(FieldClass::Cc), detail.weakly_neat);
            prop_assert!([2, 4, 6, 8, 10, 12].contains(&row.mu.unwrap()));
            prop_assert!([1, 2, 4].contains(&row.kappa.unwrap()));
            let norm = detail.order.norm(&detail.units.fund_unit);
            prop_assert_eq!(norm, 1.into());
        }
    }
}
