use std::sync::Arc;

use quartic_core::class_group::{class_group, class_group_ideals, DEFAULT_BOUND_CEILING};
use quartic_core::field::make_field_i64;
use quartic_core::forms::{class_group_structure, is_fundamental, quadratic_class_data, Sieve};
use quartic_core::order::{maximal_order, Order};

fn quadratic_order(d: i64) -> Order {
    let coeffs = if d.rem_euclid(4) == 1 { [(1 - d) / 4, -1, 1] } else { [-d / 4, 0, 1] };
    let order = maximal_order(Arc::new(make_field_i64(&coeffs).unwrap())).unwrap();
    assert_eq!(order.disc(), &d.into());
    order
}

#[test]
fn forms_and_ideals_agree_on_fundamental_discriminants() {
    let sieve = Sieve::new(2000);
    for d in (-1500..=1500).filter(|&d| d != 1 && is_fundamental(d)) {
        let forms = class_group_structure(d, &sieve).unwrap();
        let ideals = class_group_ideals(&quadratic_order(d), DEFAULT_BOUND_CEILING).unwrap();
        assert_eq!(ideals.invariants, forms, "D = {d}");
    }
}

#[test]
fn tabulated_quadratic_class_groups() {
    let sieve = Sieve::new(2000);
    let table: [(i64, &[u64]); 10] = [
        (-23, &[3]),
        (-47, &[5]),
        (-84, &[2, 2]),
        (-163, &[]),
        (40, &[2]),
        (60, &[2]),
        (229, &[3]),
        (316, &[3]),
        (328, &[4]),
        (904, &[8]),
    ];
    for (d, expected) in table {
        assert_eq!(class_group_structure(d, &sieve).unwrap(), expected, "D = {d}");
        assert_eq!(class_group(&quadratic_order(d), DEFAULT_BOUND_CEILING).unwrap().invariants, expected, "D = {d}");
    }
}

#[test]
fn narrow_class_number_doubles_without_a_negative_unit() {
    let sieve = Sieve::new(2000);
    for d in (5..3000).filter(|&d| is_fundamental(d)) {
        let data = quadratic_class_data(d, &sieve).unwrap();
        let expected = if data.unit_norm == Some(-1) { data.h } else { 2 * data.h };
        assert_eq!(data.narrow_h, expected, "D = {d}");
    }
}

#[test]
fn hilbert_class_field_of_minus_five_is_principal() {
    // ℚ(i, √5) is the Hilbert class field of ℚ(√-5)
    let order = maximal_order(Arc::new(make_field_i64(&[1, 0, 3, 0, 1]).unwrap())).unwrap();
    assert_eq!(order.disc(), &400.into());
    assert_eq!(class_group(&order, DEFAULT_BOUND_CEILING).unwrap().h, 1);
    assert_eq!(class_group(&quadratic_order(-20), DEFAULT_BOUND_CEILING).unwrap().h, 2);
}
