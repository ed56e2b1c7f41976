mod common;

use common::{diffeo, field, rational};
use prodiff::lie::{bch, bracket, exp_field, exp_field_flow, log_diffeo};
use prodiff::series::{compose, scale_automorphism, scale_field, FormalVectorField};
use prodiff::triangular::{exp_strict, log_unitriangular, rep_field, rep_t, taylor_decomposition};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bracket_is_antisymmetric(a in field(8), b in field(8)) {
        prop_assert_eq!(bracket(&a, &b).unwrap(), bracket(&b, &a).unwrap().neg());
    }

    #[test]
    fn jacobi_identity(a in field(8), b in field(8), c in field(8)) {
        let s = bracket(&a, &bracket(&b, &c).unwrap()).unwrap()
            .add(&bracket(&b, &bracket(&c, &a).unwrap()).unwrap())
            .add(&bracket(&c, &bracket(&a, &b).unwrap()).unwrap());
        prop_assert!(s.is_zero());
    }

    #[test]
    fn field_representation_preserves_bracket(a in field(7), b in field(7)) {
        let lhs = rep_field(&bracket(&a, &b).unwrap(), 8).unwrap();
        let rhs = rep_field(&a, 8).unwrap().commutator(&rep_field(&b, 8).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitution_reverses_composition(a in diffeo(8), b in diffeo(8)) {
        let lhs = rep_t(&a, 8).unwrap().mul(&rep_t(&b, 8).unwrap()).unwrap();
        prop_assert_eq!(lhs, rep_t(&compose(&b, &a).unwrap(), 8).unwrap());
    }

    #[test]
    fn exp_matrix_equals_flow(a in field(9)) {
        prop_assert_eq!(exp_field(&a), exp_field_flow(&a));
    }

    #[test]
    fn log_inverts_exp(a in field(9)) {
        prop_assert_eq!(log_diffeo(&exp_field(&a)).unwrap(), a);
    }

    #[test]
    fn exp_inverts_log(g in diffeo(10)) {
        prop_assert_eq!(exp_field(&log_diffeo(&g).unwrap()), g);
    }

    #[test]
    fn matrix_exp_and_log_are_inverse(a in field(7)) {
        let s = rep_field(&a, 8).unwrap();
        prop_assert_eq!(log_unitriangular(&exp_strict(&s).unwrap()).unwrap(), s);
    }

    #[test]
    fn exp_is_scaling_equivariant(a in field(8), s in rational()) {
        prop_assert_eq!(exp_field(&scale_field(&a, &s)), scale_automorphism(&exp_field(&a), &s));
    }

    #[test]
    fn bch_matches_composition(a in field(7), b in field(7)) {
        let c = bch(&a, &b).unwrap();
        prop_assert_eq!(exp_field(&c), compose(&exp_field(&a), &exp_field(&b)).unwrap());
    }

    #[test]
    fn bch_of_commuting_multiples(a in field(7), s in rational(), t in rational()) {
        let sum = a.scale(&(&s + &t));
        prop_assert_eq!(bch(&a.scale(&s), &a.scale(&t)).unwrap(), sum);
    }

    #[test]
    fn taylor_decomposition_reassembles(g in diffeo(12)) {
        prop_assert!(taylor_decomposition(&g, 12).is_ok());
    }
}

#[test]
fn exp_truncation_is_consistent() {
    let a = FormalVectorField::new(
        6,
        (1..=6)
            .map(|j| prodiff::rational::ratio(j as i64, 7))
            .collect(),
    )
    .unwrap();
    assert_eq!(exp_field(&a).truncate_to(5), exp_field(&a.truncate_to(4)));
}
