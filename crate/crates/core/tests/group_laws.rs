mod common;

use common::{diffeo, positive, rational};
use prodiff::series::{compose, invert, invert_lagrange, invert_recursive, scale_automorphism};
use prodiff::FormalDiffeo;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_is_associative(
        (a, b, c) in (2usize..9).prop_flat_map(|n| (diffeo(n), diffeo(n), diffeo(n)))
    ) {
        prop_assert_eq!(
            compose(&compose(&a, &b).unwrap(), &c).unwrap(),
            compose(&a, &compose(&b, &c).unwrap()).unwrap()
        );
    }

    #[test]
    fn identity_is_two_sided(a in diffeo(10)) {
        let id = FormalDiffeo::identity(10);
        prop_assert_eq!(compose(&a, &id).unwrap(), a.clone());
        prop_assert_eq!(compose(&id, &a).unwrap(), a);
    }

    #[test]
    fn inverse_is_two_sided(a in diffeo(10)) {
        let inv = invert(&a);
        prop_assert!(compose(&a, &inv).unwrap().is_identity());
        prop_assert!(compose(&inv, &a).unwrap().is_identity());
    }

    #[test]
    fn inversion_oracles_agree(a in diffeo(12)) {
        prop_assert_eq!(invert_lagrange(&a), invert_recursive(&a));
    }

    #[test]
    fn inverse_of_composition_reverses(a in diffeo(8), b in diffeo(8)) {
        let lhs = invert(&compose(&a, &b).unwrap());
        prop_assert_eq!(lhs, compose(&invert(&b), &invert(&a)).unwrap());
    }

    #[test]
    fn truncation_commutes_with_composition(a in diffeo(9), b in diffeo(9), k in 1usize..=9) {
        let lhs = compose(&a, &b).unwrap().truncate_to(k);
        prop_assert_eq!(lhs, compose(&a.truncate_to(k), &b.truncate_to(k)).unwrap());
    }

    #[test]
    fn scaling_is_an_automorphism(a in diffeo(8), b in diffeo(8), s in rational()) {
        let lhs = scale_automorphism(&compose(&a, &b).unwrap(), &s);
        let rhs = compose(&scale_automorphism(&a, &s), &scale_automorphism(&b, &s)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn scaling_is_a_one_parameter_family(a in diffeo(8), s in positive(), t in positive()) {
        let twice = scale_automorphism(&scale_automorphism(&a, &s), &t);
        prop_assert_eq!(twice, scale_automorphism(&a, &(&s * &t)));
        prop_assert_eq!(scale_automorphism(&a, &prodiff::rational::int(1)), a.clone());
        prop_assert!(scale_automorphism(&a, &prodiff::rational::int(0)).is_identity());
    }
}
