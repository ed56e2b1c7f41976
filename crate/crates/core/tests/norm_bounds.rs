mod common;

use common::{diffeo, positive, rational};
use num_traits::Zero;
use prodiff::norms::{
    field_weight, h_norm_bound, inversion_norm_bound, operator_norm_trunc, qn_bound_holds, qn_norm,
    qn_norm_by_columns, u_bound_enumeration, w_norm, Tail,
};
use prodiff::rational::{int, ratio};
use prodiff::series::{scale_automorphism, FormalVectorField};
use prodiff::triangular::rep_field;
use prodiff::{Coefficient, FormalDiffeo};
use proptest::prelude::*;

fn supported_field() -> impl Strategy<Value = FormalVectorField> {
    prop::collection::vec(rational(), 4).prop_map(|c| FormalVectorField::new(4, c).unwrap())
}

fn small_diffeo(order: usize) -> impl Strategy<Value = FormalDiffeo> {
    prop::collection::vec((-3i64..=3, 3i64..=6), order - 1).prop_map(move |v| {
        FormalDiffeo::new(order, v.into_iter().map(|(p, q)| ratio(p, q)).collect()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn w_norm_scaling(g in diffeo(10), s in positive(), tau in positive()) {
        let lhs = w_norm(&scale_automorphism(&g, &tau), &s, Tail::Zero).unwrap().value;
        prop_assert_eq!(lhs, w_norm(&g, &(&s * &tau), Tail::Zero).unwrap().value);
    }

    #[test]
    fn w_norm_monotone_in_sigma(g in diffeo(10), s in positive(), bump in positive()) {
        let a = w_norm(&g, &s, Tail::Zero).unwrap().value;
        let b = w_norm(&g, &(&s + &bump), Tail::Zero).unwrap().value;
        prop_assert!(a <= b);
    }

    #[test]
    fn h_norm_bound_holds(g in diffeo(10)) {
        prop_assert!(h_norm_bound(&g).is_ok());
    }

    #[test]
    fn inversion_stays_under_cap(g in small_diffeo(10)) {
        prop_assert!(inversion_norm_bound(&g).is_ok());
    }

    #[test]
    fn field_norm_sandwich(f in supported_field(), t in positive()) {
        let lower = field_weight(&f, &t);
        let upper = &lower * int(2);
        let mut prev = Coefficient::zero();
        for m in [1usize, 3, 6, 12] {
            let a = rep_field(&f.padded(m + 4), m + 4).unwrap();
            let v = operator_norm_trunc(&a, &t, m).unwrap().value;
            prop_assert!(v >= prev);
            prop_assert!(lower <= v && v <= upper);
            prev = v;
        }
    }

    #[test]
    fn operator_norm_submultiplicative(a in supported_field(), b in supported_field()) {
        let (m, t) = (6usize, int(1));
        let dim = m + 4 + 4 + 1;
        let ra = rep_field(&a.padded(dim), dim - 1).unwrap();
        let rb = rep_field(&b.padded(dim), dim - 1).unwrap();
        let ab = operator_norm_trunc(&ra.mul(&rb).unwrap(), &t, m).unwrap().value;
        let na = operator_norm_trunc(&ra, &t, m + b.top_degree()).unwrap().value;
        let nb = operator_norm_trunc(&rb, &t, m).unwrap().value;
        prop_assert!(ab <= na * nb);
    }
}

#[test]
fn qn_goldens_through_ten() {
    for n in 0..=10 {
        assert_eq!(
            qn_norm_by_columns(n).unwrap().value,
            qn_norm(n).value,
            "n = {n}"
        );
        assert!(qn_bound_holds(n), "n = {n}");
    }
}

#[test]
fn combinatorial_bound_to_twenty() {
    let e = u_bound_enumeration(20);
    assert!(e.violations.is_empty(), "{:?}", e.violations);
    assert!(e.worst_ratio <= int(1));
}
