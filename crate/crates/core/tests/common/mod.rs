#![allow(dead_code)]

use prodiff::rational::ratio;
use prodiff::{Coefficient, FormalDiffeo, FormalVectorField};
use proptest::prelude::*;

pub fn rational() -> impl Strategy<Value = Coefficient> {
    (-9i64..=9, 1i64..=5).prop_map(|(p, q)| ratio(p, q))
}

pub fn positive() -> impl Strategy<Value = Coefficient> {
    (1i64..=6, 1i64..=6).prop_map(|(p, q)| ratio(p, q))
}

pub fn diffeo(order: usize) -> impl Strategy<Value = FormalDiffeo> {
    prop::collection::vec(rational(), order - 1)
        .prop_map(move |higher| FormalDiffeo::new(order, higher).unwrap())
}

pub fn field(order: usize) -> impl Strategy<Value = FormalVectorField> {
    prop::collection::vec(rational(), order)
        .prop_map(move |coeffs| FormalVectorField::new(order, coeffs).unwrap())
}
