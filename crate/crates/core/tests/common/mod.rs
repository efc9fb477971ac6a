#![allow(dead_code)]

pub mod golden;

use approxhad::{condition_number, SignMatrix};
use proptest::prelude::*;

pub fn sign_matrix(n: usize) -> impl Strategy<Value = SignMatrix> {
    prop::collection::vec(prop::bool::ANY, n * n)
        .prop_map(move |bits| SignMatrix::new(n, bits.into_iter().map(|b| if b { 1 } else { -1 }).collect()).unwrap())
}

pub fn sized_sign_matrix(lo: usize, hi: usize) -> impl Strategy<Value = SignMatrix> {
    (lo..=hi).prop_flat_map(sign_matrix)
}

/// Random signed permutation as (permutation, signs).
pub fn signed_permutation(n: usize) -> impl Strategy<Value = (Vec<usize>, Vec<bool>)> {
    (Just((0..n).collect::<Vec<usize>>()).prop_shuffle(), prop::collection::vec(prop::bool::ANY, n))
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

pub fn nonsingular(lo: usize, hi: usize) -> impl Strategy<Value = SignMatrix> {
    sized_sign_matrix(lo, hi).prop_filter("singular", |a| condition_number(a).kappa.is_finite())
}

pub fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}
