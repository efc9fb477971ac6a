mod common;

use approxhad::constructions::sylvester;
use approxhad::lower_bound::{
    best_clique_certificate, check_orthogonal_triple_obstruction, clique_bound, find_orthogonal_triple, sign_coloring,
    CliqueSign, EdgeColor,
};
use approxhad::matrix::GramMatrix;
use approxhad::spectral::condition_number_of_gram;
use approxhad::{condition_number, SignMatrix};
use common::sign_matrix;
use proptest::prelude::*;
use proptest::strategy::ValueTree;

#[test]
fn clique_bound_never_exceeds_kappa() {
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    let orders = [3usize, 5, 6, 7, 9, 10, 11];
    for case in 0..500 {
        let n = orders[case % orders.len()];
        let a = sign_matrix(n).new_tree(&mut runner).unwrap().current();
        let cert = best_clique_certificate(&a);
        assert!(cert.verify(&a.gram()));
        let kappa = condition_number(&a).kappa;
        assert!(cert.bound <= kappa + 1e-9, "n={n}: {} > {kappa}", cert.bound);
    }
}

#[test]
fn positive_clique_bound_is_attained() {
    for n in 2..40usize {
        for k in 2..=n {
            let g = GramMatrix::scalar_pattern(k, n as i64, 1);
            let kappa = condition_number_of_gram(&g).kappa;
            assert!((kappa - clique_bound(n, k, CliqueSign::Positive)).abs() <= 1e-12, "n={n} k={k}");
        }
    }
    let barba = SignMatrix::circulant(&[1, 1, 1, 1, -1]).unwrap();
    let cert = best_clique_certificate(&barba);
    assert!((cert.bound - condition_number(&barba).kappa).abs() <= 1e-12);
}

#[test]
fn negative_clique_bound_is_attained() {
    for n in 2..40usize {
        for k in 2..=n {
            let g = GramMatrix::scalar_pattern(k, n as i64, -1);
            let kappa = condition_number_of_gram(&g).kappa;
            let want = ((n + 1) as f64 / (n + 1 - k) as f64).sqrt();
            assert!((kappa - want).abs() <= 1e-12 * want, "n={n} k={k}");
            assert!((clique_bound(n, k, CliqueSign::Negative) - want).abs() <= 1e-12 * want);
        }
    }
}

#[test]
fn orthogonal_triples_exist_exactly_at_multiples_of_four() {
    for n in 1..=14usize {
        let triple = find_orthogonal_triple(n);
        assert_eq!(triple.is_some(), n % 4 == 0, "n = {n}");
        if let Some(t) = triple {
            let half = (n / 2) as u32;
            assert_eq!((t[0] ^ t[1]).count_ones(), half);
            assert_eq!((t[0] ^ t[2]).count_ones(), half);
            assert_eq!((t[1] ^ t[2]).count_ones(), half);
        }
    }
    for t in 2..4 {
        let r = check_orthogonal_triple_obstruction(&sylvester(t).unwrap());
        assert!(r.zero_triangle.is_some() && r.consistent);
    }
}

proptest! {
    #![proptest_config(common::config(256))]

    #[test]
    fn random_columns_respect_the_triple_obstruction(a in (1usize..=12).prop_flat_map(sign_matrix)) {
        let r = check_orthogonal_triple_obstruction(&a);
        prop_assert!(r.consistent);
        if a.n() % 4 != 0 {
            prop_assert!(r.zero_triangle.is_none());
        }
    }

    #[test]
    fn odd_orders_have_no_zero_edges(a in (0usize..8).prop_flat_map(|h| sign_matrix(2 * h + 1))) {
        prop_assert_eq!(sign_coloring(&a.gram()).count(EdgeColor::Zero), 0);
    }
}
