mod common;

use approxhad::families::{
    barba_kappa, conference_kappa, conference_plus_identity, sds_block_matrix, sds_kappa, sds_search, verify_barba,
};
use approxhad::field::FiniteFieldSpec;
use approxhad::poly::{charpoly_exact, IntPolynomial};
use approxhad::SignMatrix;
use common::{rel_close, sized_sign_matrix};
use proptest::prelude::*;

fn barba13() -> SignMatrix {
    // Back-circulant on the quadratic-residue-like set {0, 1, 3, 9} mod 13.
    let minus = [0usize, 1, 3, 9];
    SignMatrix::from_fn(13, |i, j| !minus.contains(&((i + j) % 13)))
}

fn barba5() -> SignMatrix {
    SignMatrix::circulant(&[1, 1, 1, 1, -1]).unwrap()
}

fn circulant_product(x: &[i8], y: &[i8]) -> Vec<i64> {
    let h = x.len();
    let c = |v: &[i8], i: usize, j: usize| v[(j + h - i) % h] as i64;
    let mut out = vec![0; h * h];
    for i in 0..h {
        for j in 0..h {
            out[i * h + j] = (0..h).map(|k| c(x, i, k) * c(y, k, j)).sum();
        }
    }
    out
}

#[test]
fn conference_plus_identity_for_supported_orders() {
    let mut seen = 0;
    for n in (6usize..=102).step_by(4) {
        if !FiniteFieldSpec::is_supported((n - 1) as u64) {
            continue;
        }
        let f = conference_plus_identity(n).unwrap();
        assert!(rel_close(f.kappa_computed, conference_kappa(n), 1e-10), "n = {n}");
        seen += 1;
    }
    assert!(seen >= 15);
}

#[test]
fn barba_matrices_have_the_expected_characteristic_polynomial() {
    for a in [barba5(), barba13()] {
        let n = a.n() as i64;
        let f = verify_barba(&a).unwrap();
        assert!(rel_close(f.kappa_computed, barba_kappa(a.n()), 1e-10));
        let want = IntPolynomial::linear_power(2 * n - 1, 1).mul(&IntPolynomial::linear_power(n - 1, (n - 1) as usize));
        assert_eq!(charpoly_exact(&a.gram()), want);
    }
}

#[test]
fn sds_pairs_commute_and_match_closed_form() {
    for half in 2..=9 {
        for pair in sds_search(half).unwrap() {
            assert_eq!(circulant_product(&pair.r, &pair.s), circulant_product(&pair.s, &pair.r));
            let f = sds_block_matrix(&pair).unwrap();
            assert!(rel_close(f.kappa_computed, f.kappa_closed_form, 1e-10), "{pair:?}");
        }
    }
}

#[test]
fn sds_beats_conference_where_both_exist() {
    for n in [6usize, 10, 14, 18, 26, 30] {
        let pairs = sds_search(n / 2).unwrap();
        let Some(pair) = pairs.first() else { continue };
        let sds = sds_block_matrix(pair).unwrap().kappa_computed;
        let conf = conference_plus_identity(n).unwrap().kappa_computed;
        assert!(rel_close(sds, sds_kappa(n), 1e-10));
        assert!(sds < conf, "n = {n}: {sds} vs {conf}");
    }
}

proptest! {
    #![proptest_config(common::config(256))]

    #[test]
    fn barba_acceptance_is_exact(a in sized_sign_matrix(2, 9)) {
        let g = a.gram();
        let n = a.n();
        let exact = (0..n).all(|i| (0..n).all(|j| g.get(i, j) == if i == j { n as i64 } else { 1 }));
        prop_assert_eq!(verify_barba(&a).is_ok(), exact);
    }

    #[test]
    fn barba_survives_row_permutation(perm in Just((0..13usize).collect::<Vec<_>>()).prop_shuffle()) {
        let a = barba13();
        let id: Vec<usize> = (0..13).collect();
        prop_assert!(verify_barba(&a.permuted(&perm, &id)).is_ok());
    }
}
