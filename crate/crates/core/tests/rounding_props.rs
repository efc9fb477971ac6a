mod common;

use approxhad::constructions::HadamardOrderCatalog;
use approxhad::flat::{flat_orthogonal, OrthMatrix};
use approxhad::rounding::{bernstein_bound, evaluate_trial, round_best, round_once, RoundingPlan};
use approxhad::spectral::weyl_sandwich;
use nalgebra::DMatrix;
use proptest::prelude::*;

fn fixed_target() -> OrthMatrix {
    // Orthogonal 8×8 with uneven entries: a Givens-rotated scaled Hadamard.
    let catalog = HadamardOrderCatalog::build(8);
    let h = OrthMatrix::scaled_hadamard(&catalog.hadamard(8).unwrap()).unwrap();
    let (c, s) = (0.8f64, 0.6f64);
    let mut g = DMatrix::<f64>::identity(8, 8);
    g[(0, 0)] = c;
    g[(0, 1)] = -s;
    g[(1, 0)] = s;
    g[(1, 1)] = c;
    OrthMatrix::new(h.matrix() * g).unwrap()
}

#[test]
fn rounding_is_deterministic_across_thread_counts() {
    let catalog = HadamardOrderCatalog::build(64);
    let (target, _) = flat_orthogonal(30, &catalog).unwrap();
    let plan = RoundingPlan::new(target, 24, 99).unwrap();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| round_best(&plan))
    };
    let (a, b) = (run(1), run(4));
    assert_eq!(a.best.matrix, b.best.matrix);
    assert_eq!(a.best.trial_index, b.best.trial_index);
    assert_eq!(a.best.spectral.kappa.to_bits(), b.best.spectral.kappa.to_bits());
    assert_eq!(a.empirical_e_norm.to_bits(), b.empirical_e_norm.to_bits());
}

#[test]
fn rounding_is_entrywise_unbiased() {
    let plan = RoundingPlan::new(fixed_target(), 1, 2024).unwrap();
    let trials = 10_000u64;
    let mut sums = vec![0i64; 64];
    for t in 0..trials {
        let x = round_once(&plan, t);
        for (s, &v) in sums.iter_mut().zip(x.as_slice()) {
            *s += v as i64;
        }
    }
    let tol = 4.0 / (trials as f64).sqrt();
    for i in 0..8 {
        for j in 0..8 {
            let mean = sums[i * 8 + j] as f64 / trials as f64;
            let want = plan.scaled()[(i, j)];
            assert!((mean - want).abs() <= tol, "({i},{j}) mean {mean} vs {want}");
        }
    }
}

#[test]
fn every_trial_sits_inside_the_weyl_sandwich() {
    let catalog = HadamardOrderCatalog::build(64);
    for n in [7usize, 11, 20, 31] {
        let (target, _) = flat_orthogonal(n, &catalog).unwrap();
        let plan = RoundingPlan::new(target.clone(), 50, n as u64).unwrap();
        for t in 0..50 {
            let outcome = evaluate_trial(&plan, t);
            let w = weyl_sandwich(&target, &outcome.matrix).unwrap();
            assert!(outcome.spectral.sigma_min >= 1.0 / plan.u() - outcome.e_norm - 1e-9);
            assert!(outcome.spectral.sigma_max <= 1.0 / plan.u() + outcome.e_norm + 1e-9);
            assert!((w.e_norm - outcome.e_norm).abs() <= 1e-9 * w.e_norm.max(1.0));
        }
    }
}

proptest! {
    #![proptest_config(common::config(256))]

    #[test]
    fn bound_increases_with_flatness(n in 2usize..2000, u1 in 0.0001f64..1.0, u2 in 0.0001f64..1.0) {
        let (lo, hi) = if u1 <= u2 { (u1, u2) } else { (u2, u1) };
        let (a, b) = (bernstein_bound(n, lo), bernstein_bound(n, hi));
        if b.kappa_bound.is_finite() {
            prop_assert!(a.kappa_bound.is_finite());
            prop_assert!(a.kappa_bound <= b.kappa_bound * (1.0 + 1e-12));
        }
    }
}
