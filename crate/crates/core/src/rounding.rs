//! Randomized rounding of a flat orthogonal matrix into a ±1 matrix.
//!
//! The target is scaled to `M' = M/‖M‖_max` and each entry is rounded to
//! +1 with probability `(1 + M'_ij)/2`, so `E[X] = M'`. The matrix
//! Bernstein inequality bounds `E‖X − M'‖_op` by
//! `e(n) = sqrt(2(n − 1/u²)·ln(2n)) + (2/3)·ln(2n)`.
//!
//! Random streams: trial `t` under master seed `s` uses
//! `ChaCha20Rng::seed_from_u64(s)` with `set_stream(t)`. Entries are
//! drawn in row-major order, one `f64` in `[0, 1)` each; entry index
//! `i·n + j` is therefore the position in that stream. Changing the
//! generator changes every reported matrix.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flat::OrthMatrix;
use crate::matrix::SignMatrix;
use crate::spectral::{condition_number, op_norm, SpectralReport};

#[derive(Clone, Debug, Serialize)]
pub struct BernsteinCertificate {
    pub n: usize,
    pub u: f64,
    pub e_n: f64,
    /// (1 + u·e)/(1 − u·e), infinite unless u·e < 1.
    pub kappa_bound: f64,
    /// Same with 2·e in place of e.
    pub kappa_bound_doubled: f64,
}

fn ratio_bound(ue: f64) -> f64 {
    if ue < 1.0 {
        (1.0 + ue) / (1.0 - ue)
    } else {
        f64::INFINITY
    }
}

/// Natural logarithm throughout; the variance term `n − 1/u²` is clamped
/// at zero.
pub fn bernstein_bound(n: usize, u: f64) -> BernsteinCertificate {
    let nf = n as f64;
    let v = (nf - 1.0 / (u * u)).max(0.0);
    let log2n = (2.0 * nf).ln();
    let e_n = (2.0 * v * log2n).sqrt() + (2.0 / 3.0) * log2n;
    BernsteinCertificate {
        n,
        u,
        e_n,
        kappa_bound: ratio_bound(u * e_n),
        kappa_bound_doubled: ratio_bound(2.0 * u * e_n),
    }
}

#[derive(Clone, Debug)]
pub struct RoundingPlan {
    target: OrthMatrix,
    scaled: DMatrix<f64>,
    pub trials: usize,
    pub master_seed: u64,
}

impl RoundingPlan {
    pub fn new(target: OrthMatrix, trials: usize, master_seed: u64) -> Result<Self> {
        if trials == 0 {
            return Err(Error::Precondition("at least one trial is required".into()));
        }
        let scaled = target.matrix() / target.max_abs_entry();
        Ok(Self {
            target,
            scaled,
            trials,
            master_seed,
        })
    }

    pub fn target(&self) -> &OrthMatrix {
        &self.target
    }

    /// M/‖M‖_max, entries in [−1, 1].
    pub fn scaled(&self) -> &DMatrix<f64> {
        &self.scaled
    }

    pub fn n(&self) -> usize {
        self.target.n()
    }

    pub fn u(&self) -> f64 {
        self.target.max_abs_entry()
    }
}

pub fn trial_rng(master_seed: u64, trial_index: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(master_seed);
    rng.set_stream(trial_index);
    rng
}

/// One independent rounding. Deterministic in (master_seed, trial_index).
pub fn round_once(plan: &RoundingPlan, trial_index: u64) -> SignMatrix {
    let n = plan.n();
    let mut rng = trial_rng(plan.master_seed, trial_index);
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let p_plus = 0.5 * (1.0 + plan.scaled[(i, j)]);
            let draw: f64 = rng.random();
            entries.push(if draw < p_plus { 1 } else { -1 });
        }
    }
    SignMatrix::new(n, entries).expect("rounded entries are ±1")
}

#[derive(Clone, Debug)]
pub struct TrialOutcome {
    pub trial_index: u64,
    pub matrix: SignMatrix,
    pub spectral: SpectralReport,
    /// ‖X − M'‖_op
    pub e_norm: f64,
}

pub fn evaluate_trial(plan: &RoundingPlan, trial_index: u64) -> TrialOutcome {
    let matrix = round_once(plan, trial_index);
    let spectral = condition_number(&matrix);
    let e_norm = op_norm(&(matrix.to_dmatrix() - &plan.scaled));
    TrialOutcome {
        trial_index,
        matrix,
        spectral,
        e_norm,
    }
}

#[derive(Clone, Debug)]
pub struct RoundingResult {
    pub best: TrialOutcome,
    pub certificate: BernsteinCertificate,
    /// Minimum over trials of ‖X − M'‖_op.
    pub empirical_e_norm: f64,
}

/// Runs every trial (in parallel) and keeps the one with the smallest κ,
/// ties going to the smaller trial index.
pub fn round_best(plan: &RoundingPlan) -> RoundingResult {
    let outcomes: Vec<TrialOutcome> = (0..plan.trials as u64)
        .into_par_iter()
        .map(|t| evaluate_trial(plan, t))
        .collect();
    let empirical_e_norm = outcomes
        .iter()
        .map(|o| o.e_norm)
        .fold(f64::INFINITY, f64::min);
    let best = outcomes
        .into_iter()
        .min_by(|a, b| {
            a.spectral
                .kappa
                .total_cmp(&b.spectral.kappa)
                .then(a.trial_index.cmp(&b.trial_index))
        })
        .expect("trials ≥ 1");
    RoundingResult {
        best,
        certificate: bernstein_bound(plan.n(), plan.u()),
        empirical_e_norm,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::sylvester;

    #[test]
    fn bernstein_at_hadamard_order() {
        let c = bernstein_bound(16, 0.25);
        assert!((c.e_n - (2.0 / 3.0) * 32f64.ln()).abs() < 1e-12);
        assert!((c.e_n - 2.31049).abs() < 1e-5);
        // u·e ≈ 0.578 < 1, but 2·u·e > 1.
        assert!(c.kappa_bound.is_finite());
        assert!(c.kappa_bound_doubled.is_infinite());
    }

    #[test]
    fn bernstein_n96() {
        let u = 1.0 / 96f64.sqrt();
        let c = bernstein_bound(96, u);
        assert!((c.e_n - 3.504997).abs() < 1e-6);
        assert!((u * c.e_n - 0.3577).abs() < 1e-4);
        assert!((c.kappa_bound - 2.114).abs() < 1e-3);
    }

    #[test]
    fn bernstein_infinite_when_ue_at_least_one() {
        let c = bernstein_bound(50, 0.9);
        assert!(c.kappa_bound.is_infinite());
    }

    #[test]
    fn degenerate_probabilities_are_deterministic() {
        let h = OrthMatrix::scaled_hadamard(&sylvester(3).unwrap()).unwrap();
        let plan = RoundingPlan::new(h, 8, 42).unwrap();
        let expected = sylvester(3).unwrap();
        for t in 0..8 {
            assert_eq!(round_once(&plan, t), expected);
        }
        let best = round_best(&plan);
        assert_eq!(best.best.spectral.kappa, 1.0);
        assert_eq!(best.best.trial_index, 0);
        assert!(best.empirical_e_norm < 1e-12);
    }

    #[test]
    fn zero_target_entry_is_unbiased() {
        // The 3×3 flat permutation matrix has scaled entry 0 at (0, 0).
        let p = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        let plan = RoundingPlan::new(OrthMatrix::new(p).unwrap(), 1, 0).unwrap();
        let trials = 100_000u64;
        let mut sum = 0i64;
        for t in 0..trials {
            let x = round_once(&plan, t);
            sum += x.get(0, 0) as i64;
            assert_eq!(x.get(0, 1), 1);
        }
        let mean = sum as f64 / trials as f64;
        assert!(mean.abs() < 0.02, "mean {mean}");
    }

    #[test]
    fn zero_trials_rejected() {
        let h = OrthMatrix::scaled_hadamard(&sylvester(1).unwrap()).unwrap();
        assert!(RoundingPlan::new(h, 0, 0).is_err());
    }
}
