//! Exact κ(n) by enumeration.
//!
//! κ is invariant under negating rows and columns, so it suffices to
//! enumerate matrices whose first row and first column are all +1: the
//! remaining (n−1)² entries are the bits of the candidate index, row-major,
//! with a set bit meaning −1.

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::{now_timestamp, Effort, RankKey, SearchRecord, StructureClass};
use crate::error::{Error, Result};
use crate::matrix::SignMatrix;
use crate::spectral::SpectralReport;

/// Largest n enumerated without the long-running flag.
pub const EXHAUSTIVE_DEFAULT_MAX: usize = 5;
/// Largest n enumerated at all.
pub const EXHAUSTIVE_LONG_MAX: usize = 6;

const CHUNK: u64 = 1 << 16;

#[derive(Default)]
pub struct ExhaustiveOptions<'a> {
    pub long_running: bool,
    /// Called after each batch of candidates with (done, total).
    pub progress: Option<&'a (dyn Fn(u64, u64) + Sync)>,
}

/// Column bitmasks (bit i set when entry (i, j) is −1) for a candidate.
fn columns_normalized(n: usize, index: u64) -> [u32; 8] {
    let mut cols = [0u32; 8];
    for i in 1..n {
        for j in 1..n {
            let bit = (i - 1) * (n - 1) + (j - 1);
            if (index >> bit) & 1 == 1 {
                cols[j] |= 1 << i;
            }
        }
    }
    cols
}

fn columns_full(n: usize, index: u64) -> [u32; 8] {
    let mut cols = [0u32; 8];
    for i in 0..n {
        for j in 0..n {
            if (index >> (i * n + j)) & 1 == 1 {
                cols[j] |= 1 << i;
            }
        }
    }
    cols
}

fn score(n: usize, cols: &[u32; 8]) -> RankKey {
    let mut g = DMatrix::<f64>::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let v = n as f64 - 2.0 * (cols[a] ^ cols[b]).count_ones() as f64;
            g[(a, b)] = v;
            g[(b, a)] = v;
        }
    }
    let eig: Vec<f64> = g.symmetric_eigenvalues().iter().copied().collect();
    RankKey::of(&SpectralReport::from_gram_eigenvalues(n, eig))
}

fn matrix_from_columns(n: usize, cols: &[u32; 8]) -> SignMatrix {
    SignMatrix::from_fn(n, |i, j| (cols[j] >> i) & 1 == 0)
}

fn enumerate(
    n: usize,
    bits: usize,
    columns: fn(usize, u64) -> [u32; 8],
    progress: Option<&(dyn Fn(u64, u64) + Sync)>,
) -> (RankKey, u64) {
    let total = 1u64 << bits;
    let chunks = total.div_ceil(CHUNK);
    let mut best: Option<(RankKey, u64)> = None;
    // Batches bound the time between progress reports.
    let batch = 64u64;
    let mut start = 0u64;
    while start < chunks {
        let end = (start + batch).min(chunks);
        let local = (start..end)
            .into_par_iter()
            .map(|c| {
                let lo = c * CHUNK;
                let hi = (lo + CHUNK).min(total);
                (lo..hi)
                    .map(|idx| (score(n, &columns(n, idx)), idx))
                    .min()
                    .expect("nonempty chunk")
            })
            .min()
            .expect("nonempty batch");
        best = Some(best.map_or(local, |b| b.min(local)));
        if let Some(report) = progress {
            report((end * CHUNK).min(total), total);
        }
        start = end;
    }
    best.expect("at least one candidate")
}

/// Exact minimum of κ over all n×n ±1 matrices, with one witness.
///
/// The witness is the sign-normalized minimizer that comes first in the
/// candidate ranking (κ, then larger |det|, then smaller index).
pub fn exhaustive_min(n: usize, options: &ExhaustiveOptions<'_>) -> Result<SearchRecord> {
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    let max = if options.long_running {
        EXHAUSTIVE_LONG_MAX
    } else {
        EXHAUSTIVE_DEFAULT_MAX
    };
    if n > max {
        return Err(Error::OrderTooLarge { order: n, max });
    }
    let bits = (n - 1) * (n - 1);
    let (_, index) = enumerate(n, bits, columns_normalized, options.progress);
    Ok(finish(n, columns_normalized(n, index), 1u64 << bits))
}

/// Enumeration without sign normalization (2^{n²} candidates, n ≤ 4).
/// Exists to cross-check the normalization argument.
pub fn exhaustive_min_all(n: usize) -> Result<SearchRecord> {
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    if n > 4 {
        return Err(Error::OrderTooLarge { order: n, max: 4 });
    }
    let bits = n * n;
    let (_, index) = enumerate(n, bits, columns_full, None);
    Ok(finish(n, columns_full(n, index), 1u64 << bits))
}

fn finish(n: usize, cols: [u32; 8], count: u64) -> SearchRecord {
    let matrix = matrix_from_columns(n, &cols);
    let kappa = crate::spectral::condition_number(&matrix).kappa;
    SearchRecord {
        n,
        class: StructureClass::General,
        kappa,
        matrix,
        seed: 0,
        effort: Effort {
            moves: count,
            restarts: 0,
            evaluations: count,
        },
        timestamp: now_timestamp(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_orders() {
        let opts = ExhaustiveOptions::default();
        assert_eq!(exhaustive_min(1, &opts).unwrap().kappa, 1.0);
        let r2 = exhaustive_min(2, &opts).unwrap();
        assert!((r2.kappa - 1.0).abs() < 1e-12);
        assert!(r2.matrix.gram().is_scalar_pattern(2, 0));
        let r3 = exhaustive_min(3, &opts).unwrap();
        assert!((r3.kappa - 2.0).abs() < 1e-9);
        assert!(r3.matrix.is_sign_normalized());
        assert_eq!(r3.effort.evaluations, 16);
    }

    #[test]
    fn order_limits() {
        let opts = ExhaustiveOptions::default();
        assert!(matches!(
            exhaustive_min(6, &opts),
            Err(Error::OrderTooLarge { order: 6, max: 5 })
        ));
        let long = ExhaustiveOptions {
            long_running: true,
            progress: None,
        };
        assert!(matches!(
            exhaustive_min(7, &long),
            Err(Error::OrderTooLarge { order: 7, max: 6 })
        ));
        assert!(exhaustive_min_all(5).is_err());
    }

    #[test]
    fn progress_reaches_total() {
        use std::sync::atomic::{AtomicU64, Ordering};
        let last = AtomicU64::new(0);
        let cb = |done: u64, total: u64| {
            assert!(done <= total);
            last.store(done, Ordering::SeqCst);
        };
        let opts = ExhaustiveOptions {
            long_running: false,
            progress: Some(&cb),
        };
        exhaustive_min(4, &opts).unwrap();
        assert_eq!(last.load(Ordering::SeqCst), 1 << 9);
    }
}
