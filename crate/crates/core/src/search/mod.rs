//! Search for well-conditioned ±1 matrices at small orders.
//!
//! Candidates are ranked by a total order: κ rounded to 10 significant
//! digits (as ten-thousand-millionths), then larger ln|det| rounded to
//! 1e−8, then the smaller parameter vector (or enumeration index). Being a
//! total order, the winner does not depend on how a parallel reduction is
//! split.

pub mod anneal;
pub mod classes;
pub mod exhaustive;
pub mod registry;
pub mod table;

use std::cmp::Ordering;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::SignMatrix;
use crate::spectral::{condition_number, SpectralReport};

pub use anneal::{anneal, anneal_panel, best_record, anneal_with, AnnealConfig, DEFAULT_BUDGET, SEED_PANEL};
pub use classes::StructureClass;
pub use exhaustive::{exhaustive_min, exhaustive_min_all, ExhaustiveOptions};
pub use registry::{bundled_registry_dir, Registry, RegistryEntry, UpdateOutcome};
pub use table::{reproduce_table, table_csv, table_target, TableOptions, TableRow, TableTarget, TABLE_TARGETS};

/// Allowed drift between a stored κ and its recomputation.
pub const KAPPA_RECOMPUTE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Effort {
    /// Proposed moves (annealing) or enumerated candidates (exhaustive).
    pub moves: u64,
    pub restarts: u64,
    pub evaluations: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchRecord {
    pub n: usize,
    pub class: StructureClass,
    pub kappa: f64,
    pub matrix: SignMatrix,
    pub seed: u64,
    pub effort: Effort,
    /// Unix seconds; `SOURCE_DATE_EPOCH` pins it for reproducible output.
    pub timestamp: u64,
}

impl SearchRecord {
    /// Checks that the stored κ matches a recomputation from the matrix.
    pub fn verify(&self) -> Result<SpectralReport> {
        if self.matrix.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: self.matrix.n(),
            });
        }
        let report = condition_number(&self.matrix);
        let ok = if report.kappa.is_infinite() || self.kappa.is_infinite() {
            report.kappa == self.kappa
        } else {
            (report.kappa - self.kappa).abs() <= KAPPA_RECOMPUTE_TOL
        };
        if !ok {
            return Err(Error::Rejected(format!(
                "stored kappa {} but the matrix has kappa {}",
                self.kappa, report.kappa
            )));
        }
        Ok(report)
    }

    /// Equality ignoring the timestamp.
    pub fn same_result(&self, other: &SearchRecord) -> bool {
        self.n == other.n
            && self.class == other.class
            && self.kappa.to_bits() == other.kappa.to_bits()
            && self.matrix == other.matrix
            && self.seed == other.seed
            && self.effort == other.effort
    }
}

pub fn now_timestamp() -> u64 {
    if let Some(t) = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<u64>().ok())
    {
        return t;
    }
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Ranking key shared by all searches. Smaller is better.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RankKey {
    kappa_q: u64,
    neg_log_det_q: i64,
}

impl RankKey {
    pub fn new(kappa: f64, log_abs_det: f64) -> Self {
        let kappa_q = if kappa.is_finite() && kappa < 1e8 {
            (kappa * 1e10).round() as u64
        } else {
            u64::MAX
        };
        let neg_log_det_q = if log_abs_det.is_finite() {
            -((log_abs_det * 1e8).round() as i64)
        } else {
            i64::MAX
        };
        Self {
            kappa_q,
            neg_log_det_q,
        }
    }

    pub fn of(report: &SpectralReport) -> Self {
        Self::new(report.kappa, report.log_abs_det())
    }
}

/// Full ranking with the parameter vector as last tie-break.
pub(crate) fn compare_ranked(a: (RankKey, &[i8]), b: (RankKey, &[i8])) -> Ordering {
    a.0.cmp(&b.0).then_with(|| a.1.cmp(b.1))
}
