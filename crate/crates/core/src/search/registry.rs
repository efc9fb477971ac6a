//! On-disk registry of best-known matrices.
//!
//! Layout: `<root>/<n>/<class>-<kappa 10 digits>-<seed>.mat` in the +/-
//! format, plus `<root>/index.json` holding the current best record per
//! (n, class) and an append-only history of every update attempt. Writes
//! go through one mutex and replace files atomically (write then rename),
//! so readers always see a complete snapshot.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::{now_timestamp, Effort, SearchRecord, StructureClass};
use crate::error::{Error, Result};
use crate::io::{format_hex, format_sig10, parse_sign_matrix, write_sign_matrix};
use crate::matrix::SignMatrix;

pub const INDEX_FILE: &str = "index.json";
pub const REGISTRY_ENV: &str = "APPROXHAD_REGISTRY";
/// A new record must beat the incumbent by more than this.
pub const IMPROVEMENT_TOL: f64 = 1e-10;
const INDEX_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegistryEntry {
    pub n: usize,
    pub class: StructureClass,
    pub kappa: f64,
    pub kappa_hex: String,
    pub seed: u64,
    /// Relative to the registry root.
    pub file: String,
    pub effort: Effort,
    pub timestamp: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistoryEvent {
    pub n: usize,
    pub class: StructureClass,
    pub kappa: String,
    pub seed: u64,
    pub outcome: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    pub timestamp: u64,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
struct Index {
    version: u32,
    records: Vec<RegistryEntry>,
    history: Vec<HistoryEvent>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum UpdateOutcome {
    Stored(RegistryEntry),
    NotBetter { incumbent_kappa: f64 },
}

#[derive(Debug)]
pub struct Registry {
    root: PathBuf,
    index: Mutex<Index>,
}

fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

impl Registry {
    /// Opens (without creating) a registry; a missing directory or index
    /// is an empty registry.
    pub fn open(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        let index_path = root.join(INDEX_FILE);
        let index = if index_path.exists() {
            let index: Index = serde_json::from_str(&fs::read_to_string(&index_path)?)?;
            if index.version != INDEX_VERSION {
                return Err(Error::Precondition(format!(
                    "unsupported registry index version {}",
                    index.version
                )));
            }
            index
        } else {
            Index {
                version: INDEX_VERSION,
                ..Index::default()
            }
        };
        Ok(Self {
            root,
            index: Mutex::new(index),
        })
    }

    /// `$APPROXHAD_REGISTRY`, else `./registry`.
    pub fn default_root() -> PathBuf {
        std::env::var_os(REGISTRY_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("registry"))
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, Index> {
        self.index.lock().unwrap_or_else(|e| e.into_inner())
    }

    /// Current best entries, sorted by (n, class).
    pub fn entries(&self) -> Vec<RegistryEntry> {
        let mut v = self.lock().records.clone();
        v.sort_by(|a, b| a.n.cmp(&b.n).then(a.class.cmp(&b.class)));
        v
    }

    pub fn history(&self) -> Vec<HistoryEvent> {
        self.lock().history.clone()
    }

    pub fn is_empty(&self) -> bool {
        self.lock().records.is_empty()
    }

    pub fn entries_for(&self, n: usize) -> Vec<RegistryEntry> {
        self.entries().into_iter().filter(|e| e.n == n).collect()
    }

    pub fn best_for(&self, n: usize, class: StructureClass) -> Option<RegistryEntry> {
        self.lock()
            .records
            .iter()
            .find(|e| e.n == n && e.class == class)
            .cloned()
    }

    /// Smallest κ per n over all classes, sorted by n.
    pub fn best_per_n(&self) -> Vec<RegistryEntry> {
        let mut out: Vec<RegistryEntry> = Vec::new();
        for e in self.entries() {
            match out.last_mut() {
                Some(last) if last.n == e.n => {
                    if e.kappa < last.kappa {
                        *last = e;
                    }
                }
                _ => out.push(e),
            }
        }
        out
    }

    pub fn load_matrix(&self, entry: &RegistryEntry) -> Result<SignMatrix> {
        parse_sign_matrix(&fs::read_to_string(self.root.join(&entry.file))?)
    }

    /// Loads and re-verifies a stored record.
    pub fn load_record(&self, entry: &RegistryEntry) -> Result<SearchRecord> {
        let record = SearchRecord {
            n: entry.n,
            class: entry.class,
            kappa: entry.kappa,
            matrix: self.load_matrix(entry)?,
            seed: entry.seed,
            effort: entry.effort,
            timestamp: entry.timestamp,
        };
        record.verify()?;
        Ok(record)
    }

    /// Stores `record` if it beats the incumbent for (n, class) by more than
    /// [`IMPROVEMENT_TOL`]. A κ that does not match the matrix is rejected
    /// with an error. Every attempt is appended to the history.
    pub fn update(&self, record: &SearchRecord) -> Result<UpdateOutcome> {
        let mut index = self.lock();
        let event = |outcome: &str, detail: Option<String>| HistoryEvent {
            n: record.n,
            class: record.class,
            kappa: format_sig10(record.kappa),
            seed: record.seed,
            outcome: outcome.into(),
            detail,
            timestamp: now_timestamp(),
        };

        let verified = record.verify().and_then(|_| {
            if record.class.contains(&record.matrix) {
                Ok(())
            } else {
                Err(Error::Rejected(format!(
                    "matrix is not in class {}",
                    record.class
                )))
            }
        });
        if let Err(e) = verified {
            index.history.push(event("rejected", Some(e.to_string())));
            self.persist(&index)?;
            return Err(e);
        }

        let incumbent = index
            .records
            .iter()
            .position(|e| e.n == record.n && e.class == record.class);
        if let Some(i) = incumbent {
            let old = index.records[i].kappa;
            if !(record.kappa < old - IMPROVEMENT_TOL) {
                index.history.push(event("not_better", None));
                self.persist(&index)?;
                return Ok(UpdateOutcome::NotBetter {
                    incumbent_kappa: old,
                });
            }
        }

        let file = format!(
            "{}/{}-{}-{}.mat",
            record.n,
            record.class,
            format_sig10(record.kappa),
            record.seed
        );
        write_atomic(&self.root.join(&file), write_sign_matrix(&record.matrix).as_bytes())?;
        let entry = RegistryEntry {
            n: record.n,
            class: record.class,
            kappa: record.kappa,
            kappa_hex: format_hex(record.kappa),
            seed: record.seed,
            file,
            effort: record.effort,
            timestamp: record.timestamp,
        };
        match incumbent {
            Some(i) => index.records[i] = entry.clone(),
            None => index.records.push(entry.clone()),
        }
        index.history.push(event("stored", None));
        self.persist(&index)?;
        Ok(UpdateOutcome::Stored(entry))
    }

    fn persist(&self, index: &Index) -> Result<()> {
        let mut text = serde_json::to_string_pretty(index)?;
        text.push('\n');
        write_atomic(&self.root.join(INDEX_FILE), text.as_bytes())
    }
}

/// Registry bundled with the crate sources.
pub fn bundled_registry_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join("registry")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::two_block_matrix;
    use crate::spectral::condition_number;

    fn record(r: &[i8], s: &[i8], seed: u64) -> SearchRecord {
        let matrix = two_block_matrix(r, s);
        SearchRecord {
            n: matrix.n(),
            class: StructureClass::TwoBlockCirculant,
            kappa: condition_number(&matrix).kappa,
            matrix,
            seed,
            effort: Effort::default(),
            timestamp: 0,
        }
    }

    #[test]
    fn store_duplicate_tamper() {
        let dir = tempfile::tempdir().unwrap();
        let reg = Registry::open(dir.path()).unwrap();
        assert!(reg.is_empty());

        let good = record(&[1, 1, 1], &[1, 1, -1], 7);
        assert!((good.kappa - 2.5f64.sqrt()).abs() < 1e-12);
        let stored = match reg.update(&good).unwrap() {
            UpdateOutcome::Stored(e) => e,
            other => panic!("{other:?}"),
        };
        assert_eq!(stored.file, "6/two_block_circulant-1.581138830-7.mat");
        assert!(dir.path().join(&stored.file).exists());

        assert!(matches!(
            reg.update(&record(&[1, 1, 1], &[1, -1, 1], 8)).unwrap(),
            UpdateOutcome::NotBetter { .. }
        ));

        let mut tampered = record(&[1, 1, -1], &[1, 1, -1], 9);
        tampered.kappa = 1.2;
        assert!(matches!(reg.update(&tampered), Err(Error::Rejected(_))));

        let reopened = Registry::open(dir.path()).unwrap();
        assert_eq!(reopened.entries(), vec![stored.clone()]);
        let outcomes: Vec<String> = reopened.history().into_iter().map(|h| h.outcome).collect();
        assert_eq!(outcomes, ["stored", "not_better", "rejected"]);
        let loaded = reopened.load_record(&stored).unwrap();
        assert_eq!(loaded.matrix, good.matrix);
    }

    #[test]
    fn class_membership_enforced() {
        let dir = tempfile::tempdir().unwrap();
        let reg = Registry::open(dir.path()).unwrap();
        let mut rec = record(&[1, 1, -1], &[1, 1, -1], 0);
        rec.class = StructureClass::Circulant;
        assert!(matches!(reg.update(&rec), Err(Error::Rejected(_))));
    }

    #[test]
    fn best_per_n_takes_smallest_kappa() {
        let dir = tempfile::tempdir().unwrap();
        let reg = Registry::open(dir.path()).unwrap();
        reg.update(&record(&[1, 1, -1], &[1, 1, -1], 0)).unwrap();
        let mut general = record(&[1, 1, -1], &[1, 1, -1], 1);
        general.class = StructureClass::General;
        reg.update(&general).unwrap();
        let best = reg.best_per_n();
        assert_eq!(best.len(), 1);
        assert_eq!(best[0].class, StructureClass::General);
    }
}
