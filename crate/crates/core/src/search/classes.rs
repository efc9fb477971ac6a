//! Structured subclasses of {±1}^{n×n}, each parameterized bijectively by a
//! ±1 vector.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::families::two_block_matrix;
use crate::matrix::SignMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StructureClass {
    General,
    /// Upper triangle including the diagonal.
    Symmetric,
    Circulant,
    /// All-+1 first row and column around a circulant (n−1)×(n−1) core.
    CirculantCore,
    /// `[[R, S], [Sᵀ, −Rᵀ]]` with free circulant R, S of order n/2.
    TwoBlockCirculant,
    /// b×b arrangement of independent circulant blocks of order n/b.
    BlockCirculant { blocks: usize },
}

impl StructureClass {
    pub const DEFAULT_BLOCKS: usize = 3;

    pub fn validate(&self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        match *self {
            StructureClass::TwoBlockCirculant if n % 2 != 0 => Err(Error::Precondition(format!(
                "two_block_circulant needs even n, got {n}"
            ))),
            StructureClass::CirculantCore if n < 2 => Err(Error::Precondition(
                "circulant_core needs n ≥ 2".into(),
            )),
            StructureClass::BlockCirculant { blocks } if blocks == 0 || n % blocks != 0 => {
                Err(Error::Precondition(format!(
                    "block_circulant with {blocks} blocks needs n divisible by {blocks}, got {n}"
                )))
            }
            _ => Ok(()),
        }
    }

    pub fn param_len(&self, n: usize) -> usize {
        match *self {
            StructureClass::General => n * n,
            StructureClass::Symmetric => n * (n + 1) / 2,
            StructureClass::Circulant => n,
            StructureClass::CirculantCore => n - 1,
            StructureClass::TwoBlockCirculant => n,
            StructureClass::BlockCirculant { blocks } => blocks * n,
        }
    }

    /// Builds the matrix for a ±1 parameter vector of length `param_len(n)`.
    pub fn build(&self, n: usize, params: &[i8]) -> SignMatrix {
        debug_assert_eq!(params.len(), self.param_len(n));
        match *self {
            StructureClass::General => SignMatrix::new(n, params.to_vec()).expect("±1 params"),
            StructureClass::Symmetric => {
                let idx = |i: usize, j: usize| {
                    let (a, b) = if i <= j { (i, j) } else { (j, i) };
                    a * n - a * (a + 1) / 2 + b
                };
                SignMatrix::from_fn(n, |i, j| params[idx(i, j)] == 1)
            }
            StructureClass::Circulant => SignMatrix::circulant(params).expect("±1 params"),
            StructureClass::CirculantCore => {
                let m = n - 1;
                SignMatrix::from_fn(n, |i, j| {
                    if i == 0 || j == 0 {
                        true
                    } else {
                        params[(j - 1 + m - (i - 1)) % m] == 1
                    }
                })
            }
            StructureClass::TwoBlockCirculant => {
                let h = n / 2;
                two_block_matrix(&params[..h], &params[h..])
            }
            StructureClass::BlockCirculant { blocks } => {
                let l = n / blocks;
                SignMatrix::from_fn(n, |i, j| {
                    let (bi, bj) = (i / l, j / l);
                    let (ri, rj) = (i % l, j % l);
                    let base = (bi * blocks + bj) * l;
                    params[base + (rj + l - ri) % l] == 1
                })
            }
        }
    }

    /// Inverse of [`build`]: the parameter vector when `a` belongs to the
    /// class, otherwise `None`.
    pub fn encode(&self, a: &SignMatrix) -> Option<Vec<i8>> {
        let n = a.n();
        self.validate(n).ok()?;
        let params: Vec<i8> = match *self {
            StructureClass::General => a.as_slice().to_vec(),
            StructureClass::Symmetric => {
                let mut p = Vec::with_capacity(self.param_len(n));
                for i in 0..n {
                    for j in i..n {
                        p.push(a.get(i, j));
                    }
                }
                p
            }
            StructureClass::Circulant => a.row(0).to_vec(),
            StructureClass::CirculantCore => (1..n).map(|j| a.get(1, j)).collect(),
            StructureClass::TwoBlockCirculant => {
                let h = n / 2;
                (0..h).map(|j| a.get(0, j)).chain((h..n).map(|j| a.get(0, j))).collect()
            }
            StructureClass::BlockCirculant { blocks } => {
                let l = n / blocks;
                let mut p = Vec::with_capacity(self.param_len(n));
                for bi in 0..blocks {
                    for bj in 0..blocks {
                        for t in 0..l {
                            p.push(a.get(bi * l, bj * l + t));
                        }
                    }
                }
                p
            }
        };
        (self.build(n, &params) == *a).then_some(params)
    }

    pub fn contains(&self, a: &SignMatrix) -> bool {
        self.encode(a).is_some()
    }
}

impl fmt::Display for StructureClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructureClass::General => write!(f, "general"),
            StructureClass::Symmetric => write!(f, "symmetric"),
            StructureClass::Circulant => write!(f, "circulant"),
            StructureClass::CirculantCore => write!(f, "circulant_core"),
            StructureClass::TwoBlockCirculant => write!(f, "two_block_circulant"),
            StructureClass::BlockCirculant { blocks } => write!(f, "block_circulant_b{blocks}"),
        }
    }
}

impl FromStr for StructureClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "general" => StructureClass::General,
            "symmetric" => StructureClass::Symmetric,
            "circulant" => StructureClass::Circulant,
            "circulant_core" => StructureClass::CirculantCore,
            "two_block_circulant" => StructureClass::TwoBlockCirculant,
            "block_circulant" => StructureClass::BlockCirculant {
                blocks: Self::DEFAULT_BLOCKS,
            },
            other => {
                let blocks = other
                    .strip_prefix("block_circulant_b")
                    .and_then(|b| b.parse::<usize>().ok())
                    .filter(|&b| b > 0)
                    .ok_or_else(|| {
                        Error::Precondition(format!("unknown structure class {other:?}"))
                    })?;
                StructureClass::BlockCirculant { blocks }
            }
        })
    }
}

impl Serialize for StructureClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for StructureClass {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
