//! Dense ±1 matrices and their exact integer Gram matrices.

use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// An n×n matrix with every entry exactly −1 or +1, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SignMatrix {
    n: usize,
    entries: Vec<i8>,
}

impl SignMatrix {
    pub fn new(n: usize, entries: Vec<i8>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        if let Some(pos) = entries.iter().position(|&e| e != 1 && e != -1) {
            return Err(Error::NotASign {
                row: pos / n,
                col: pos % n,
                value: entries[pos] as i64,
            });
        }
        Ok(Self { n, entries })
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if v != 1 && v != -1 {
                    return Err(Error::NotASign {
                        row: i,
                        col: j,
                        value: v,
                    });
                }
                entries.push(v as i8);
            }
        }
        Self::new(n, entries)
    }

    /// Builds a matrix from a predicate: `true` maps to +1, `false` to −1.
    pub fn from_fn(n: usize, mut plus: impl FnMut(usize, usize) -> bool) -> Self {
        assert!(n > 0, "matrix order must be at least 1");
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(if plus(i, j) { 1 } else { -1 });
            }
        }
        Self { n, entries }
    }

    pub fn ones(n: usize) -> Self {
        Self::from_fn(n, |_, _| true)
    }

    /// Row i is `first_row` cyclically shifted right by i, so
    /// `A[i][j] = first_row[(j - i) mod n]`.
    pub fn circulant(first_row: &[i8]) -> Result<Self> {
        let n = first_row.len();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(first_row[(j + n - i) % n]);
            }
        }
        Self::new(n, entries)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.entries[i * self.n + j]
    }

    #[inline]
    pub fn flip(&mut self, i: usize, j: usize) {
        self.entries[i * self.n + j] = -self.entries[i * self.n + j];
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[i8] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[i8]> {
        self.entries.chunks(self.n)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i) == 1)
    }

    pub fn negate_row(&mut self, i: usize) {
        for v in &mut self.entries[i * self.n..(i + 1) * self.n] {
            *v = -*v;
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for i in 0..self.n {
            self.flip(i, j);
        }
    }

    /// Applies `out[i][j] = self[rows[i]][cols[j]]`.
    pub fn permuted(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(self.n, |i, j| self.get(rows[i], cols[j]) == 1)
    }

    /// Sign-normalized form: first column made all +1 by row negations,
    /// then first row made all +1 by column negations. Used for
    /// deduplication only; it is not a full canonical form.
    pub fn sign_normalized(&self) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            if out.get(i, 0) == -1 {
                out.negate_row(i);
            }
        }
        for j in 0..self.n {
            if out.get(0, j) == -1 {
                out.negate_col(j);
            }
        }
        out
    }

    pub fn is_sign_normalized(&self) -> bool {
        (0..self.n).all(|k| self.get(0, k) == 1 && self.get(k, 0) == 1)
    }

    /// Exact AᵀA (column inner products).
    pub fn gram(&self) -> GramMatrix {
        let n = self.n;
        let mut entries = vec![0i64; n * n];
        for a in 0..n {
            entries[a * n + a] = n as i64;
            for b in (a + 1)..n {
                let dot: i64 = (0..n)
                    .map(|i| (self.get(i, a) * self.get(i, b)) as i64)
                    .sum();
                entries[a * n + b] = dot;
                entries[b * n + a] = dot;
            }
        }
        GramMatrix { n, entries }
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j) as f64)
    }

    /// Kronecker product: `(A⊗B)[i·n_B + k][j·n_B + l] = A[i][j]·B[k][l]`.
    pub fn kronecker(&self, other: &SignMatrix) -> SignMatrix {
        let nb = other.n;
        let n = self.n * nb;
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            let (i, k) = (r / nb, r % nb);
            for c in 0..n {
                let (j, l) = (c / nb, c % nb);
                entries.push(self.get(i, j) * other.get(k, l));
            }
        }
        SignMatrix { n, entries }
    }
}

impl fmt::Debug for SignMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SignMatrix(n = {})", self.n)?;
        for row in self.rows() {
            let s: String = row.iter().map(|&v| if v == 1 { '+' } else { '-' }).collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

/// Kronecker product of two sign matrices.
pub fn kronecker(a: &SignMatrix, b: &SignMatrix) -> SignMatrix {
    a.kronecker(b)
}

/// Exact symmetric integer matrix AᵀA of a sign matrix (or a synthetic
/// PSD integer matrix used in tests of the clique bounds).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl GramMatrix {
    /// Wraps an arbitrary symmetric integer matrix. Only symmetry is
    /// checked; the sign-matrix invariants are available through
    /// [`GramMatrix::check_sign_invariants`].
    pub fn from_entries(n: usize, entries: Vec<i64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if entries[i * n + j] != entries[j * n + i] {
                    return Err(Error::Precondition(format!(
                        "matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self { n, entries })
    }

    /// `diag·I + off·(J − I)` of order k.
    pub fn scalar_pattern(k: usize, diag: i64, off: i64) -> Self {
        let mut entries = vec![off; k * k];
        for i in 0..k {
            entries[i * k + i] = diag;
        }
        Self { n: k, entries }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.entries
    }

    /// Diagonal equal to n, |off-diagonal| ≤ n, off-diagonal ≡ n (mod 2).
    pub fn check_sign_invariants(&self) -> bool {
        let n = self.n as i64;
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let e = self.get(i, j);
                if i == j {
                    e == n
                } else {
                    e.abs() <= n && (e - n).rem_euclid(2) == 0
                }
            })
        })
    }

    /// First entry (row-major, upper triangle first encountered) that differs
    /// from `diag·I + off·(J − I)`.
    pub fn first_deviation(&self, diag: i64, off: i64) -> Option<(usize, usize, i64, i64)> {
        for i in 0..self.n {
            for j in 0..self.n {
                let expected = if i == j { diag } else { off };
                if self.get(i, j) != expected {
                    return Some((i, j, expected, self.get(i, j)));
                }
            }
        }
        None
    }

    pub fn is_scalar_pattern(&self, diag: i64, off: i64) -> bool {
        self.first_deviation(diag, off).is_none()
    }

    pub fn principal_submatrix(&self, indices: &[usize]) -> GramMatrix {
        let k = indices.len();
        let mut entries = Vec::with_capacity(k * k);
        for &a in indices {
            for &b in indices {
                entries.push(self.get(a, b));
            }
        }
        GramMatrix { n: k, entries }
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j) as f64)
    }
}
