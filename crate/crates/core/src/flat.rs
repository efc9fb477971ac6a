//! Flat orthogonal matrices by submatrix orthogonalization.
//!
//! For an orthogonal block matrix `[[A, B], [C, D]]` with `I − A`
//! invertible, `D + C(I − A)⁻¹B` is again orthogonal. Starting from a scaled
//! Hadamard matrix of order m and discarding a leading k×k block with
//! k < √m gives an orthogonal matrix of order m − k whose entries are all
//! at most `1/(√m − k)` in absolute value.

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::HadamardOrderCatalog;
use crate::error::{Error, Result};

/// Default orthogonality tolerance per unit of order.
pub const ORTH_TOL_PER_N: f64 = 1e-10;

/// Smallest singular value of `I − A` below which the block is treated as
/// singular.
pub const RESOLVENT_SIGMA_MIN: f64 = 1e-8;

/// A real orthogonal matrix with its max-entry norm and defect cached.
#[derive(Clone, Debug)]
pub struct OrthMatrix {
    m: DMatrix<f64>,
    max_abs_entry: f64,
    orthogonality_defect: f64,
}

pub fn orthogonality_defect(m: &DMatrix<f64>) -> f64 {
    let n = m.ncols();
    let mtm = m.transpose() * m;
    (mtm - DMatrix::<f64>::identity(n, n)).amax()
}

impl OrthMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        let tol = ORTH_TOL_PER_N * m.nrows() as f64;
        Self::with_tolerance(m, tol)
    }

    pub fn with_tolerance(m: DMatrix<f64>, tolerance: f64) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(Error::EmptyMatrix);
        }
        let defect = orthogonality_defect(&m);
        if !(defect <= tolerance) {
            return Err(Error::NotOrthogonal { defect, tolerance });
        }
        Ok(Self {
            max_abs_entry: m.amax(),
            orthogonality_defect: defect,
            m,
        })
    }

    /// H/√m for a Hadamard matrix H.
    pub fn scaled_hadamard(h: &crate::matrix::SignMatrix) -> Result<Self> {
        let s = (h.n() as f64).sqrt();
        Self::new(h.to_dmatrix() / s)
    }

    pub fn n(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.m
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.max_abs_entry
    }

    pub fn orthogonality_defect(&self) -> f64 {
        self.orthogonality_defect
    }
}

fn split_blocks(
    m: &DMatrix<f64>,
    k: usize,
) -> (DMatrix<f64>, DMatrix<f64>, DMatrix<f64>, DMatrix<f64>) {
    let n = m.nrows();
    let r = n - k;
    (
        m.view((0, 0), (k, k)).into_owned(),
        m.view((0, k), (k, r)).into_owned(),
        m.view((k, 0), (r, k)).into_owned(),
        m.view((k, k), (r, r)).into_owned(),
    )
}

fn smallest_singular_value(m: &DMatrix<f64>) -> f64 {
    m.singular_values()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// `D + C(I − A)⁻¹B` where A is the leading k×k block of M.
pub fn submatrix_orthogonalize(m: &OrthMatrix, k: usize) -> Result<OrthMatrix> {
    let n = m.n();
    if k >= n {
        return Err(Error::Precondition(format!(
            "block size k = {k} must be smaller than the order {n}"
        )));
    }
    if k == 0 {
        return Ok(m.clone());
    }
    let (a, b, c, d) = split_blocks(m.matrix(), k);
    let i_minus_a = DMatrix::<f64>::identity(k, k) - a;
    let sigma_min = smallest_singular_value(&i_minus_a);
    if !(sigma_min > RESOLVENT_SIGMA_MIN) {
        return Err(Error::SingularBlock { sigma_min });
    }
    let solved = i_minus_a
        .lu()
        .solve(&b)
        .ok_or(Error::SingularBlock { sigma_min })?;
    let out = d + c * solved;
    OrthMatrix::with_tolerance(out, 1e-9 * n as f64)
}

/// Spectral norm of `(I − A)⁻¹` for the leading k×k block.
pub fn leading_resolvent_norm(m: &OrthMatrix, k: usize) -> Result<f64> {
    let (a, _, _, _) = split_blocks(m.matrix(), k);
    let i_minus_a = DMatrix::<f64>::identity(k, k) - a;
    let sigma_min = smallest_singular_value(&i_minus_a);
    if !(sigma_min > RESOLVENT_SIGMA_MIN) {
        return Err(Error::SingularBlock { sigma_min });
    }
    Ok(1.0 / sigma_min)
}

#[derive(Clone, Debug, Serialize)]
pub struct FlatCertificate {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub recipe: String,
    pub max_entry: f64,
    /// 1/(√m − k)
    pub bound: f64,
}

impl FlatCertificate {
    pub fn holds(&self) -> bool {
        (self.k * self.k) < self.m && self.max_entry <= self.bound + 1e-12
    }
}

pub fn flatness_bound(m: usize, k: usize) -> f64 {
    1.0 / ((m as f64).sqrt() - k as f64)
}

/// Flat orthogonal matrix of order n from the smallest catalog Hadamard
/// order m ≥ n, discarding the leading (m − n)×(m − n) block.
pub fn flat_orthogonal(
    n: usize,
    catalog: &HadamardOrderCatalog,
) -> Result<(OrthMatrix, FlatCertificate)> {
    flat_orthogonal_with(n, catalog, None)
}

/// As [`flat_orthogonal`]; with `Some(seed)` the rows and columns of the
/// Hadamard matrix are shuffled (ChaCha20 seeded from `seed`) before the
/// split.
pub fn flat_orthogonal_with(
    n: usize,
    catalog: &HadamardOrderCatalog,
    permute_seed: Option<u64>,
) -> Result<(OrthMatrix, FlatCertificate)> {
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    let choice = catalog.smallest_order_at_least(n)?;
    let (m, k) = (choice.m, choice.gap);
    if k * k >= m {
        return Err(Error::CatalogGap {
            n,
            nearest: catalog.nearest_orders(n),
        });
    }
    let mut h = catalog.hadamard(m)?;
    if let Some(seed) = permute_seed {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let mut rows: Vec<usize> = (0..m).collect();
        let mut cols: Vec<usize> = (0..m).collect();
        rows.shuffle(&mut rng);
        cols.shuffle(&mut rng);
        h = h.permuted(&rows, &cols);
    }
    let scaled = OrthMatrix::scaled_hadamard(&h)?;
    let flat = submatrix_orthogonalize(&scaled, k)?;
    let cert = FlatCertificate {
        n,
        m,
        k,
        recipe: choice.recipe.to_string(),
        max_entry: flat.max_abs_entry(),
        bound: flatness_bound(m, k),
    };
    Ok((flat, cert))
}

#[derive(Clone, Debug, Serialize)]
pub struct FlatRow {
    pub n: usize,
    pub m: Option<usize>,
    pub k: Option<usize>,
    pub max_entry: Option<f64>,
    pub bound: Option<f64>,
    /// 1/√n
    pub lower: f64,
    pub catalog_gap: bool,
}

/// Achieved flatness against the block bound and the trivial 1/√n floor,
/// one row per n. Catalog gaps are flagged rather than fatal.
pub fn u_upper_bound_table(
    n_min: usize,
    n_max: usize,
    catalog: &HadamardOrderCatalog,
) -> Result<Vec<FlatRow>> {
    if n_max > catalog.max_order() {
        return Err(Error::OrderTooLarge {
            order: n_max,
            max: catalog.max_order(),
        });
    }
    let rows = (n_min.max(1)..=n_max)
        .into_par_iter()
        .map(|n| {
            let lower = 1.0 / (n as f64).sqrt();
            match flat_orthogonal(n, catalog) {
                Ok((_, cert)) => Ok(FlatRow {
                    n,
                    m: Some(cert.m),
                    k: Some(cert.k),
                    max_entry: Some(cert.max_entry),
                    bound: Some(cert.bound),
                    lower,
                    catalog_gap: false,
                }),
                Err(Error::CatalogGap { .. }) => Ok(FlatRow {
                    n,
                    m: None,
                    k: None,
                    max_entry: None,
                    bound: None,
                    lower,
                    catalog_gap: true,
                }),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rows)
}
