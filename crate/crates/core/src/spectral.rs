//! Condition numbers of sign matrices via the exact integer Gram matrix.
//!
//! κ(A) = σ_max/σ_min is computed as `sqrt(λ_max/λ_min)` of AᵀA with a
//! symmetric eigensolver. The Gram matrix is exact, so the only rounding
//! comes from the eigensolver itself.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flat::OrthMatrix;
use crate::matrix::{GramMatrix, SignMatrix};

/// λ_min ≤ n·2⁻⁴⁰ declares the matrix singular.
pub fn singular_tolerance(n: usize) -> f64 {
    n as f64 * 2f64.powi(-40)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralReport {
    pub sigma_min: f64,
    pub sigma_max: f64,
    /// `f64::INFINITY` when singular.
    pub kappa: f64,
    /// Ascending, clamped at zero.
    pub eigenvalues_of_gram: Vec<f64>,
}

impl SpectralReport {
    pub fn from_gram_eigenvalues(n: usize, mut eigenvalues: Vec<f64>) -> Self {
        eigenvalues.sort_by(|a, b| a.total_cmp(b));
        for e in &mut eigenvalues {
            if *e < 0.0 {
                *e = 0.0;
            }
        }
        let lambda_min = eigenvalues[0];
        let lambda_max = *eigenvalues.last().unwrap();
        let kappa = if lambda_min <= singular_tolerance(n) {
            f64::INFINITY
        } else {
            (lambda_max / lambda_min).sqrt().max(1.0)
        };
        Self {
            sigma_min: lambda_min.sqrt(),
            sigma_max: lambda_max.sqrt(),
            kappa,
            eigenvalues_of_gram: eigenvalues,
        }
    }

    pub fn is_singular(&self) -> bool {
        self.kappa.is_infinite()
    }

    /// ln|det A| = ½ Σ ln λ_i; −∞ when singular.
    pub fn log_abs_det(&self) -> f64 {
        if self.is_singular() {
            return f64::NEG_INFINITY;
        }
        0.5 * self.eigenvalues_of_gram.iter().map(|l| l.ln()).sum::<f64>()
    }
}

pub fn gram_eigenvalues(g: &GramMatrix) -> Vec<f64> {
    g.to_dmatrix().symmetric_eigenvalues().iter().copied().collect()
}

/// Eigenvalues of AᵀA with the two extreme ones recomputed as ‖Av‖² from
/// their eigenvectors. The Rayleigh quotient on A keeps the relative error
/// of λ_min near ε·κ rather than ε·κ².
pub fn condition_number(a: &SignMatrix) -> SpectralReport {
    let n = a.n();
    let eig = a.gram().to_dmatrix().symmetric_eigen();
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let order = |cmp: fn(&f64, &f64) -> bool| {
        (0..n).fold(0, |best, i| if cmp(&values[i], &values[best]) { i } else { best })
    };
    let (lo, hi) = (order(|x, y| x < y), order(|x, y| x > y));
    let am = a.to_dmatrix();
    for idx in [lo, hi] {
        let v = eig.eigenvectors.column(idx);
        values[idx] = (&am * v).norm_squared() / v.norm_squared();
    }
    SpectralReport::from_gram_eigenvalues(n, values)
}

pub fn condition_number_of_gram(g: &GramMatrix) -> SpectralReport {
    SpectralReport::from_gram_eigenvalues(g.n(), gram_eigenvalues(g))
}

/// Largest singular value. Power iteration on EᵀE, accepted once the
/// eigen-residual ‖EᵀEv − λv‖ is below 1e−12·λ; otherwise the full
/// symmetric eigendecomposition of EᵀE is used.
pub fn op_norm(e: &DMatrix<f64>) -> f64 {
    let ete = e.transpose() * e;
    let n = ete.nrows();
    if n == 0 {
        return 0.0;
    }
    let mut v = DVector::from_fn(n, |i, _| 1.0 + (i as f64) * 1e-3);
    v /= v.norm();
    for _ in 0..2000 {
        let w = &ete * &v;
        let lambda = v.dot(&w);
        let wn = w.norm();
        if wn == 0.0 {
            return 0.0;
        }
        let residual = (&w - &v * lambda).norm();
        if residual <= 1e-12 * lambda {
            return lambda.sqrt();
        }
        v = w / wn;
    }
    full_top_eigenvalue(&ete).max(0.0).sqrt()
}

fn full_top_eigenvalue(sym: &DMatrix<f64>) -> f64 {
    sym.symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Weyl-inequality sandwich for a rounded matrix X against M' = M/‖M‖_max.
#[derive(Clone, Debug, Serialize)]
pub struct WeylSandwich {
    /// ‖M‖_max
    pub u: f64,
    /// ‖X − M'‖_op
    pub e_norm: f64,
    /// 1/u − ‖E‖_op
    pub sigma_lower: f64,
    /// 1/u + ‖E‖_op
    pub sigma_upper: f64,
    /// sigma_upper / sigma_lower, infinite when sigma_lower ≤ 0.
    pub kappa_upper: f64,
}

impl WeylSandwich {
    pub fn contains(&self, report: &SpectralReport, tol: f64) -> bool {
        report.sigma_min >= self.sigma_lower - tol
            && report.sigma_max <= self.sigma_upper + tol
            && report.kappa <= self.kappa_upper * (1.0 + tol)
    }
}

pub fn weyl_sandwich(m: &OrthMatrix, x: &SignMatrix) -> Result<WeylSandwich> {
    if m.n() != x.n() {
        return Err(Error::DimensionMismatch {
            expected: m.n(),
            found: x.n(),
        });
    }
    let u = m.max_abs_entry();
    let scaled = m.matrix() / u;
    let e = x.to_dmatrix() - scaled;
    let e_norm = op_norm(&e);
    let sigma_lower = 1.0 / u - e_norm;
    let sigma_upper = 1.0 / u + e_norm;
    let kappa_upper = if sigma_lower > 0.0 {
        sigma_upper / sigma_lower
    } else {
        f64::INFINITY
    };
    Ok(WeylSandwich {
        u,
        e_norm,
        sigma_lower,
        sigma_upper,
        kappa_upper,
    })
}

/// κ(X) together with the Weyl sandwich relative to the scaled orthogonal
/// matrix it was rounded from.
pub fn condition_number_orth_perturbed(
    m: &OrthMatrix,
    x: &SignMatrix,
) -> Result<(SpectralReport, WeylSandwich)> {
    let sandwich = weyl_sandwich(m, x)?;
    Ok((condition_number(x), sandwich))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::sylvester;

    #[test]
    fn hadamard_has_unit_kappa() {
        let h = sylvester(2).unwrap();
        let r = condition_number(&h);
        assert_eq!(r.kappa, 1.0);
        assert!((r.sigma_max - 2.0).abs() < 1e-14);
    }

    #[test]
    fn all_ones_is_singular() {
        let r = condition_number(&SignMatrix::ones(2));
        assert!(r.kappa.is_infinite());
        assert_eq!(r.log_abs_det(), f64::NEG_INFINITY);
    }

    #[test]
    fn barba_five_is_three_halves() {
        let a = SignMatrix::circulant(&[1, 1, 1, 1, -1]).unwrap();
        let r = condition_number(&a);
        assert!((r.kappa - 1.5).abs() < 1e-12);
    }

    #[test]
    fn op_norm_matches_known_values() {
        let e = DMatrix::from_row_slice(2, 2, &[3.0, 0.0, 0.0, -4.0]);
        assert!((op_norm(&e) - 4.0).abs() < 1e-12);
        let zero = DMatrix::<f64>::zeros(3, 3);
        assert_eq!(op_norm(&zero), 0.0);
        // rank one: ‖u vᵀ‖ = ‖u‖‖v‖
        let r1 = DMatrix::from_fn(4, 4, |i, j| (i as f64 + 1.0) * (j as f64 - 1.5));
        let expected = (1f64 + 4.0 + 9.0 + 16.0).sqrt() * (2.25f64 + 0.25 + 0.25 + 2.25).sqrt();
        assert!((op_norm(&r1) - expected).abs() < 1e-10 * expected);
    }

    #[test]
    fn sandwich_rejects_dimension_mismatch() {
        let m = OrthMatrix::new(DMatrix::identity(3, 3)).unwrap();
        let x = SignMatrix::ones(2);
        assert!(matches!(
            weyl_sandwich(&m, &x),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
