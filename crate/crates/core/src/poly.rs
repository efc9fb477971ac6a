//! Exact integer polynomials: characteristic polynomials of integer
//! matrices and residual checks of minimal polynomials at computed κ.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::matrix::GramMatrix;

/// Integer polynomial with coefficients stored constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coefficients: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coefficients: Vec<BigInt>) -> Self {
        while coefficients.last().is_some_and(|c| c.is_zero()) {
            coefficients.pop();
        }
        Self { coefficients }
    }

    pub fn from_i64(coefficients: &[i64]) -> Self {
        Self::new(coefficients.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self::new(Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coefficients.last()
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.coefficients
            .iter()
            .map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coefficients.len() + other.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in other.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: usize) -> IntPolynomial {
        let mut acc = Self::from_i64(&[1]);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `(t − root)^multiplicity`.
    pub fn linear_power(root: i64, multiplicity: usize) -> IntPolynomial {
        Self::from_i64(&[-root, 1]).pow(multiplicity)
    }

    /// Plain f64 Horner evaluation.
    pub fn eval_f64(&self, t: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * t + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Compensated Horner evaluation (error-free transformations), accurate
    /// to roughly twice the working precision.
    pub fn eval_compensated(&self, t: f64) -> f64 {
        let coeffs: Vec<(f64, f64)> = self.coefficients.iter().map(split_bigint).collect();
        let mut s = 0.0f64;
        let mut err = 0.0f64;
        for &(hi, lo) in coeffs.iter().rev() {
            let (p, pe) = two_prod(s, t);
            let (sum, se) = two_sum(p, hi);
            s = sum;
            err = err * t + (pe + se + lo);
        }
        s + err
    }
}

/// Coefficient as an unevaluated f64 pair hi + lo.
fn split_bigint(c: &BigInt) -> (f64, f64) {
    let hi = c.to_f64().unwrap_or(f64::NAN);
    if !hi.is_finite() {
        return (hi, 0.0);
    }
    let rest = c - BigInt::from_f64_exact(hi);
    (hi, rest.to_f64().unwrap_or(0.0))
}

trait FromF64Exact {
    fn from_f64_exact(x: f64) -> BigInt;
}

impl FromF64Exact for BigInt {
    fn from_f64_exact(x: f64) -> BigInt {
        num_traits::FromPrimitive::from_f64(x).unwrap_or_else(BigInt::zero)
    }
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coefficients.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_mag = k == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{k}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<String> = self.coefficients.iter().map(|c| c.to_string()).collect();
        strs.serialize(serializer)
    }
}

/// Monic characteristic polynomial det(tI − M) of a square integer matrix
/// given row-major, via the division-free Berkowitz recurrence.
pub fn charpoly_of_entries(n: usize, entries: &[i64]) -> IntPolynomial {
    assert_eq!(entries.len(), n * n, "expected a square matrix");
    let a = |i: usize, j: usize| BigInt::from(entries[i * n + j]);
    // Coefficients highest degree first while iterating.
    let mut v: Vec<BigInt> = vec![BigInt::one()];
    for r in 0..n {
        // Toeplitz column for the bordered (r+1)×(r+1) leading block:
        // [1, −a_rr, −R·C, −R·S·C, …, −R·S^{r−1}·C]
        let mut col = Vec::with_capacity(r + 2);
        col.push(BigInt::one());
        col.push(-a(r, r));
        let mut w: Vec<BigInt> = (0..r).map(|i| a(i, r)).collect();
        for _ in 0..r {
            let rw: BigInt = (0..r).map(|j| a(r, j) * &w[j]).sum();
            col.push(-rw);
            w = (0..r)
                .map(|i| (0..r).map(|j| a(i, j) * &w[j]).sum())
                .collect();
        }
        let mut next = vec![BigInt::zero(); r + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                if j <= i {
                    *slot += &col[i - j] * vj;
                }
            }
        }
        v = next;
    }
    v.reverse();
    IntPolynomial::new(v)
}

pub fn charpoly_exact(g: &GramMatrix) -> IntPolynomial {
    charpoly_of_entries(g.n(), g.as_slice())
}

/// p(κ) evaluated with compensated Horner. Callers compare |p(κ)| with a
/// tolerance; the sign is kept for diagnostics.
pub fn minpoly_residual(p: &IntPolynomial, kappa: f64) -> f64 {
    assert!(!p.is_zero(), "minimal polynomial must be nonzero");
    p.eval_compensated(kappa)
}

/// Parses `"c0,c1,..."` (constant term first).
pub fn parse_coefficients(text: &str) -> Option<IntPolynomial> {
    let coeffs: Option<Vec<BigInt>> = text
        .split(',')
        .map(|s| s.trim().parse::<BigInt>().ok())
        .collect();
    let p = IntPolynomial::new(coeffs?);
    (!p.is_zero()).then_some(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charpoly_of_barba_gram_pattern() {
        // (n−1)I_k + J_k with k = n = 3
        let g = GramMatrix::scalar_pattern(3, 3, 1);
        assert_eq!(charpoly_exact(&g), IntPolynomial::from_i64(&[-20, 24, -9, 1]));
    }

    #[test]
    fn charpoly_of_hadamard_gram() {
        let g = GramMatrix::scalar_pattern(4, 4, 0);
        assert_eq!(charpoly_exact(&g), IntPolynomial::linear_power(4, 4));
    }

    #[test]
    fn charpoly_of_barba_five_gram() {
        let g = GramMatrix::scalar_pattern(5, 5, 1);
        let expected = IntPolynomial::linear_power(4, 4).mul(&IntPolynomial::linear_power(9, 1));
        assert_eq!(charpoly_exact(&g), expected);
    }

    #[test]
    fn charpoly_small_cases() {
        assert_eq!(charpoly_of_entries(0, &[]), IntPolynomial::from_i64(&[1]));
        assert_eq!(charpoly_of_entries(1, &[7]), IntPolynomial::from_i64(&[-7, 1]));
        // [[1,2],[3,4]]: t² − 5t − 2
        assert_eq!(
            charpoly_of_entries(2, &[1, 2, 3, 4]),
            IntPolynomial::from_i64(&[-2, -5, 1])
        );
    }

    #[test]
    fn residual_examples() {
        assert_eq!(minpoly_residual(&IntPolynomial::from_i64(&[-2, 1]), 2.0), 0.0);
        let p13 = IntPolynomial::from_i64(&[-25, 0, 12]);
        assert!(minpoly_residual(&p13, 1.443375673).abs() <= 1e-8);
        assert_eq!(minpoly_residual(&IntPolynomial::from_i64(&[-3, 2]), 1.0), -1.0);
    }

    #[test]
    fn compensated_horner_beats_naive_near_a_multiple_root() {
        // (t − 1)^8 expanded has catastrophic cancellation near t = 1.
        let p = IntPolynomial::linear_power(1, 8);
        let t = 1.0 + 1e-3;
        let exact = 1e-24;
        let naive = (p.eval_f64(t) - exact).abs();
        let comp = (p.eval_compensated(t) - exact).abs();
        assert!(comp <= naive);
        assert!(comp < 1e-20);
    }

    #[test]
    fn display_and_parse() {
        let p = IntPolynomial::from_i64(&[-5, -1, 2]);
        assert_eq!(p.to_string(), "-5 - t + 2t^2");
        assert_eq!(parse_coefficients("-5, -1, 2"), Some(p));
        assert_eq!(parse_coefficients("0,0"), None);
        assert_eq!(parse_coefficients("1,x"), None);
    }
}
