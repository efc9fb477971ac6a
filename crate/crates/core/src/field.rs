//! Small finite fields GF(q) for Paley constructions.
//!
//! Elements are indexed `0..q`; index `x` encodes the polynomial
//! `Σ d_i·x^i` where `d_i` are the base-p digits of the index. Addition
//! and multiplication go through precomputed tables.

use crate::error::{Error, Result};

/// Irreducible polynomials for the supported non-prime orders, as
/// (q, p, coefficients constant-first, monic, degree k).
const IRREDUCIBLE: &[(u64, u64, &[u64])] = &[
    (9, 3, &[1, 0, 1]),        // x² + 1
    (25, 5, &[2, 0, 1]),       // x² + 2
    (27, 3, &[1, 2, 0, 1]),    // x³ + 2x + 1
    (49, 7, &[1, 0, 1]),       // x² + 1
    (81, 3, &[2, 1, 0, 0, 1]), // x⁴ + x + 2
    (121, 11, &[1, 0, 1]),     // x² + 1
    (125, 5, &[1, 1, 0, 1]),   // x³ + x + 1
];

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteFieldSpec {
    pub q: u64,
    pub p: u64,
    pub k: u32,
    /// Present iff k > 1.
    pub irreducible_poly: Option<Vec<u64>>,
}

impl FiniteFieldSpec {
    pub fn new(q: u64) -> Result<Self> {
        if is_prime(q) {
            return Ok(Self {
                q,
                p: q,
                k: 1,
                irreducible_poly: None,
            });
        }
        IRREDUCIBLE
            .iter()
            .find(|(order, _, _)| *order == q)
            .map(|&(q, p, poly)| Self {
                q,
                p,
                k: (poly.len() - 1) as u32,
                irreducible_poly: Some(poly.to_vec()),
            })
            .ok_or(Error::UnsupportedPrimePower(q))
    }

    pub fn is_supported(q: u64) -> bool {
        Self::new(q).is_ok()
    }

    pub fn build(&self) -> FiniteField {
        FiniteField::new(self)
    }
}

#[derive(Clone, Debug)]
pub struct FiniteField {
    q: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    is_square: Vec<bool>,
}

impl FiniteField {
    fn new(spec: &FiniteFieldSpec) -> Self {
        let q = spec.q as usize;
        let p = spec.p as usize;
        let k = spec.k as usize;
        let digits = |mut x: usize| {
            let mut d = vec![0usize; k];
            for slot in d.iter_mut() {
                *slot = x % p;
                x /= p;
            }
            d
        };
        let index = |d: &[usize]| d.iter().rev().fold(0usize, |acc, &v| acc * p + v);
        let modulus: Vec<usize> = spec
            .irreducible_poly
            .as_ref()
            .map(|v| v.iter().map(|&c| c as usize).collect())
            .unwrap_or_default();

        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = index(&sum) as u16;

                let prod = if k == 1 {
                    vec![(a * b) % p]
                } else {
                    let mut full = vec![0usize; 2 * k - 1];
                    for (i, x) in da.iter().enumerate() {
                        for (j, y) in db.iter().enumerate() {
                            full[i + j] = (full[i + j] + x * y) % p;
                        }
                    }
                    // reduce by the monic modulus from the top down
                    for deg in (k..full.len()).rev() {
                        let c = full[deg];
                        if c == 0 {
                            continue;
                        }
                        full[deg] = 0;
                        for (i, &m) in modulus.iter().take(k).enumerate() {
                            let shift = deg - k + i;
                            full[shift] = (full[shift] + (p - (c * m) % p)) % p;
                        }
                    }
                    full.truncate(k);
                    full
                };
                mul[a * q + b] = index(&prod) as u16;
            }
        }
        let neg = (0..q)
            .map(|a| (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u16)
            .collect();
        let mut is_square = vec![false; q];
        for a in 1..q {
            is_square[mul[a * q + a] as usize] = true;
        }
        Self {
            q,
            add,
            mul,
            neg,
            is_square,
        }
    }

    pub fn order(&self) -> usize {
        self.q
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.q + b] as usize
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.q + b] as usize
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg[b] as usize)
    }

    /// Quadratic character: χ(0) = 0, χ(x) = +1 iff x is a nonzero square.
    pub fn chi(&self, x: usize) -> i8 {
        if x == 0 {
            0
        } else if self.is_square[x] {
            1
        } else {
            -1
        }
    }

    /// True when every nonzero element has a multiplicative inverse.
    pub fn is_field(&self) -> bool {
        (1..self.q).all(|a| (1..self.q).any(|b| self.mul(a, b) == 1))
    }
}
