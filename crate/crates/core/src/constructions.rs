//! Explicit Hadamard and conference matrices: Sylvester, Paley I/II, the
//! symmetric Paley conference matrix, and Kronecker closure over a catalog
//! of constructible orders.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FiniteFieldSpec;
use crate::matrix::SignMatrix;

/// Largest order any construction here will build.
pub const MAX_ORDER: usize = 4096;

pub fn sylvester(t: u32) -> Result<SignMatrix> {
    let order = 1usize.checked_shl(t).filter(|&m| m <= MAX_ORDER).ok_or(
        Error::OrderTooLarge {
            order: usize::MAX,
            max: MAX_ORDER,
        },
    )?;
    let h2 = SignMatrix::from_rows(&[[1, 1], [1, -1]]).expect("H2");
    let mut h = SignMatrix::ones(1);
    while h.n() < order {
        h = h2.kronecker(&h);
    }
    Ok(h)
}

/// Square matrix with entries in {−1, 0, +1}, used for conference
/// matrices (zero diagonal).
#[derive(Clone, PartialEq, Eq)]
pub struct ConferenceMatrix {
    n: usize,
    entries: Vec<i8>,
}

impl ConferenceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.entries[i * self.n + j]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn trace(&self) -> i64 {
        (0..self.n).map(|i| self.get(i, i) as i64).sum()
    }

    /// Exact CᵀC, row-major.
    pub fn gram(&self) -> Vec<i64> {
        let n = self.n;
        let mut out = vec![0i64; n * n];
        for a in 0..n {
            for b in 0..n {
                out[a * n + b] = (0..n)
                    .map(|i| (self.get(i, a) * self.get(i, b)) as i64)
                    .sum();
            }
        }
        out
    }

    pub fn entries_i64(&self) -> Vec<i64> {
        self.entries.iter().map(|&e| e as i64).collect()
    }

    /// C + I; requires a zero diagonal and ±1 elsewhere.
    pub fn plus_identity(&self) -> SignMatrix {
        SignMatrix::from_fn(self.n, |i, j| if i == j { true } else { self.get(i, j) == 1 })
    }

    pub fn rows_text(&self) -> Vec<String> {
        self.entries
            .chunks(self.n)
            .map(|r| {
                r.iter()
                    .map(|&v| match v {
                        1 => '+',
                        -1 => '-',
                        _ => '0',
                    })
                    .collect()
            })
            .collect()
    }
}

impl fmt::Debug for ConferenceMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ConferenceMatrix(n = {})", self.n)?;
        for r in self.rows_text() {
            writeln!(f, "  {r}")?;
        }
        Ok(())
    }
}

/// Jacobsthal matrix Q[a][b] = χ(a − b) over GF(q).
fn jacobsthal(spec: &FiniteFieldSpec) -> Vec<Vec<i8>> {
    let field = spec.build();
    let q = field.order();
    (0..q)
        .map(|a| (0..q).map(|b| field.chi(field.sub(a, b))).collect())
        .collect()
}

/// `[[0, jᵀ], [±j, Q]]` with the lower border sign given by `lower`.
fn bordered_jacobsthal(spec: &FiniteFieldSpec, lower: i8) -> ConferenceMatrix {
    let q = spec.q as usize;
    let n = q + 1;
    let jac = jacobsthal(spec);
    let mut entries = vec![0i8; n * n];
    for j in 1..n {
        entries[j] = 1;
        entries[j * n] = lower;
    }
    for a in 0..q {
        for b in 0..q {
            entries[(a + 1) * n + (b + 1)] = jac[a][b];
        }
    }
    ConferenceMatrix { n, entries }
}

/// Paley type I Hadamard matrix of order q + 1, q ≡ 3 (mod 4).
pub fn paley_i(spec: &FiniteFieldSpec) -> Result<SignMatrix> {
    if spec.q % 4 != 3 {
        return Err(Error::Precondition(format!(
            "Paley I needs q ≡ 3 (mod 4), got q = {}",
            spec.q
        )));
    }
    Ok(bordered_jacobsthal(spec, -1).plus_identity())
}

/// Symmetric Paley conference matrix of order q + 1, q ≡ 1 (mod 4).
pub fn paley_conference(spec: &FiniteFieldSpec) -> Result<ConferenceMatrix> {
    if spec.q % 4 != 1 {
        return Err(Error::Precondition(format!(
            "a symmetric conference matrix needs q ≡ 1 (mod 4), got q = {}",
            spec.q
        )));
    }
    Ok(bordered_jacobsthal(spec, 1))
}

/// Paley type II Hadamard matrix of order 2(q + 1), q ≡ 1 (mod 4):
/// zeros of the conference matrix become `[[1,−1],[−1,−1]]` and ±1 entries
/// become `±[[1,1],[1,−1]]`.
pub fn paley_ii(spec: &FiniteFieldSpec) -> Result<SignMatrix> {
    let c = paley_conference(spec)?;
    let n = c.n();
    Ok(SignMatrix::from_fn(2 * n, |r, s| {
        let (i, p) = (r / 2, r % 2);
        let (j, q) = (s / 2, s % 2);
        let v = match c.get(i, j) {
            0 => [[1, -1], [-1, -1]][p][q],
            e => e * [[1, 1], [1, -1]][p][q],
        };
        v == 1
    }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Recipe {
    Sylvester(u32),
    PaleyI(u64),
    PaleyII(u64),
    /// Kronecker product of two catalog orders.
    Kronecker(usize, usize),
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Recipe::Sylvester(t) => write!(f, "sylvester({t})"),
            Recipe::PaleyI(q) => write!(f, "paley1({q})"),
            Recipe::PaleyII(q) => write!(f, "paley2({q})"),
            Recipe::Kronecker(a, b) => write!(f, "kron({a},{b})"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub order: usize,
    pub recipe: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderChoice {
    pub m: usize,
    pub recipe: Recipe,
    pub gap: usize,
}

/// Hadamard orders up to `max_order` this module can build explicitly.
#[derive(Clone, Debug)]
pub struct HadamardOrderCatalog {
    max_order: usize,
    constructible: BTreeMap<usize, Recipe>,
}

impl HadamardOrderCatalog {
    pub fn build(max_order: usize) -> Self {
        let max_order = max_order.min(MAX_ORDER);
        let mut constructible = BTreeMap::new();
        let mut t = 0;
        while (1usize << t) <= max_order {
            constructible.insert(1usize << t, Recipe::Sylvester(t));
            t += 1;
        }
        for q in 2..max_order as u64 {
            if !FiniteFieldSpec::is_supported(q) {
                continue;
            }
            let (order, recipe) = match q % 4 {
                3 => ((q + 1) as usize, Recipe::PaleyI(q)),
                1 => (2 * (q + 1) as usize, Recipe::PaleyII(q)),
                _ => continue,
            };
            if order <= max_order {
                constructible.entry(order).or_insert(recipe);
            }
        }
        loop {
            let orders: Vec<usize> = constructible.keys().copied().collect();
            let mut added = Vec::new();
            for &a in orders.iter().filter(|&&a| a > 1) {
                for &b in orders.iter().filter(|&&b| b >= a) {
                    let m = a * b;
                    if m > max_order {
                        break;
                    }
                    if !constructible.contains_key(&m) && !added.iter().any(|(o, _)| *o == m) {
                        added.push((m, Recipe::Kronecker(a, b)));
                    }
                }
            }
            if added.is_empty() {
                break;
            }
            constructible.extend(added);
        }
        Self {
            max_order,
            constructible,
        }
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn contains(&self, m: usize) -> bool {
        self.constructible.contains_key(&m)
    }

    pub fn orders(&self) -> impl Iterator<Item = usize> + '_ {
        self.constructible.keys().copied()
    }

    pub fn recipe(&self, m: usize) -> Option<&Recipe> {
        self.constructible.get(&m)
    }

    pub fn entries(&self) -> Vec<CatalogEntry> {
        self.constructible
            .iter()
            .map(|(&order, r)| CatalogEntry {
                order,
                recipe: r.to_string(),
            })
            .collect()
    }

    pub fn smallest_order_at_least(&self, n: usize) -> Result<OrderChoice> {
        if n > self.max_order {
            return Err(Error::OrderTooLarge {
                order: n,
                max: self.max_order,
            });
        }
        let (&m, recipe) = self
            .constructible
            .range(n..)
            .next()
            .ok_or(Error::OrderTooLarge {
                order: n,
                max: self.max_order,
            })?;
        Ok(OrderChoice {
            m,
            recipe: recipe.clone(),
            gap: m - n,
        })
    }

    /// Orders adjacent to n (largest below, smallest at or above).
    pub fn nearest_orders(&self, n: usize) -> Vec<usize> {
        let below = self.constructible.range(..n).next_back().map(|(&m, _)| m);
        let above = self.constructible.range(n..).next().map(|(&m, _)| m);
        below.into_iter().chain(above).collect()
    }

    pub fn hadamard(&self, m: usize) -> Result<SignMatrix> {
        let recipe = self.recipe(m).ok_or_else(|| {
            Error::Precondition(format!("order {m} is not in the catalog"))
        })?;
        match *recipe {
            Recipe::Sylvester(t) => sylvester(t),
            Recipe::PaleyI(q) => paley_i(&FiniteFieldSpec::new(q)?),
            Recipe::PaleyII(q) => paley_ii(&FiniteFieldSpec::new(q)?),
            Recipe::Kronecker(a, b) => Ok(self.hadamard(a)?.kronecker(&self.hadamard(b)?)),
        }
    }
}

/// Evaluated gap bound `2·2^{b(a+c+1)/(a+b)}·n^{a/(a+b)}`, with the
/// exponent a/(a+b) kept as a reduced fraction.
#[derive(Clone, Debug, PartialEq)]
pub struct GapBound {
    pub value: f64,
    pub exponent_num: u64,
    pub exponent_den: u64,
}

pub fn gap_bound(a: u64, b: u64, c: u64, n: u64) -> GapBound {
    let g = num_integer::gcd(a, a + b);
    let value = 2.0
        * 2f64.powf((b * (a + c + 1)) as f64 / (a + b) as f64)
        * (n as f64).powf(a as f64 / (a + b) as f64);
    GapBound {
        value,
        exponent_num: a / g,
        exponent_den: (a + b) / g,
    }
}
