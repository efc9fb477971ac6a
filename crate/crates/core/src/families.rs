//! Explicit families with closed-form condition numbers: C + I for
//! symmetric conference matrices C, Barba matrices (AᵀA = (n−1)I + J) and
//! the two-circulant SDS block construction.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::constructions::paley_conference;
use crate::error::{Error, Result};
use crate::field::FiniteFieldSpec;
use crate::matrix::{GramMatrix, SignMatrix};
use crate::poly::{charpoly_of_entries, IntPolynomial};
use crate::spectral::condition_number;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    ConferencePlusI,
    Barba,
    SdsBlock,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GramIdentity {
    /// AᵀA = nI + 2C with C a symmetric conference matrix.
    NIPlusTwoConference,
    /// AᵀA = (n−1)I + J.
    NMinusOneIPlusJ,
    /// AᵀA = I₂ ⊗ ((n−2)I + 2J).
    BlockNMinusTwoIPlusTwoJ,
}

#[derive(Clone, Debug)]
pub struct FamilyMatrix {
    pub family: Family,
    pub matrix: SignMatrix,
    pub n: usize,
    pub kappa_closed_form: f64,
    pub kappa_computed: f64,
    pub gram_identity: GramIdentity,
}

pub fn conference_kappa(n: usize) -> f64 {
    let r = ((n - 1) as f64).sqrt();
    (r + 1.0) / (r - 1.0)
}

pub fn barba_kappa(n: usize) -> f64 {
    ((2 * n - 1) as f64 / (n - 1) as f64).sqrt()
}

pub fn sds_kappa(n: usize) -> f64 {
    ((2 * n - 2) as f64 / (n - 2) as f64).sqrt()
}

/// C + I for the symmetric Paley conference matrix of order n = q + 1.
/// Also checks C = Cᵀ, CᵀC = (n−1)I, tr C = 0 and that the exact
/// characteristic polynomial of C is (t² − (n−1))^{n/2}.
pub fn conference_plus_identity(n: usize) -> Result<FamilyMatrix> {
    if n < 2 || n % 4 != 2 {
        return Err(Error::Precondition(format!(
            "C + I needs n ≡ 2 (mod 4) with n − 1 a prime power, got n = {n}"
        )));
    }
    let spec = FiniteFieldSpec::new((n - 1) as u64)?;
    let c = paley_conference(&spec)?;
    if !c.is_symmetric() || c.trace() != 0 {
        return Err(Error::Precondition("conference matrix is not symmetric".into()));
    }
    let ctc = c.gram();
    for i in 0..n {
        for j in 0..n {
            let expected = if i == j { (n - 1) as i64 } else { 0 };
            if ctc[i * n + j] != expected {
                return Err(Error::GramMismatch {
                    row: i,
                    col: j,
                    expected,
                    found: ctc[i * n + j],
                });
            }
        }
    }
    let expected_char = IntPolynomial::from_i64(&[-((n - 1) as i64), 0, 1]).pow(n / 2);
    if charpoly_of_entries(n, &c.entries_i64()) != expected_char {
        return Err(Error::Precondition(
            "conference eigenvalues are not ±sqrt(n−1) with equal multiplicity".into(),
        ));
    }
    let matrix = c.plus_identity();
    let kappa_computed = condition_number(&matrix).kappa;
    Ok(FamilyMatrix {
        family: Family::ConferencePlusI,
        n,
        kappa_closed_form: conference_kappa(n),
        kappa_computed,
        gram_identity: GramIdentity::NIPlusTwoConference,
        matrix,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarbaRejection {
    pub row: usize,
    pub col: usize,
    pub expected: i64,
    pub found: i64,
}

impl fmt::Display for BarbaRejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Gram entry ({}, {}) is {}, a Barba matrix needs {}",
            self.row, self.col, self.found, self.expected
        )
    }
}

/// Accepts A iff AᵀA = (n−1)I + J exactly.
pub fn verify_barba(a: &SignMatrix) -> std::result::Result<FamilyMatrix, BarbaRejection> {
    let n = a.n();
    let g = a.gram();
    if let Some((row, col, expected, found)) = g.first_deviation(n as i64, 1) {
        return Err(BarbaRejection {
            row,
            col,
            expected,
            found,
        });
    }
    if n < 2 {
        return Err(BarbaRejection {
            row: 0,
            col: 0,
            expected: 1,
            found: 1,
        });
    }
    Ok(FamilyMatrix {
        family: Family::Barba,
        n,
        kappa_closed_form: barba_kappa(n),
        kappa_computed: condition_number(a).kappa,
        gram_identity: GramIdentity::NMinusOneIPlusJ,
        matrix: a.clone(),
    })
}

/// Column sign flips D with (AD)ᵀ(AD) = (n−1)I + J, if the Gram of A is
/// switching equivalent to that pattern. κ is unchanged by the flips.
pub fn switch_to_barba(a: &SignMatrix) -> Option<SignMatrix> {
    let g = a.gram();
    let n = a.n();
    let signs: Vec<i64> = (0..n).map(|j| if j == 0 { 1 } else { g.get(0, j).signum() }).collect();
    let mut out = a.clone();
    for (j, &s) in signs.iter().enumerate() {
        if s < 0 {
            out.negate_col(j);
        }
    }
    out.gram().is_scalar_pattern(n as i64, 1).then_some(out)
}

/// Periodic autocorrelation Σ_i x_i·x_{(i+t) mod L}.
pub fn paf(x: &[i8], t: usize) -> i64 {
    let l = x.len();
    (0..l).map(|i| (x[i] * x[(i + t) % l]) as i64).sum()
}

fn paf_vector(x: &[i8]) -> Vec<i64> {
    (1..x.len()).map(|t| paf(x, t)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SdsPair {
    pub r: Vec<i8>,
    pub s: Vec<i8>,
}

fn sign_string(x: &[i8]) -> String {
    x.iter().map(|&v| if v == 1 { '+' } else { '-' }).collect()
}

fn parse_signs(s: &str) -> Result<Vec<i8>> {
    s.chars()
        .enumerate()
        .map(|(i, c)| match c {
            '+' => Ok(1),
            '-' => Ok(-1),
            _ => Err(Error::Parse {
                line: 1,
                column: i + 1,
                message: format!("unexpected character {c:?}"),
            }),
        })
        .collect()
}

impl SdsPair {
    pub fn new(r: Vec<i8>, s: Vec<i8>) -> Result<Self> {
        if r.is_empty() || r.len() != s.len() {
            return Err(Error::DimensionMismatch {
                expected: r.len(),
                found: s.len(),
            });
        }
        if r.iter().chain(&s).any(|&v| v != 1 && v != -1) {
            return Err(Error::Precondition("sequences must be ±1".into()));
        }
        Ok(Self { r, s })
    }

    pub fn half(&self) -> usize {
        self.r.len()
    }

    /// PAF_r(t) + PAF_s(t) = 2 for every nonzero shift.
    pub fn satisfies_paf_identity(&self) -> bool {
        (1..self.half()).all(|t| paf(&self.r, t) + paf(&self.s, t) == 2)
    }

    /// The two sequences as `+`/`-` strings.
    pub fn to_strings(&self) -> (String, String) {
        (sign_string(&self.r), sign_string(&self.s))
    }

    pub fn from_strings(r: &str, s: &str) -> Result<Self> {
        Self::new(parse_signs(r)?, parse_signs(s)?)
    }
}

/// Bitmask encoding: bit i set means x_i = −1.
fn decode(mask: u32, len: usize) -> Vec<i8> {
    (0..len).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect()
}

/// Lexicographic key with position 0 most significant and `+` < `−`.
fn lex_key(mask: u32, len: usize) -> u32 {
    (0..len).fold(0, |acc, i| (acc << 1) | (mask >> i & 1))
}

/// Canonical under cyclic rotation and negation: the lexicographically
/// smallest image.
fn is_canonical(mask: u32, len: usize) -> bool {
    let full = if len == 32 { u32::MAX } else { (1u32 << len) - 1 };
    let key = lex_key(mask, len);
    for shift in 0..len {
        let rot = ((mask >> shift) | (mask << ((len - shift) % len))) & full;
        let rot = if shift == 0 { mask } else { rot };
        if lex_key(rot, len) < key || lex_key(!rot & full, len) < key {
            return false;
        }
    }
    true
}

pub const SDS_MAX_HALF: usize = 16;

/// All (r, s) with PAF_r + PAF_s ≡ 2 off zero, each sequence taken up to
/// rotation and negation (lexicographically smallest representative,
/// `+` first). Sorted output.
pub fn sds_search(half: usize) -> Result<Vec<SdsPair>> {
    if half == 0 {
        return Err(Error::EmptyMatrix);
    }
    if half > SDS_MAX_HALF {
        return Err(Error::OrderTooLarge {
            order: half,
            max: SDS_MAX_HALF,
        });
    }
    let canon: Vec<Vec<i8>> = (0u32..(1u32 << half))
        .filter(|&m| is_canonical(m, half))
        .map(|m| decode(m, half))
        .collect();
    let mut by_paf: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    for (idx, x) in canon.iter().enumerate() {
        by_paf.entry(paf_vector(x)).or_default().push(idx);
    }
    let mut out = Vec::new();
    for r in &canon {
        let needed: Vec<i64> = paf_vector(r).iter().map(|p| 2 - p).collect();
        if let Some(matches) = by_paf.get(&needed) {
            for &j in matches {
                out.push(SdsPair {
                    r: r.clone(),
                    s: canon[j].clone(),
                });
            }
        }
    }
    out.sort();
    Ok(out)
}

/// `[[R, S], [Sᵀ, −Rᵀ]]` with R, S circulant.
pub fn two_block_matrix(r: &[i8], s: &[i8]) -> SignMatrix {
    let h = r.len();
    let circ = |x: &[i8], i: usize, j: usize| x[(j + h - i) % h];
    SignMatrix::from_fn(2 * h, |i, j| {
        let v = match (i < h, j < h) {
            (true, true) => circ(r, i, j),
            (true, false) => circ(s, i, j - h),
            (false, true) => circ(s, j, i - h),
            (false, false) => -circ(r, j - h, i - h),
        };
        v == 1
    })
}

/// The SDS block matrix with exact Gram check against I₂ ⊗ ((n−2)I + 2J).
pub fn sds_block_matrix(pair: &SdsPair) -> Result<FamilyMatrix> {
    if !pair.satisfies_paf_identity() {
        return Err(Error::Precondition(
            "pair violates PAF_r(t) + PAF_s(t) = 2".into(),
        ));
    }
    let h = pair.half();
    let n = 2 * h;
    let matrix = two_block_matrix(&pair.r, &pair.s);
    let g = matrix.gram();
    check_sds_gram(&g)?;
    let kappa_computed = condition_number(&matrix).kappa;
    Ok(FamilyMatrix {
        family: Family::SdsBlock,
        n,
        kappa_closed_form: if n > 2 { sds_kappa(n) } else { 1.0 },
        kappa_computed,
        gram_identity: GramIdentity::BlockNMinusTwoIPlusTwoJ,
        matrix,
    })
}

pub fn check_sds_gram(g: &GramMatrix) -> Result<()> {
    let n = g.n();
    let h = n / 2;
    for i in 0..n {
        for j in 0..n {
            let same_block = (i < h) == (j < h);
            let expected = match (i == j, same_block) {
                (true, _) => n as i64,
                (false, true) => 2,
                (false, false) => 0,
            };
            if g.get(i, j) != expected {
                return Err(Error::GramMismatch {
                    row: i,
                    col: j,
                    expected,
                    found: g.get(i, j),
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn switching_recovers_barba_gram() {
        let mut a = SignMatrix::circulant(&[1, 1, 1, 1, -1]).unwrap();
        a.negate_col(2);
        a.negate_col(4);
        assert!(verify_barba(&a).is_err());
        let b = switch_to_barba(&a).unwrap();
        assert!(verify_barba(&b).is_ok());
        assert!(switch_to_barba(&crate::constructions::sylvester(2).unwrap()).is_none());
    }

    #[test]
    fn conference_examples() {
        let c6 = conference_plus_identity(6).unwrap();
        assert!((c6.kappa_closed_form - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!((c6.kappa_computed - 2.6180339887).abs() < 1e-10);
        let c10 = conference_plus_identity(10).unwrap();
        assert!((c10.kappa_closed_form - 2.0).abs() < 1e-15);
        assert!((c10.kappa_computed - 2.0).abs() < 1e-10);
        assert!(conference_plus_identity(8).is_err());
        // 15 is not a prime power
        assert!(matches!(
            conference_plus_identity(16),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn barba_examples() {
        let a = SignMatrix::circulant(&[1, 1, 1, 1, -1]).unwrap();
        let f = verify_barba(&a).unwrap();
        assert!((f.kappa_computed - 1.5).abs() < 1e-12);
        assert!((f.kappa_closed_form - 1.5).abs() < 1e-15);
        let h = crate::constructions::sylvester(2).unwrap();
        let rej = verify_barba(&h).unwrap_err();
        assert_eq!((rej.row, rej.col, rej.expected, rej.found), (0, 1, 1, 0));
    }

    #[test]
    fn sds_half_three_contains_the_hand_pair() {
        let pairs = sds_search(3).unwrap();
        let hand = SdsPair::new(vec![1, 1, 1], vec![1, 1, -1]).unwrap();
        assert!(pairs.contains(&hand));
        assert!(pairs.iter().all(|p| p.satisfies_paf_identity()));
        let f = sds_block_matrix(&hand).unwrap();
        assert_eq!(f.n, 6);
        assert!((f.kappa_computed - 1.5811388301).abs() < 1e-10);
    }

    #[test]
    fn sds_half_one_is_vacuous() {
        let pairs = sds_search(1).unwrap();
        assert_eq!(pairs, vec![SdsPair::new(vec![1], vec![1]).unwrap()]);
    }

    #[test]
    fn sds_rejects_large_half_and_bad_pairs() {
        assert!(sds_search(17).is_err());
        let bad = SdsPair::new(vec![1, 1, 1], vec![1, 1, 1]).unwrap();
        assert!(sds_block_matrix(&bad).is_err());
    }

    #[test]
    fn canonical_forms_count_necklaces() {
        // Binary necklaces of length 6 up to complement: 8.
        let count = (0u32..64).filter(|&m| is_canonical(m, 6)).count();
        assert_eq!(count, 8);
    }

    #[test]
    fn sds_pair_strings_round_trip() {
        let p = SdsPair::new(vec![1, -1, 1], vec![-1, -1, 1]).unwrap();
        let (r, s) = p.to_strings();
        assert_eq!((r.as_str(), s.as_str()), ("+-+", "--+"));
        assert_eq!(SdsPair::from_strings(&r, &s).unwrap(), p);
    }
}
