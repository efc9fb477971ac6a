//! One-shot certificate for a sign matrix: κ, the Gram identity it
//! satisfies (if any), a verified clique lower bound, and optional
//! minimal-polynomial and Bernstein checks.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::{format_hex, Sig10};
use crate::lower_bound::{best_clique_certificate_for_gram, CliqueCertificate, CliqueSign};
use crate::matrix::{GramMatrix, SignMatrix};
use crate::poly::{minpoly_residual, IntPolynomial};
use crate::rounding::{bernstein_bound, BernsteinCertificate};
use crate::spectral::{condition_number, SpectralReport};

pub const CERTIFY_SCHEMA_VERSION: u32 = 1;

/// Top-level keys of the JSON report, in emission order.
pub const CERTIFY_KEYS: [&str; 10] = [
    "schema_version",
    "n",
    "kappa",
    "kappa_hex",
    "sigma_min",
    "sigma_max",
    "gram_class",
    "clique_certificate",
    "minpoly",
    "bernstein",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GramClass {
    /// AᵀA = nI
    #[serde(rename = "hadamard")]
    Hadamard,
    /// AᵀA = (n−1)I + J
    #[serde(rename = "barba")]
    Barba,
    /// AᵀA = I₂ ⊗ ((n−2)I + 2J)
    #[serde(rename = "sds_block")]
    SdsBlock,
    /// AᵀA = nI + 2C, C a symmetric conference matrix
    #[serde(rename = "conference_plus_I")]
    ConferencePlusI,
    #[serde(rename = "none")]
    None,
}

fn is_conference_plus_identity(g: &GramMatrix) -> bool {
    let n = g.n();
    if n < 2 {
        return false;
    }
    let mut c = vec![0i64; n * n];
    for i in 0..n {
        if g.get(i, i) != n as i64 {
            return false;
        }
        for j in 0..n {
            if i != j {
                let v = g.get(i, j);
                if v.abs() != 2 {
                    return false;
                }
                c[i * n + j] = v / 2;
            }
        }
    }
    // CᵀC = (n−1)I
    for i in 0..n {
        for j in i..n {
            let s: i64 = (0..n).map(|k| c[k * n + i] * c[k * n + j]).sum();
            let want = if i == j { n as i64 - 1 } else { 0 };
            if s != want {
                return false;
            }
        }
    }
    true
}

pub fn classify_gram(g: &GramMatrix) -> GramClass {
    let n = g.n() as i64;
    if g.is_scalar_pattern(n, 0) {
        GramClass::Hadamard
    } else if g.is_scalar_pattern(n, 1) {
        GramClass::Barba
    } else if g.n() % 2 == 0 && g.n() >= 4 && crate::families::check_sds_gram(g).is_ok() {
        GramClass::SdsBlock
    } else if is_conference_plus_identity(g) {
        GramClass::ConferencePlusI
    } else {
        GramClass::None
    }
}

#[derive(Clone, Debug)]
pub struct MinpolyCheck {
    pub polynomial: IntPolynomial,
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct CertifyReport {
    pub n: usize,
    pub spectral: SpectralReport,
    pub gram_class: GramClass,
    pub clique_certificate: CliqueCertificate,
    pub clique_verified: bool,
    pub minpoly: Option<MinpolyCheck>,
    pub bernstein: Option<BernsteinCertificate>,
}

/// Allowed excess of a clique bound over κ.
pub const CLIQUE_BOUND_SLACK: f64 = 1e-9;

pub fn certify(
    a: &SignMatrix,
    minpoly: Option<IntPolynomial>,
    flatness: Option<f64>,
) -> Result<CertifyReport> {
    let g = a.gram();
    let spectral = condition_number(a);
    let clique_certificate = best_clique_certificate_for_gram(&g);
    let clique_verified = clique_certificate.verify(&g);
    if !clique_verified || clique_certificate.bound > spectral.kappa + CLIQUE_BOUND_SLACK {
        return Err(Error::Rejected(format!(
            "clique certificate inconsistent: bound {} against kappa {}",
            clique_certificate.bound, spectral.kappa
        )));
    }
    if let Some(u) = flatness {
        if !(u > 0.0 && u <= 1.0) {
            return Err(Error::Precondition(format!("flatness must lie in (0, 1], got {u}")));
        }
    }
    let minpoly = minpoly.map(|p| MinpolyCheck {
        residual: minpoly_residual(&p, spectral.kappa),
        polynomial: p,
    });
    Ok(CertifyReport {
        n: a.n(),
        gram_class: classify_gram(&g),
        clique_certificate,
        clique_verified,
        minpoly,
        bernstein: flatness.map(|u| bernstein_bound(a.n(), u)),
        spectral,
    })
}

#[derive(Serialize)]
struct CliqueJson<'a> {
    sign: CliqueSign,
    k: usize,
    indices: &'a [usize],
    bound: Sig10,
    verified: bool,
}

#[derive(Serialize)]
struct MinpolyJson<'a> {
    coefficients: &'a IntPolynomial,
    residual: Sig10,
}

#[derive(Serialize)]
struct BernsteinJson {
    u: Sig10,
    e_n: Sig10,
    kappa_bound: Sig10,
    kappa_bound_doubled: Sig10,
}

#[derive(Serialize)]
pub struct CertifyJson<'a> {
    schema_version: u32,
    n: usize,
    kappa: Sig10,
    kappa_hex: String,
    sigma_min: Sig10,
    sigma_max: Sig10,
    gram_class: GramClass,
    clique_certificate: CliqueJson<'a>,
    minpoly: Option<MinpolyJson<'a>>,
    bernstein: Option<BernsteinJson>,
}

impl CertifyReport {
    pub fn kappa(&self) -> f64 {
        self.spectral.kappa
    }

    /// Serializable view with 10-digit numbers.
    pub fn json(&self) -> CertifyJson<'_> {
        let c = &self.clique_certificate;
        CertifyJson {
            schema_version: CERTIFY_SCHEMA_VERSION,
            n: self.n,
            kappa: Sig10(self.spectral.kappa),
            kappa_hex: format_hex(self.spectral.kappa),
            sigma_min: Sig10(self.spectral.sigma_min),
            sigma_max: Sig10(self.spectral.sigma_max),
            gram_class: self.gram_class,
            clique_certificate: CliqueJson {
                sign: c.sign,
                k: c.k,
                indices: &c.indices,
                bound: Sig10(c.bound),
                verified: self.clique_verified,
            },
            minpoly: self.minpoly.as_ref().map(|m| MinpolyJson {
                coefficients: &m.polynomial,
                residual: Sig10(m.residual),
            }),
            bernstein: self.bernstein.as_ref().map(|b| BernsteinJson {
                u: Sig10(b.u),
                e_n: Sig10(b.e_n),
                kappa_bound: Sig10(b.kappa_bound),
                kappa_bound_doubled: Sig10(b.kappa_bound_doubled),
            }),
        }
    }
}
