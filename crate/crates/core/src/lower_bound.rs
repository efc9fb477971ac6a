//! Lower-bound certificates for κ from monochromatic cliques in the sign
//! pattern of AᵀA.
//!
//! If k columns have pairwise strictly positive inner products, the k×k
//! principal submatrix M of AᵀA has κ(M) ≥ 1 + k/(n−1); if they are
//! pairwise strictly negative, κ(M) ≥ 1 + k/(n+1−k). Interlacing gives
//! κ(A) = sqrt(κ(AᵀA)) ≥ sqrt(κ(M)).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{GramMatrix, SignMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeColor {
    Zero,
    Positive,
    Negative,
}

impl EdgeColor {
    fn of(value: i64) -> Self {
        match value.signum() {
            0 => EdgeColor::Zero,
            1 => EdgeColor::Positive,
            _ => EdgeColor::Negative,
        }
    }
}

/// Edge coloring of K_n by the sign of the Gram entry.
#[derive(Clone, Debug)]
pub struct SignColoring {
    n: usize,
    colors: Vec<EdgeColor>,
}

impl SignColoring {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn color(&self, i: usize, j: usize) -> EdgeColor {
        self.colors[i * self.n + j]
    }

    pub fn count(&self, color: EdgeColor) -> usize {
        let mut c = 0;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.color(i, j) == color {
                    c += 1;
                }
            }
        }
        c
    }
}

pub fn sign_coloring(g: &GramMatrix) -> SignColoring {
    let n = g.n();
    let mut colors = vec![EdgeColor::Zero; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                colors[i * n + j] = EdgeColor::of(g.get(i, j));
            }
        }
    }
    SignColoring { n, colors }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CliqueSign {
    Positive,
    Negative,
}

#[derive(Clone, Debug, Serialize)]
pub struct CliqueCertificate {
    pub n: usize,
    pub k: usize,
    pub sign: CliqueSign,
    pub indices: Vec<usize>,
    pub bound: f64,
}

/// sqrt(1 + k/(n−1)) or sqrt(1 + k/(n+1−k)); a single column (k ≤ 1) gives the vacuous 1.
pub fn clique_bound(n: usize, k: usize, sign: CliqueSign) -> f64 {
    if k <= 1 {
        return 1.0;
    }
    let (n, kf) = (n as f64, k as f64);
    match sign {
        CliqueSign::Positive => (1.0 + kf / (n - 1.0)).sqrt(),
        CliqueSign::Negative => {
            let denom = n + 1.0 - kf;
            if denom <= 0.0 {
                f64::INFINITY
            } else {
                (1.0 + kf / denom).sqrt()
            }
        }
    }
}

impl CliqueCertificate {
    /// Independent check: indices distinct and in range, every pair has
    /// the claimed strict sign, negative cliques have k ≤ n, and the bound
    /// matches the formula.
    pub fn verify(&self, g: &GramMatrix) -> bool {
        if g.n() != self.n || self.indices.len() != self.k || self.k == 0 {
            return false;
        }
        let mut seen = vec![false; self.n];
        for &i in &self.indices {
            if i >= self.n || seen[i] {
                return false;
            }
            seen[i] = true;
        }
        let want = match self.sign {
            CliqueSign::Positive => EdgeColor::Positive,
            CliqueSign::Negative => EdgeColor::Negative,
        };
        for (a, &i) in self.indices.iter().enumerate() {
            for &j in &self.indices[a + 1..] {
                if EdgeColor::of(g.get(i, j)) != want {
                    return false;
                }
            }
        }
        if self.sign == CliqueSign::Negative && self.k > self.n {
            return false;
        }
        self.bound == clique_bound(self.n, self.k, self.sign)
    }
}

/// Exact search is used up to this many vertices.
pub const EXACT_CLIQUE_LIMIT: usize = 20;

type Adjacency = Vec<Vec<bool>>;

fn color_graph(col: &SignColoring, color: EdgeColor) -> Adjacency {
    let n = col.n();
    (0..n)
        .map(|i| (0..n).map(|j| i != j && col.color(i, j) == color).collect())
        .collect()
}

/// Branch and bound over u32 vertex masks with a greedy-coloring bound.
fn max_clique_exact(adj: &Adjacency) -> Vec<usize> {
    let n = adj.len();
    assert!(n <= 32);
    let nbr: Vec<u32> = adj
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, &e)| e)
                .fold(0u32, |m, (j, _)| m | (1 << j))
        })
        .collect();

    fn color_bound(mut cand: u32, nbr: &[u32]) -> usize {
        let mut colors = 0;
        while cand != 0 {
            colors += 1;
            let mut avail = cand;
            while avail != 0 {
                let v = avail.trailing_zeros() as usize;
                avail &= !(1 << v);
                avail &= !nbr[v];
                cand &= !(1 << v);
            }
        }
        colors
    }

    fn expand(current: &mut Vec<usize>, mut cand: u32, nbr: &[u32], best: &mut Vec<usize>) {
        if cand == 0 {
            if current.len() > best.len() {
                *best = current.clone();
            }
            return;
        }
        while cand != 0 {
            if current.len() + color_bound(cand, nbr) <= best.len() {
                return;
            }
            let v = cand.trailing_zeros() as usize;
            current.push(v);
            expand(current, cand & nbr[v], nbr, best);
            current.pop();
            cand &= !(1 << v);
        }
    }

    let mut best = Vec::new();
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    expand(&mut Vec::new(), full, &nbr, &mut best);
    best
}

/// Greedy construction from every start vertex plus one-swap augmentation.
fn max_clique_greedy(adj: &Adjacency) -> Vec<usize> {
    let n = adj.len();
    let extend = |clique: &mut Vec<usize>| loop {
        let next = (0..n)
            .filter(|&v| !clique.contains(&v) && clique.iter().all(|&c| adj[v][c]))
            .max_by_key(|&v| {
                (
                    (0..n).filter(|&w| adj[v][w] && clique.iter().all(|&c| adj[w][c])).count(),
                    std::cmp::Reverse(v),
                )
            });
        match next {
            Some(v) => clique.push(v),
            None => break,
        }
    };
    let mut best: Vec<usize> = Vec::new();
    for start in 0..n {
        let mut clique = vec![start];
        extend(&mut clique);
        // one-swap: a vertex adjacent to all but one member replaces it
        let mut improved = true;
        let mut rounds = 0;
        while improved && rounds < n {
            improved = false;
            rounds += 1;
            'outer: for v in 0..n {
                if clique.contains(&v) {
                    continue;
                }
                let missing: Vec<usize> =
                    clique.iter().copied().filter(|&c| !adj[v][c]).collect();
                if missing.len() == 1 {
                    let mut trial: Vec<usize> =
                        clique.iter().copied().filter(|&c| c != missing[0]).collect();
                    trial.push(v);
                    extend(&mut trial);
                    if trial.len() > clique.len() {
                        clique = trial;
                        improved = true;
                        break 'outer;
                    }
                }
            }
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    best
}

pub fn max_clique(adj: &Adjacency) -> Vec<usize> {
    let mut c = if adj.len() <= EXACT_CLIQUE_LIMIT {
        max_clique_exact(adj)
    } else {
        max_clique_greedy(adj)
    };
    c.sort_unstable();
    c
}

/// Best verified clique certificate over both sign classes.
pub fn best_clique_certificate(a: &SignMatrix) -> CliqueCertificate {
    best_clique_certificate_for_gram(&a.gram())
}

pub fn best_clique_certificate_for_gram(g: &GramMatrix) -> CliqueCertificate {
    let n = g.n();
    let coloring = sign_coloring(g);
    let mut best = CliqueCertificate {
        n,
        k: 1,
        sign: CliqueSign::Positive,
        indices: vec![0],
        bound: 1.0,
    };
    for (color, sign) in [
        (EdgeColor::Positive, CliqueSign::Positive),
        (EdgeColor::Negative, CliqueSign::Negative),
    ] {
        if coloring.count(color) == 0 {
            continue;
        }
        let mut indices = max_clique(&color_graph(&coloring, color));
        if sign == CliqueSign::Negative {
            indices.truncate(n);
        }
        let k = indices.len();
        let cert = CliqueCertificate {
            n,
            k,
            sign,
            bound: clique_bound(n, k, sign),
            indices,
        };
        if cert.bound > best.bound && cert.verify(g) {
            best = cert;
        }
    }
    debug_assert!(best.verify(g));
    best
}

#[derive(Clone, Debug, Serialize)]
pub struct TripleReport {
    pub n: usize,
    /// n ≡ 0 (mod 4), where zero triangles are permitted.
    pub multiple_of_four: bool,
    /// Three pairwise orthogonal columns, if any.
    pub zero_triangle: Option<[usize; 3]>,
    /// False only if a zero triangle exists while 4 ∤ n.
    pub consistent: bool,
}

/// Searches for three pairwise orthogonal columns. Such a triple can only
/// exist when 4 | n.
pub fn check_orthogonal_triple_obstruction(a: &SignMatrix) -> TripleReport {
    let g = a.gram();
    let n = a.n();
    let mut zero_triangle = None;
    'search: for i in 0..n {
        for j in (i + 1)..n {
            if g.get(i, j) != 0 {
                continue;
            }
            for k in (j + 1)..n {
                if g.get(i, k) == 0 && g.get(j, k) == 0 {
                    zero_triangle = Some([i, j, k]);
                    break 'search;
                }
            }
        }
    }
    let multiple_of_four = n % 4 == 0;
    TripleReport {
        n,
        multiple_of_four,
        consistent: multiple_of_four || zero_triangle.is_none(),
        zero_triangle,
    }
}

/// Exhaustive search for three mutually orthogonal vectors in {±1}^n.
/// The first vector is fixed to all +1 (coordinate sign flips preserve
/// orthogonality); vectors are bitmasks with set bits meaning −1.
pub fn find_orthogonal_triple(n: usize) -> Option<[u32; 3]> {
    assert!((1..=24).contains(&n), "exhaustive triple search supports n ≤ 24");
    if n % 2 == 1 {
        return None;
    }
    let half = (n / 2) as u32;
    let balanced: Vec<u32> = (0u32..(1u32 << n))
        .filter(|m| m.count_ones() == half)
        .collect();
    for &v in &balanced {
        for &w in &balanced {
            if (v ^ w).count_ones() == half {
                return Some([0, v, w]);
            }
        }
    }
    None
}

/// Unconditional floor on κ(n) from a guaranteed monochromatic nonzero
/// edge: sqrt(1 + 2/(n−1)). Defined for n ≥ 3 with 4 ∤ n.
pub fn kappa_floor(n: usize) -> Result<f64> {
    if n % 4 == 0 || n < 3 {
        return Err(Error::Precondition(format!(
            "no unconditional floor above 1 for n = {n}"
        )));
    }
    Ok(clique_bound(n, 2, CliqueSign::Positive))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::sylvester;

    #[test]
    fn coloring_examples() {
        let h = sylvester(2).unwrap();
        let c = sign_coloring(&h.gram());
        assert_eq!(c.count(EdgeColor::Zero), 6);
        let barba = SignMatrix::circulant(&[1, 1, 1, 1, -1]).unwrap();
        let c = sign_coloring(&barba.gram());
        assert_eq!(c.count(EdgeColor::Positive), 10);
    }

    #[test]
    fn barba_five_certificate_is_tight() {
        let barba = SignMatrix::circulant(&[1, 1, 1, 1, -1]).unwrap();
        let cert = best_clique_certificate(&barba);
        assert_eq!((cert.k, cert.sign), (5, CliqueSign::Positive));
        assert!((cert.bound - 1.5).abs() < 1e-15);
        assert!(cert.verify(&barba.gram()));
    }

    #[test]
    fn hadamard_gives_vacuous_certificate() {
        let h = sylvester(3).unwrap();
        let cert = best_clique_certificate(&h);
        assert_eq!((cert.k, cert.bound), (1, 1.0));
        assert!(cert.verify(&h.gram()));
    }

    #[test]
    fn verify_rejects_tampering() {
        let barba = SignMatrix::circulant(&[1, 1, 1, 1, -1]).unwrap();
        let g = barba.gram();
        let mut cert = best_clique_certificate(&barba);
        cert.bound += 0.1;
        assert!(!cert.verify(&g));
        let mut cert = best_clique_certificate(&barba);
        cert.sign = CliqueSign::Negative;
        cert.bound = clique_bound(5, 5, CliqueSign::Negative);
        assert!(!cert.verify(&g));
        let mut cert = best_clique_certificate(&barba);
        cert.indices[1] = cert.indices[0];
        assert!(!cert.verify(&g));
    }

    #[test]
    fn exact_and_greedy_agree_on_small_graphs() {
        // Complement of a 5-cycle plus a triangle pendant.
        let n = 8;
        let edges = [(0, 2), (0, 3), (1, 3), (1, 4), (2, 4), (5, 6), (6, 7), (5, 7), (4, 5)];
        let mut adj = vec![vec![false; n]; n];
        for &(a, b) in &edges {
            adj[a][b] = true;
            adj[b][a] = true;
        }
        assert_eq!(max_clique_exact(&adj).len(), 3);
        assert_eq!(max_clique_greedy(&adj).len(), 3);
    }

    #[test]
    fn triple_obstruction() {
        let h = sylvester(2).unwrap();
        let r = check_orthogonal_triple_obstruction(&h);
        assert!(r.zero_triangle.is_some() && r.consistent);
        let odd = SignMatrix::circulant(&[1, 1, 1, 1, -1]).unwrap();
        let r = check_orthogonal_triple_obstruction(&odd);
        assert!(r.zero_triangle.is_none() && r.consistent);
    }

    #[test]
    fn kappa_floor_examples() {
        assert!((kappa_floor(3).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!((kappa_floor(5).unwrap() - 1.5f64.sqrt()).abs() < 1e-15);
        assert!(kappa_floor(5).unwrap() <= 1.5);
        assert!(kappa_floor(4).is_err());
        assert!(kappa_floor(2).is_err());
    }

    #[test]
    fn negative_clique_formula() {
        assert!((clique_bound(5, 3, CliqueSign::Negative) - (1.0f64 + 1.0).sqrt()).abs() < 1e-15);
        assert_eq!(clique_bound(5, 1, CliqueSign::Negative), 1.0);
        assert!(clique_bound(3, 4, CliqueSign::Negative).is_infinite());
    }
}
