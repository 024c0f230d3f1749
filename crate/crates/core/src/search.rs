//! Constrained-alphabet searches and parameter scans.
//!
//! Rows are encoded as index vectors into an [`Alphabet`]. A CHM is a set of
//! six pairwise-orthogonal rows, so searches enumerate cliques in the
//! row-orthogonality graph.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{self, karlsson, HFamilyParams, KarlssonParams};
use crate::equivalence::{are_equivalent, match_h_family};
use crate::error::{ChmError, Result};
use crate::json::{MatrixDoc, ScalarDoc};
use crate::matrix::{CMatrix, N};
use crate::monomial::EquivalenceWitness;
use crate::report::{Classification, HitDetails, SearchReport};
use crate::scalar::{format_turns, Real, Turns, UnitScalar};
use crate::substructure::{find_h3_blocks, is_h2_reducible};
use crate::tolerance::ToleranceConfig;

/// Distinct unimodular values, one of which is 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Alphabet<T> {
    elements: Vec<UnitScalar<T>>,
}

impl<T: Real> Alphabet<T> {
    pub fn new(elements: Vec<UnitScalar<T>>, tol: &ToleranceConfig<T>) -> Result<Self> {
        if !(2..=6).contains(&elements.len()) {
            return Err(ChmError::Domain(format!("alphabet needs 2 to 6 elements, got {}", elements.len())));
        }
        for (k, e) in elements.iter().enumerate() {
            if e.modulus_defect() > tol.eps_unit {
                return Err(ChmError::Domain(format!("alphabet element {k} is not unimodular")));
            }
            if elements[..k].iter().any(|f| f.approx_eq(e, tol.eps_eq)) {
                return Err(ChmError::Domain(format!("alphabet element {k} repeats an earlier one")));
            }
        }
        if !elements.iter().any(|e| e.approx_eq(&UnitScalar::one(), tol.eps_eq)) {
            return Err(ChmError::Domain("alphabet must contain 1".into()));
        }
        Ok(Self { elements })
    }

    pub fn elements(&self) -> &[UnitScalar<T>] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    fn one_index(&self) -> usize {
        self.elements.iter().position(|e| e.approx_eq(&UnitScalar::one(), T::lit(1e-6))).expect("validated")
    }
}

/// Which rows are admissible.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchSpace {
    /// First row and column all ones; only rows 2..6 are searched.
    Dephased,
    /// Every row over the alphabet; the whole matrix is searched.
    Unnormalized,
}

pub type RowCode = [usize; N];

struct Orthogonality<T> {
    /// `products[p][q] = a_p · conj(a_q)`.
    products: Vec<Vec<num_complex::Complex<T>>>,
    eps: T,
}

impl<T: Real> Orthogonality<T> {
    fn new(a: &Alphabet<T>, tol: &ToleranceConfig<T>) -> Self {
        let e = a.elements();
        let products = e.iter().map(|x| e.iter().map(|y| (*x * y.conj()).to_complex()).collect()).collect();
        Self { products, eps: tol.eps_orth }
    }

    fn orthogonal(&self, x: &RowCode, y: &RowCode) -> bool {
        let s = x.iter().zip(y).fold(num_complex::Complex::new(T::zero(), T::zero()), |acc, (&p, &q)| acc + self.products[p][q]);
        s.norm() < self.eps
    }
}

fn all_codes(len: usize) -> impl Iterator<Item = RowCode> {
    let total = len.pow(N as u32);
    (0..total).map(move |mut c| {
        let mut row = [0; N];
        for slot in row.iter_mut().rev() {
            *slot = c % len;
            c /= len;
        }
        row
    })
}

/// Candidate rows in lexicographic code order.
///
/// Dephased rows start with 1 and are orthogonal to the all-ones row; the
/// unnormalised space is every row over the alphabet.
pub fn candidate_rows<T: Real>(a: &Alphabet<T>, space: SearchSpace, tol: &ToleranceConfig<T>) -> Vec<RowCode> {
    let one = a.one_index();
    match space {
        SearchSpace::Unnormalized => all_codes(a.len()).collect(),
        SearchSpace::Dephased => {
            let ortho = Orthogonality::new(a, tol);
            let ones = [one; N];
            all_codes(a.len()).filter(|r| r[0] == one && ortho.orthogonal(r, &ones)).collect()
        }
    }
}

struct Graph {
    words: usize,
    adj: Vec<Vec<u64>>,
}

impl Graph {
    fn new(n: usize, mut edge: impl FnMut(usize, usize) -> bool) -> Self {
        let words = n.div_ceil(64);
        let mut adj = vec![vec![0u64; words]; n];
        for u in 0..n {
            for v in u + 1..n {
                if edge(u, v) {
                    adj[u][v / 64] |= 1 << (v % 64);
                    adj[v][u / 64] |= 1 << (u % 64);
                }
            }
        }
        Self { words, adj }
    }

    fn degree(&self, v: usize) -> u32 {
        self.adj[v].iter().map(|w| w.count_ones()).sum()
    }

    /// Every `k`-clique, each reported once as an increasing vertex list.
    fn cliques(&self, k: usize) -> Vec<Vec<usize>> {
        let n = self.adj.len();
        // Vertices are expanded in ascending degree so sparse ones close early.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (self.degree(v), v));
        let mut rank = vec![0; n];
        for (r, &v) in order.iter().enumerate() {
            rank[v] = r;
        }
        let mut later = vec![vec![0u64; self.words]; n];
        for &v in &order {
            for u in 0..n {
                if rank[u] > rank[v] && self.adj[v][u / 64] >> (u % 64) & 1 == 1 {
                    later[v][u / 64] |= 1 << (u % 64);
                }
            }
        }
        let mut out = Vec::new();
        let mut stack = Vec::with_capacity(k);
        for &v in &order {
            stack.push(v);
            self.extend(&later, &later[v].clone(), k, &mut stack, &mut out);
            stack.pop();
        }
        for c in &mut out {
            c.sort_unstable();
        }
        out.sort();
        out
    }

    fn extend(&self, later: &[Vec<u64>], cand: &[u64], k: usize, stack: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if stack.len() == k {
            out.push(stack.clone());
            return;
        }
        let available: u32 = cand.iter().map(|w| w.count_ones()).sum();
        if stack.len() + (available as usize) < k {
            return;
        }
        for (wi, &word) in cand.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let v = wi * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let next: Vec<u64> = cand.iter().zip(&later[v]).map(|(a, b)| a & b).collect();
                stack.push(v);
                self.extend(later, &next, k, stack, out);
                stack.pop();
            }
        }
    }
}

/// All CHMs over the alphabet in the given search space, one per set of
/// rows. Rows are sorted by code; in the dephased space the all-ones row is
/// prepended.
pub fn find_chm_cliques_in<T: Real>(a: &Alphabet<T>, space: SearchSpace, tol: &ToleranceConfig<T>) -> Vec<CMatrix<T>> {
    let rows = candidate_rows(a, space, tol);
    let ortho = Orthogonality::new(a, tol);
    let graph = Graph::new(rows.len(), |u, v| ortho.orthogonal(&rows[u], &rows[v]));
    let (k, lead) = match space {
        SearchSpace::Dephased => (N - 1, Some([a.one_index(); N])),
        SearchSpace::Unnormalized => (N, None),
    };
    let e = a.elements();
    graph
        .cliques(k)
        .into_iter()
        .map(|clique| {
            let codes: Vec<RowCode> = lead.into_iter().chain(clique.iter().map(|&v| rows[v])).collect();
            CMatrix::from_fn(|i, j| e[codes[i][j]])
        })
        .filter(|m| m.is_chm(tol))
        .collect()
}

/// Dephased CHMs over the alphabet.
pub fn find_chm_cliques<T: Real>(a: &Alphabet<T>, tol: &ToleranceConfig<T>) -> Vec<CMatrix<T>> {
    find_chm_cliques_in(a, SearchSpace::Dephased, tol)
}

/// Minimal code matrix over all column permutations with rows sorted.
fn permutation_canonical(codes: &[RowCode; N]) -> [RowCode; N] {
    let mut best: Option<[RowCode; N]> = None;
    let mut perm = [0, 1, 2, 3, 4, 5];
    loop {
        let mut cand = codes.map(|r| perm.map(|c| r[c]));
        cand.sort_unstable();
        if best.is_none_or(|b| cand < b) {
            best = Some(cand);
        }
        let Some(i) = (0..N - 1).rev().find(|&i| perm[i] < perm[i + 1]) else { break };
        let j = (i + 1..N).rev().find(|&j| perm[j] > perm[i]).expect("successor exists");
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    best.expect("nonempty")
}

/// Keeps one matrix per row-and-column permutation class, in first-seen order.
pub fn dedup_permutations<T: Real>(a: &Alphabet<T>, matrices: Vec<CMatrix<T>>, tol: &ToleranceConfig<T>) -> Vec<CMatrix<T>> {
    let mut seen = std::collections::BTreeSet::new();
    let e = a.elements();
    matrices
        .into_iter()
        .filter(|m| {
            let codes = m.rows().map(|r| r.map(|x| e.iter().position(|y| y.approx_eq(&x, tol.eps_eq)).unwrap_or(usize::MAX)));
            seen.insert(permutation_canonical(&codes))
        })
        .collect()
}

fn scalar_label<T: Real>(x: &UnitScalar<T>) -> String {
    match x.exact_phase() {
        Some(t) => format!("{} turns", format_turns(t)),
        None => format!("{:.9} turns", x.phase().to_f64().unwrap_or(f64::NAN) / std::f64::consts::TAU),
    }
}

/// Classifies a CHM against M2, Tao and the H(α, β) family, in that order.
pub fn classify_against_catalog<T: Real>(m: &CMatrix<T>, tol: &ToleranceConfig<T>) -> Result<Classification> {
    if are_equivalent(m, &catalog::m2(), tol)?.is_some() {
        return Ok(Classification::EquivM2);
    }
    if are_equivalent(m, &catalog::tao(), tol)?.is_some() {
        return Ok(Classification::EquivTao);
    }
    if let Some((p, _)) = match_h_family(m, tol)? {
        return Ok(Classification::HFamilyMember { alpha: (&p.alpha).into(), beta: (&p.beta).into() });
    }
    Ok(Classification::Unclassified)
}

const SPACE_NOTE: &str = "unnormalized search space: every row over the alphabet, deduplicated up to row and column permutations";

fn scan_alphabet<T: Real>(
    elements: Vec<UnitScalar<T>>,
    free: UnitScalar<T>,
    require_all: bool,
    tol: &ToleranceConfig<T>,
) -> Result<SearchReport> {
    let a = Alphabet::new(elements, tol)?;
    let hits = find_chm_cliques_in(&a, SearchSpace::Unnormalized, tol);
    let hits: Vec<CMatrix<T>> = if require_all {
        hits.into_iter().filter(|m| m.distinct_elements(tol).len() == a.len()).collect()
    } else {
        hits
    };
    let hits = dedup_permutations(&a, hits, tol);
    let mut report = SearchReport::new(format!("x = {}", scalar_label(&free)));
    report.notes.push(SPACE_NOTE.into());
    for m in hits {
        let class = classify_against_catalog(&m, tol)?;
        let counts = m.rows().map(|r| r.iter().filter(|e| e.approx_eq(&free, tol.eps_eq)).count());
        let parity = counts.iter().all(|c| c % 2 == 1) || class == Classification::EquivM2;
        let details =
            HitDetails { h2_reducible: is_h2_reducible(&m, tol), free_element_counts: Some(counts), parity_dichotomy: Some(parity) };
        report.push(MatrixDoc::from(&m), class, details);
    }
    Ok(report)
}

/// One report per sample `s`, searching CHMs with entries in `{1, s}`.
pub fn scan_two_element<T: Real>(samples: &[UnitScalar<T>], tol: &ToleranceConfig<T>) -> Result<Vec<SearchReport>> {
    samples.par_iter().map(|s| scan_alphabet(vec![UnitScalar::one(), *s], *s, false, tol)).collect()
}

/// One report per sample `x`, searching CHMs with entries in `{1, −1, x}`
/// that use all three values.
pub fn scan_three_element<T: Real>(samples: &[UnitScalar<T>], tol: &ToleranceConfig<T>) -> Result<Vec<SearchReport>> {
    samples
        .par_iter()
        .map(|x| scan_alphabet(vec![UnitScalar::one(), UnitScalar::minus_one(), *x], *x, true, tol))
        .collect()
}

/// `n` points at odd multiples of `1/(2n)` turns.
pub fn two_element_samples<T: Real>(n: usize) -> Vec<UnitScalar<T>> {
    (0..n).map(|k| UnitScalar::from_turns(Turns::new(2 * k as i64 + 1, 2 * n as i64))).collect()
}

/// `n` points at odd multiples of `1/(2n)` turns, then `i` and `−i`.
pub fn three_element_samples<T: Real>(n: usize) -> Vec<UnitScalar<T>> {
    let mut out = two_element_samples(n);
    out.push(UnitScalar::i());
    out.push(-UnitScalar::i());
    out
}

const MAX_REDRAWS: usize = 64;

/// Draws `(θ, φ, z₁, signs)` per sample from a seeded generator and
/// completes the remaining `z` values.
pub fn karlsson_samples<T: Real>(thetas: &[T], phis: &[T], z_draws: usize, seed: u64) -> Result<Vec<KarlssonParams<T>>> {
    let pi = T::PI();
    for v in thetas.iter().chain(phis) {
        if !(*v >= T::zero() && *v < pi) {
            return Err(ChmError::Domain(format!("angle {v} is outside [0, π)")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(thetas.len() * phis.len() * z_draws);
    for &theta in thetas {
        for &phi in phis {
            for _ in 0..z_draws {
                let mut drawn = None;
                for _ in 0..MAX_REDRAWS {
                    let z1 = UnitScalar::from_angle(T::lit(rng.random_range(0.0..std::f64::consts::TAU)));
                    let signs = [rng.random_bool(0.5), rng.random_bool(0.5), rng.random_bool(0.5)];
                    if let Ok(p) = KarlssonParams::complete(theta, phi, z1, signs) {
                        drawn = Some(p);
                        break;
                    }
                }
                out.push(drawn.ok_or_else(|| {
                    ChmError::Domain(format!("no non-degenerate z draw at θ = {theta}, φ = {phi}"))
                })?);
            }
        }
    }
    Ok(out)
}

type Listed<T> = (CMatrix<T>, Classification, HitDetails);

/// Builds every Karlsson sample, checks it is a CHM, and checks that any
/// sample with exactly three distinct entries is equivalent to M2.
///
/// Only failures and three-element samples are listed in the report.
pub fn karlsson_grid_scan<T: Real>(
    thetas: &[T],
    phis: &[T],
    z_draws: usize,
    seed: u64,
    tol: &ToleranceConfig<T>,
) -> Result<SearchReport> {
    let params = karlsson_samples(thetas, phis, z_draws, seed)?;
    let outcomes: Vec<Result<Option<Listed<T>>>> = params
        .par_iter()
        .map(|p| {
            let m = karlsson(p, tol)?;
            let details = HitDetails { h2_reducible: is_h2_reducible(&m, tol), ..HitDetails::default() };
            if !m.is_chm(tol) {
                return Ok(Some((m, Classification::Unclassified, details)));
            }
            if m.distinct_elements(tol).len() != 3 {
                return Ok(None);
            }
            let class = match are_equivalent(&m, &catalog::m2(), tol)? {
                Some(_) => Classification::EquivM2,
                None => Classification::Unclassified,
            };
            Ok(Some((m, class, details)))
        })
        .collect();
    let mut report = SearchReport::new(format!(
        "karlsson grid {}x{} with {} z draws",
        thetas.len(),
        phis.len(),
        z_draws
    ));
    report.samples = params.len();
    report.seed = Some(seed);
    let mut not_chm = 0;
    for outcome in outcomes {
        if let Some((m, class, details)) = outcome? {
            if !m.is_chm(tol) {
                not_chm += 1;
            }
            report.push(MatrixDoc::from(&m), class, details);
        }
    }
    report.notes.push(format!("samples failing the CHM check: {not_chm}"));
    report.notes.push(format!("three-element samples: {}", report.matrices_found.len() - not_chm));
    Ok(report)
}

/// Outcome of classifying a CHM that may contain a 3x3 Hadamard block.
#[derive(Clone, Debug)]
pub enum H3Class<T> {
    NoH3Block,
    /// `witness` maps the input onto `tao()`.
    EquivTao { witness: EquivalenceWitness<T> },
    /// `witness` maps the input onto `h_family(params)`.
    HFamilyMember { params: HFamilyParams<T>, witness: EquivalenceWitness<T> },
}

/// A CHM with a 3x3 Hadamard block is equivalent to Tao or to some
/// `H(α, β)`; failing both is reported as a counterexample.
pub fn classify_h3<T: Real>(m: &CMatrix<T>, tol: &ToleranceConfig<T>) -> Result<H3Class<T>> {
    m.ensure_chm(tol)?;
    if find_h3_blocks(m, tol).is_empty() {
        return Ok(H3Class::NoH3Block);
    }
    if let Some((params, witness)) = match_h_family(m, tol)? {
        return Ok(H3Class::HFamilyMember { params, witness });
    }
    if let Some(witness) = are_equivalent(m, &catalog::tao(), tol)? {
        return Ok(H3Class::EquivTao { witness });
    }
    Err(ChmError::Counterexample("matrix has a 3x3 Hadamard block but is neither Tao nor in H(α, β)".into()))
}

impl<T: Real> H3Class<T> {
    pub fn classification(&self) -> Option<Classification> {
        match self {
            H3Class::NoH3Block => None,
            H3Class::EquivTao { .. } => Some(Classification::EquivTao),
            H3Class::HFamilyMember { params, .. } => Some(Classification::HFamilyMember {
                alpha: ScalarDoc::from(&params.alpha),
                beta: ScalarDoc::from(&params.beta),
            }),
        }
    }
}
