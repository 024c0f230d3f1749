//! Complex equivalence `N = P·M·Q` with `P, Q` monomial unitaries.
//!
//! Both deciders rest on one fact: once a pivot row `r` and column `c` are
//! chosen, the matrix dephased at `(r, c)` is unique, so equivalence reduces
//! to matching dephased matrices up to row and column permutations.

use std::cmp::Ordering;

use crate::catalog::{h_family, HFamilyParams};
use crate::error::{ChmError, Result};
use crate::identities::{chord3_class, ChordClass};
use crate::matrix::{CMatrix, HaagerupSet, N};
use crate::scalar::{Real, UnitScalar};
use crate::substructure::find_rank1_2x3;
use crate::tolerance::ToleranceConfig;

pub use crate::monomial::{EquivalenceWitness, MonomialUnitary};

const M: usize = N - 1;

/// Tolerant order on entries: equal within `eps`, else by phase.
fn entry_cmp<T: Real>(a: &(UnitScalar<T>, T), b: &(UnitScalar<T>, T), eps: T) -> Ordering {
    if a.0.approx_eq(&b.0, eps) {
        Ordering::Equal
    } else {
        a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal).then(a.0.re().partial_cmp(&b.0.re()).unwrap_or(Ordering::Equal))
    }
}

fn row_cmp<T: Real>(a: &[(UnitScalar<T>, T)], b: &[(UnitScalar<T>, T)], eps: T) -> Ordering {
    a.iter().zip(b).map(|(x, y)| entry_cmp(x, y, eps)).find(|o| *o != Ordering::Equal).unwrap_or(Ordering::Equal)
}

fn others(skip: usize) -> [usize; M] {
    let mut out = [0; M];
    let mut k = 0;
    for i in 0..N {
        if i != skip {
            out[k] = i;
            k += 1;
        }
    }
    out
}

/// Calls `f` on every permutation of `0..M` in lexicographic order.
fn for_each_permutation(mut f: impl FnMut(&[usize; M])) {
    let mut p = [0, 1, 2, 3, 4];
    loop {
        f(&p);
        // next lexicographic permutation
        let Some(i) = (0..M - 1).rev().find(|&i| p[i] < p[i + 1]) else { return };
        let j = (i + 1..M).rev().find(|&j| p[j] > p[i]).expect("successor exists");
        p.swap(i, j);
        p[i + 1..].reverse();
    }
}

type Block<T> = [[(UnitScalar<T>, T); M]; M];

/// A canonical representative of the equivalence class of `m`.
///
/// Over all 36 pivots, the matrix is dephased at the pivot and the remaining
/// 5x5 block is minimised lexicographically (phase order, rows then columns)
/// over column permutations; for each column order the minimal row order is
/// the sorted one.
pub fn canonical_form<T: Real>(m: &CMatrix<T>, tol: &ToleranceConfig<T>) -> Result<CMatrix<T>> {
    m.ensure_chm(tol)?;
    let eps = tol.eps_eq;
    let mut best: Option<Block<T>> = None;
    for r in 0..N {
        for c in 0..N {
            let d = m.dephase_at(r, c);
            let (rows, cols) = (others(r), others(c));
            let mut base: Block<T> = [[(UnitScalar::one(), T::zero()); M]; M];
            for (i, &ri) in rows.iter().enumerate() {
                for (j, &cj) in cols.iter().enumerate() {
                    let v = d.get(ri, cj);
                    base[i][j] = (v, v.phase_with_snap(eps));
                }
            }
            for_each_permutation(|perm| {
                let mut cand: Block<T> = base.map(|row| perm.map(|k| row[k]));
                // insertion sort keeps the tolerant comparator safe
                for i in 1..M {
                    let mut k = i;
                    while k > 0 && row_cmp(&cand[k], &cand[k - 1], eps) == Ordering::Less {
                        cand.swap(k, k - 1);
                        k -= 1;
                    }
                }
                let better = match &best {
                    None => true,
                    Some(b) => cand.iter().zip(b).map(|(x, y)| row_cmp(x, y, eps)).find(|o| *o != Ordering::Equal)
                        == Some(Ordering::Less),
                };
                if better {
                    best = Some(cand);
                }
            });
        }
    }
    let best = best.expect("at least one pivot");
    Ok(CMatrix::from_fn(|i, j| if i == 0 || j == 0 { UnitScalar::one() } else { best[i - 1][j - 1].0 }))
}

/// Greedy multiset match; exact when classes are separated by more than `2·eps`.
fn multiset_match<T: Real>(a: &[UnitScalar<T>], b: &[UnitScalar<T>], eps: T) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    a.iter().all(|x| match (0..b.len()).find(|&k| !used[k] && b[k].approx_eq(x, eps)) {
        Some(k) => {
            used[k] = true;
            true
        }
        None => false,
    })
}

struct Profiles<T> {
    rows: Vec<HaagerupSet<T>>,
    cols: Vec<HaagerupSet<T>>,
}

impl<T: Real> Profiles<T> {
    fn of(m: &CMatrix<T>) -> Self {
        let t = m.transpose();
        Self { rows: (0..N).map(|i| m.row_profile(i)).collect(), cols: (0..N).map(|j| t.row_profile(j)).collect() }
    }
}

/// Decides whether `n = left · m · right` for monomial unitaries and returns
/// a verified witness.
///
/// Haagerup multisets are compared first. On a match, every compatible pivot
/// `(r, c)` of `m` is paired with `(0, 0)` of `n`; column assignments are
/// explored depth-first with per-column multiset pruning, and rows are then
/// matched directly.
pub fn are_equivalent<T: Real>(
    m: &CMatrix<T>,
    n: &CMatrix<T>,
    tol: &ToleranceConfig<T>,
) -> Result<Option<EquivalenceWitness<T>>> {
    m.ensure_chm(tol)?;
    n.ensure_chm(tol)?;
    let eps = tol.eps_eq;
    if !m.haagerup_multiset().matches(&n.haagerup_multiset(), eps) {
        return Ok(None);
    }
    let (pm, pn) = (Profiles::of(m), Profiles::of(n));
    let row_ok: Vec<Vec<bool>> = (0..N).map(|i| (0..N).map(|k| pn.rows[i].matches(&pm.rows[k], eps)).collect()).collect();
    let col_ok: Vec<Vec<bool>> = (0..N).map(|j| (0..N).map(|k| pn.cols[j].matches(&pm.cols[k], eps)).collect()).collect();
    let nd = n.dephase_at(0, 0);
    let n_cols: Vec<Vec<UnitScalar<T>>> = (0..N).map(|j| (1..N).map(|i| nd.get(i, j)).collect()).collect();

    for r in (0..N).filter(|&r| row_ok[0][r]) {
        for c in (0..N).filter(|&c| col_ok[0][c]) {
            let md = m.dephase_at(r, c);
            let fits: Vec<Vec<bool>> = (0..N)
                .map(|j| {
                    (0..N)
                        .map(|k| {
                            if j == 0 || k == c || !col_ok[j][k] {
                                return false;
                            }
                            let col: Vec<UnitScalar<T>> = (0..N).filter(|&i| i != r).map(|i| md.get(i, k)).collect();
                            multiset_match(&n_cols[j], &col, eps)
                        })
                        .collect()
                })
                .collect();
            let mut search = ColumnSearch { md: &md, nd: &nd, fits: &fits, row_ok: &row_ok, r, eps, tau: [c; N], used: [false; N] };
            search.used[c] = true;
            if let Some((sigma, tau)) = search.run(1) {
                let w = EquivalenceWitness::from_index_maps(m, n, sigma, tau)?;
                if w.verifies(m, n, tol.witness_eps()) {
                    return Ok(Some(w));
                }
            }
        }
    }
    Ok(None)
}

struct ColumnSearch<'a, T> {
    md: &'a CMatrix<T>,
    nd: &'a CMatrix<T>,
    fits: &'a [Vec<bool>],
    row_ok: &'a [Vec<bool>],
    r: usize,
    eps: T,
    tau: [usize; N],
    used: [bool; N],
}

impl<T: Real> ColumnSearch<'_, T> {
    fn run(&mut self, j: usize) -> Option<([usize; N], [usize; N])> {
        if j == N {
            return self.match_rows().map(|sigma| (sigma, self.tau));
        }
        for k in 0..N {
            if self.used[k] || !self.fits[j][k] {
                continue;
            }
            self.used[k] = true;
            self.tau[j] = k;
            let found = self.run(j + 1);
            self.used[k] = false;
            if found.is_some() {
                return found;
            }
        }
        None
    }

    fn match_rows(&self) -> Option<[usize; N]> {
        let mut sigma = [self.r; N];
        let mut taken = [false; N];
        taken[self.r] = true;
        for i in 1..N {
            let k = (0..N).find(|&k| {
                !taken[k]
                    && self.row_ok[i][k]
                    && (1..N).all(|j| self.md.get(k, self.tau[j]).approx_eq(&self.nd.get(i, j), self.eps))
            })?;
            taken[k] = true;
            sigma[i] = k;
        }
        Some(sigma)
    }
}

/// Rebuilds the `H(α, β)` form from a rank-one 2x3 block.
///
/// The block is moved to rows 0–1, columns 0–2 and the matrix dephased. Row 1
/// then reads `(1, 1, 1, −1, −1, −1)`, every other row starts
/// `(1, ω, ω²)` or `(1, ω², ω)` (two of each), and the tails are
/// `α·(1, ω, ω²)` on the first kind and `β·(1, ω², ω)` on the second after
/// at most one swap of columns 4 and 5.
pub fn match_h_family<T: Real>(
    m: &CMatrix<T>,
    tol: &ToleranceConfig<T>,
) -> Result<Option<(HFamilyParams<T>, EquivalenceWitness<T>)>> {
    m.ensure_chm(tol)?;
    let Some(block) = find_rank1_2x3(m, tol).into_iter().next() else {
        return Ok(None);
    };
    let order = |lead: &[usize]| {
        let mut out = [0; N];
        let rest = (0..N).filter(|i| !lead.contains(i));
        for (slot, v) in out.iter_mut().zip(lead.iter().copied().chain(rest)) {
            *slot = v;
        }
        out
    };
    let (rows0, cols0) = (order(&block.rows), order(&block.cols));
    let x = m.permuted(&rows0, &cols0).dephase().matrix;
    let eps = tol.witness_eps();
    let (one, w) = (UnitScalar::<T>::one(), UnitScalar::<T>::omega());
    let inconsistent = |what: &str| ChmError::Inconsistency(format!("H(α,β) reconstruction: {what}"));

    for j in 0..N {
        let expect = if j < 3 { one } else { -one };
        if !x.get(1, j).approx_eq(&expect, eps) {
            return Err(inconsistent("row 1 is not (1, 1, 1, -1, -1, -1)"));
        }
    }
    let (mut first, mut second) = (Vec::new(), Vec::new());
    for i in 2..N {
        let (a1, a2) = (x.get(i, 1), x.get(i, 2));
        if a1.approx_eq(&w, eps) && a2.approx_eq(&(w * w), eps) {
            first.push(i);
        } else if a1.approx_eq(&(w * w), eps) && a2.approx_eq(&w, eps) {
            second.push(i);
        } else {
            return Err(inconsistent("a row head is not a cube-root chord"));
        }
    }
    if first.len() != 2 || second.len() != 2 {
        return Err(inconsistent("row heads are not split two and two"));
    }
    let lead = first[0];
    let swap = match chord3_class(x.get(lead, 3), x.get(lead, 4), x.get(lead, 5), tol)? {
        ChordClass::OmegaOrder { .. } => false,
        ChordClass::OmegaBarOrder { .. } => true,
        ChordClass::NonZeroSum => return Err(inconsistent("row tail does not vanish")),
    };
    let x_rows = [0, 1, first[0], first[1], second[0], second[1]];
    let x_cols = if swap { [0, 1, 2, 3, 5, 4] } else { [0, 1, 2, 3, 4, 5] };
    let y = x.permuted(&x_rows, &x_cols);
    let params = HFamilyParams::new(y.get(2, 3), y.get(4, 3));
    let target = h_family(&params, tol)?;
    if !y.approx_eq(&target, eps) {
        return Err(inconsistent("dephased matrix does not have the family shape"));
    }
    let rows = x_rows.map(|i| rows0[i]);
    let cols = x_cols.map(|j| cols0[j]);
    let witness = EquivalenceWitness::from_index_maps(m, &target, rows, cols)?;
    if !witness.verifies(m, &target, eps) {
        return Err(inconsistent("witness does not verify"));
    }
    Ok(Some((params, witness)))
}
