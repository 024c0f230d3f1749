//! Detectors for 2x2 and 3x3 Hadamard blocks and rank-one 2x3 blocks.
//!
//! All detectors work from the pairwise row products
//! `p[c] = M[r1][c] · conj(M[r2][c])`: two rows are orthogonal on a column set
//! when the products sum to zero there, and the rows are proportional on a
//! column set when the products agree there.

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::matrix::{CMatrix, N};
use crate::scalar::{Real, UnitScalar};
use crate::tolerance::ToleranceConfig;

/// Zero-based row and column indices of a submatrix, each strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BlockLocation {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl BlockLocation {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Self {
        Self { rows, cols }
    }
}

pub(crate) fn pairs() -> impl Iterator<Item = [usize; 2]> {
    (0..N).flat_map(|a| (a + 1..N).map(move |b| [a, b]))
}

pub(crate) fn triples() -> impl Iterator<Item = [usize; 3]> {
    (0..N).flat_map(|a| (a + 1..N).flat_map(move |b| (b + 1..N).map(move |c| [a, b, c])))
}

fn row_products<T: Real>(m: &CMatrix<T>, r1: usize, r2: usize) -> [UnitScalar<T>; N] {
    let mut p = [UnitScalar::one(); N];
    for (c, slot) in p.iter_mut().enumerate() {
        *slot = m.get(r1, c) * m.get(r2, c).conj();
    }
    p
}

fn sum_at<T: Real>(p: &[UnitScalar<T>; N], cols: &[usize]) -> Complex<T> {
    cols.iter().fold(Complex::zero(), |acc, &c| acc + p[c].to_complex())
}

/// Bitmask over the 20 column triples on which rows `r1, r2` are orthogonal.
fn orthogonal_triple_mask<T: Real>(m: &CMatrix<T>, r1: usize, r2: usize, tol: &ToleranceConfig<T>) -> u32 {
    let p = row_products(m, r1, r2);
    triples()
        .enumerate()
        .filter(|(_, cols)| sum_at(&p, cols).norm() < tol.eps_orth)
        .fold(0u32, |mask, (k, _)| mask | (1 << k))
}

/// Every `(2 rows, 2 cols)` block whose rows are orthogonal, in
/// lexicographic order.
pub fn find_h2_blocks<T: Real>(m: &CMatrix<T>, tol: &ToleranceConfig<T>) -> Vec<BlockLocation> {
    let mut out = Vec::new();
    for rows in pairs() {
        let p = row_products(m, rows[0], rows[1]);
        // Two unimodular products cancel only if one is the negative of the other.
        for cols in pairs() {
            if sum_at(&p, &cols).norm() < tol.eps_orth {
                out.push(BlockLocation::new(rows.to_vec(), cols.to_vec()));
            }
        }
    }
    out
}

pub fn is_h2_reducible<T: Real>(m: &CMatrix<T>, tol: &ToleranceConfig<T>) -> bool {
    pairs().any(|rows| {
        let p = row_products(m, rows[0], rows[1]);
        pairs().any(|cols| sum_at(&p, &cols).norm() < tol.eps_orth)
    })
}

/// Every `(3 rows, 3 cols)` block `S` with `S·S† = 3·I`.
///
/// Column triples are intersected across the three row pairs, so a row
/// triple costs three mask lookups.
pub fn find_h3_blocks<T: Real>(m: &CMatrix<T>, tol: &ToleranceConfig<T>) -> Vec<BlockLocation> {
    let mut masks = [[0u32; N]; N];
    for [a, b] in pairs() {
        masks[a][b] = orthogonal_triple_mask(m, a, b, tol);
    }
    let col_triples: Vec<[usize; 3]> = triples().collect();
    let mut out = Vec::new();
    for [a, b, c] in triples() {
        let mask = masks[a][b] & masks[a][c] & masks[b][c];
        if mask == 0 {
            continue;
        }
        for (k, cols) in col_triples.iter().enumerate() {
            if mask & (1 << k) != 0 {
                out.push(BlockLocation::new(vec![a, b, c], cols.to_vec()));
            }
        }
    }
    out
}

/// Every `(2 rows, 3 cols)` block on which the two rows are proportional.
pub fn find_rank1_2x3<T: Real>(m: &CMatrix<T>, tol: &ToleranceConfig<T>) -> Vec<BlockLocation> {
    let mut out = Vec::new();
    for rows in pairs() {
        let ratios = row_products(m, rows[0], rows[1]);
        // Group columns by equal ratio; every 3-subset of a class is a hit.
        let mut same = [[false; N]; N];
        for [x, y] in pairs() {
            let eq = ratios[x].approx_eq(&ratios[y], tol.eps_eq);
            same[x][y] = eq;
            same[y][x] = eq;
        }
        for [x, y, z] in triples() {
            if same[x][y] && same[x][z] && same[y][z] {
                out.push(BlockLocation::new(rows.to_vec(), vec![x, y, z]));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{self, HFamilyParams};

    type U = UnitScalar<f64>;

    fn tol() -> ToleranceConfig<f64> {
        ToleranceConfig::default()
    }

    #[test]
    fn m2_has_leading_h2_block() {
        let blocks = find_h2_blocks(&catalog::m2::<f64>(), &tol());
        assert!(blocks.contains(&BlockLocation::new(vec![0, 1], vec![0, 1])));
        assert!(is_h2_reducible(&catalog::m2::<f64>(), &tol()));
    }

    #[test]
    fn tao_is_not_h2_reducible() {
        assert!(find_h2_blocks(&catalog::tao::<f64>(), &tol()).is_empty());
        assert!(!is_h2_reducible(&catalog::tao::<f64>(), &tol()));
    }

    #[test]
    fn h3_examples() {
        let t = tol();
        let h = catalog::h_family(&HFamilyParams::new(U::one(), U::one()), &t).unwrap();
        assert!(find_h3_blocks(&h, &t).contains(&BlockLocation::new(vec![0, 2, 4], vec![0, 1, 2])));
        let tao = catalog::tao::<f64>();
        assert!(find_h3_blocks(&tao, &t).contains(&BlockLocation::new(vec![0, 1, 2], vec![1, 2, 4])));
    }

    #[test]
    fn equal_rows_never_share_an_h3_block() {
        let tao = catalog::tao::<f64>();
        let dup = CMatrix::from_fn(|i, j| if i == 1 { tao.get(0, j) } else { tao.get(i, j) });
        let t = tol();
        assert!(find_h3_blocks(&dup, &t).iter().all(|b| !(b.rows.contains(&0) && b.rows.contains(&1))));
    }

    #[test]
    fn rank1_examples() {
        let t = tol();
        let h = catalog::h_family(&HFamilyParams::new(U::from_angle(0.3), U::from_angle(1.9)), &t).unwrap();
        assert!(find_rank1_2x3(&h, &t).contains(&BlockLocation::new(vec![0, 1], vec![0, 1, 2])));
        assert!(find_rank1_2x3(&catalog::tao::<f64>(), &t).is_empty());
    }

    #[test]
    fn tao_row_ratios_each_appear_twice() {
        let tao = catalog::tao::<f64>();
        let roots: Vec<U> = (0..3).map(|p| U::root_of_unity(p, 3)).collect();
        for [a, b] in pairs() {
            let p = row_products(&tao, a, b);
            for r in &roots {
                assert_eq!(p.iter().filter(|x| x.approx_eq(r, 1e-12)).count(), 2);
            }
        }
    }
}
