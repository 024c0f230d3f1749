//! Helpers shared by the integration tests. Oracles here use plain complex
//! arithmetic and full subset enumeration, independent of the library's
//! pruned implementations.
#![allow(dead_code)]

use chm6::catalog::{self, HFamilyParams, KarlssonParams};
use chm6::substructure::BlockLocation;
use chm6::{CMatrix64, EquivalenceWitness, MonomialUnitary, Tolerance64, UnitScalar64};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type U = UnitScalar64;

pub fn tol() -> Tolerance64 {
    Tolerance64::default()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_unit(rng: &mut ChaCha8Rng) -> U {
    U::from_angle(rng.random_range(0.0..std::f64::consts::TAU))
}

pub fn random_monomial(rng: &mut ChaCha8Rng) -> MonomialUnitary<f64> {
    let mut perm = [0, 1, 2, 3, 4, 5];
    perm.shuffle(rng);
    let phases = [(); 6].map(|_| random_unit(rng));
    MonomialUnitary::new(perm, phases).unwrap()
}

/// `(P·M·Q, (P, Q))` for random monomial unitaries.
pub fn scramble(m: &CMatrix64, rng: &mut ChaCha8Rng) -> (CMatrix64, EquivalenceWitness<f64>) {
    let w = EquivalenceWitness { left: random_monomial(rng), right: random_monomial(rng) };
    (w.apply(m), w)
}

pub fn random_h_family(rng: &mut ChaCha8Rng) -> CMatrix64 {
    let p = HFamilyParams::new(random_unit(rng), random_unit(rng));
    catalog::h_family(&p, &tol()).unwrap()
}

/// A completed Karlsson sample with random angles, `z₁` and signs.
pub fn random_karlsson(rng: &mut ChaCha8Rng) -> CMatrix64 {
    loop {
        let theta = rng.random_range(0.0..std::f64::consts::PI);
        let phi = rng.random_range(0.0..std::f64::consts::PI);
        let signs = [rng.random_bool(0.5), rng.random_bool(0.5), rng.random_bool(0.5)];
        if let Ok(p) = KarlssonParams::complete(theta, phi, random_unit(rng), signs) {
            return catalog::karlsson(&p, &tol()).unwrap();
        }
    }
}

pub fn complex(m: &CMatrix64) -> Vec<Vec<Complex64>> {
    (0..6).map(|i| (0..6).map(|j| m.get(i, j).to_complex()).collect()).collect()
}

/// Direct `max |(M M†)_ij − 6 δ_ij|`.
pub fn gram_oracle(m: &CMatrix64) -> f64 {
    let c = complex(m);
    let mut worst = 0.0f64;
    for i in 0..6 {
        for k in 0..6 {
            let s: Complex64 = (0..6).map(|j| c[i][j] * c[k][j].conj()).sum();
            let target = if i == k { 6.0 } else { 0.0 };
            worst = worst.max((s - target).norm());
        }
    }
    worst
}

fn subsets(k: usize) -> Vec<Vec<usize>> {
    (0u32..64)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..6).filter(|i| m >> i & 1 == 1).collect())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// `S·S† = k·I` on the submatrix, by direct multiplication.
fn is_scaled_unitary(c: &[Vec<Complex64>], rows: &[usize], cols: &[usize], eps: f64) -> bool {
    rows.iter().all(|&a| {
        rows.iter().all(|&b| {
            let s: Complex64 = cols.iter().map(|&j| c[a][j] * c[b][j].conj()).sum();
            let target = if a == b { cols.len() as f64 } else { 0.0 };
            (s - target).norm() < eps
        })
    })
}

pub fn h2_oracle(m: &CMatrix64, t: &Tolerance64) -> Vec<BlockLocation> {
    let c = complex(m);
    let mut out = Vec::new();
    for rows in subsets(2) {
        for cols in subsets(2) {
            if is_scaled_unitary(&c, &rows, &cols, t.eps_orth) {
                out.push(BlockLocation::new(rows.clone(), cols));
            }
        }
    }
    out
}

pub fn h3_oracle(m: &CMatrix64, t: &Tolerance64) -> Vec<BlockLocation> {
    let c = complex(m);
    let mut out = Vec::new();
    for rows in subsets(3) {
        for cols in subsets(3) {
            if is_scaled_unitary(&c, &rows, &cols, t.eps_orth) {
                out.push(BlockLocation::new(rows.clone(), cols));
            }
        }
    }
    out
}

/// Rank one means every 2x2 minor vanishes.
pub fn rank1_oracle(m: &CMatrix64, t: &Tolerance64) -> Vec<BlockLocation> {
    let c = complex(m);
    let mut out = Vec::new();
    for rows in subsets(2) {
        for cols in subsets(3) {
            let (a, b) = (rows[0], rows[1]);
            let minors_vanish = cols.iter().all(|&x| {
                cols.iter().all(|&y| (c[a][x] * c[b][y] - c[a][y] * c[b][x]).norm() < t.eps_eq)
            });
            if minors_vanish {
                out.push(BlockLocation::new(rows.clone(), cols));
            }
        }
    }
    out
}

pub fn subset_counts() -> (usize, usize, usize) {
    let (p, t) = (subsets(2).len(), subsets(3).len());
    (p * p, t * t, p * t)
}
