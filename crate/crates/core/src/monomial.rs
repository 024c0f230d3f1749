//! Monomial unitaries: a permutation with a unimodular phase per row.

use crate::error::{ChmError, Result};
use crate::matrix::{CMatrix, N};
use crate::scalar::{Real, UnitScalar};

/// The matrix with `phases[i]` at position `(i, perm[i])` and zeros elsewhere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonomialUnitary<T> {
    perm: [usize; N],
    phases: [UnitScalar<T>; N],
}

impl<T: Real> MonomialUnitary<T> {
    pub fn new(perm: [usize; N], phases: [UnitScalar<T>; N]) -> Result<Self> {
        let mut seen = [false; N];
        for &p in &perm {
            if p >= N || seen[p] {
                return Err(ChmError::Domain(format!("{perm:?} is not a permutation of 0..6")));
            }
            seen[p] = true;
        }
        Ok(Self { perm, phases })
    }

    pub fn identity() -> Self {
        Self { perm: [0, 1, 2, 3, 4, 5], phases: [UnitScalar::one(); N] }
    }

    pub fn diagonal(phases: [UnitScalar<T>; N]) -> Self {
        Self { perm: [0, 1, 2, 3, 4, 5], phases }
    }

    pub fn permutation(perm: [usize; N]) -> Result<Self> {
        Self::new(perm, [UnitScalar::one(); N])
    }

    pub fn perm(&self) -> &[usize; N] {
        &self.perm
    }

    pub fn phases(&self) -> &[UnitScalar<T>; N] {
        &self.phases
    }

    /// `self · m`: row `i` of the result is `phases[i] · m[perm[i]]`.
    pub fn apply_left(&self, m: &CMatrix<T>) -> CMatrix<T> {
        CMatrix::from_fn(|i, j| self.phases[i] * m.get(self.perm[i], j))
    }

    /// `m · self`: column `perm[k]` of the result is `m[·][k] · phases[k]`.
    pub fn apply_right(&self, m: &CMatrix<T>) -> CMatrix<T> {
        let inv = self.inverse_perm();
        CMatrix::from_fn(|i, j| {
            let k = inv[j];
            m.get(i, k) * self.phases[k]
        })
    }

    fn inverse_perm(&self) -> [usize; N] {
        let mut inv = [0; N];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p] = i;
        }
        inv
    }

    /// Matrix product `self · rhs`.
    pub fn compose(&self, rhs: &Self) -> Self {
        let mut perm = [0; N];
        let mut phases = [UnitScalar::one(); N];
        for i in 0..N {
            perm[i] = rhs.perm[self.perm[i]];
            phases[i] = self.phases[i] * rhs.phases[self.perm[i]];
        }
        Self { perm, phases }
    }

    /// The inverse, which is also the conjugate transpose.
    pub fn inverse(&self) -> Self {
        let mut perm = [0; N];
        let mut phases = [UnitScalar::one(); N];
        for i in 0..N {
            perm[self.perm[i]] = i;
            phases[self.perm[i]] = self.phases[i].conj();
        }
        Self { perm, phases }
    }

    /// Dense form, mostly for tests.
    pub fn to_dense(&self) -> [[num_complex::Complex<T>; N]; N] {
        let zero = num_complex::Complex::new(T::zero(), T::zero());
        let mut out = [[zero; N]; N];
        for i in 0..N {
            out[i][self.perm[i]] = self.phases[i].to_complex();
        }
        out
    }
}

/// A pair `(left, right)` with `left · M · right = N` for the certified pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EquivalenceWitness<T> {
    pub left: MonomialUnitary<T>,
    pub right: MonomialUnitary<T>,
}

impl<T: Real> EquivalenceWitness<T> {
    pub fn identity() -> Self {
        Self { left: MonomialUnitary::identity(), right: MonomialUnitary::identity() }
    }

    /// Builds the witness for `target[i][j] = a_i · source[rows[i]][cols[j]] · b_j`,
    /// solving the phases with `b_0 = 1`.
    pub fn from_index_maps(
        source: &CMatrix<T>,
        target: &CMatrix<T>,
        rows: [usize; N],
        cols: [usize; N],
    ) -> Result<Self> {
        let mut a = [UnitScalar::one(); N];
        let mut b = [UnitScalar::one(); N];
        for i in 0..N {
            a[i] = target.get(i, 0) / source.get(rows[i], cols[0]);
        }
        for j in 1..N {
            b[j] = target.get(0, j) / (a[0] * source.get(rows[0], cols[j]));
        }
        let left = MonomialUnitary::new(rows, a)?;
        // Column cols[j] of the source lands in column j with factor b_j.
        let mut right_perm = [0; N];
        let mut right_phases = [UnitScalar::one(); N];
        for j in 0..N {
            right_perm[cols[j]] = j;
            right_phases[cols[j]] = b[j];
        }
        let right = MonomialUnitary::new(right_perm, right_phases)?;
        Ok(Self { left, right })
    }

    pub fn apply(&self, m: &CMatrix<T>) -> CMatrix<T> {
        self.left.apply_left(&self.right.apply_right(m))
    }

    /// Largest entry deviation between `left · source · right` and `target`.
    pub fn deviation(&self, source: &CMatrix<T>, target: &CMatrix<T>) -> T {
        self.apply(source).max_distance(target)
    }

    pub fn verifies(&self, source: &CMatrix<T>, target: &CMatrix<T>, eps: T) -> bool {
        self.deviation(source, target) < eps
    }

    /// Witness for the reverse direction.
    pub fn inverse(&self) -> Self {
        Self { left: self.left.inverse(), right: self.right.inverse() }
    }

    /// If `self` maps `A → B` and `next` maps `B → C`, the result maps `A → C`.
    pub fn then(&self, next: &Self) -> Self {
        Self { left: next.left.compose(&self.left), right: self.right.compose(&next.right) }
    }
}
