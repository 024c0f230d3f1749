//! The 6x6 unimodular matrix and its elementwise invariants.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{ChmError, Result};
use crate::monomial::MonomialUnitary;
use crate::scalar::{Real, UnitScalar};
use crate::tolerance::ToleranceConfig;

/// Matrix order.
pub const N: usize = 6;

/// A 6x6 grid of unimodular scalars, row-major. The Hadamard scaling
/// `1/√6` is left implicit: a CHM satisfies `M·M† = 6·I`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMatrix<T> {
    entries: [[UnitScalar<T>; N]; N],
}

/// Per-row counts of non-real entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ImaginaryArray(pub [usize; N]);

impl ImaginaryArray {
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

/// Output of [`CMatrix::dephase`]: `matrix = left · M · right`.
#[derive(Clone, Copy, Debug)]
pub struct Dephasing<T> {
    pub matrix: CMatrix<T>,
    pub left: MonomialUnitary<T>,
    pub right: MonomialUnitary<T>,
}

impl<T: Real> CMatrix<T> {
    pub fn from_array(entries: [[UnitScalar<T>; N]; N]) -> Self {
        Self { entries }
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> UnitScalar<T>) -> Self {
        let mut entries = [[UnitScalar::one(); N]; N];
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = f(i, j);
            }
        }
        Self { entries }
    }

    /// Builds a matrix from nested rows, checking the shape and that every
    /// entry is unimodular within `eps_unit`.
    pub fn from_rows(rows: Vec<Vec<UnitScalar<T>>>, tol: &ToleranceConfig<T>) -> Result<Self> {
        if rows.len() != N || rows.iter().any(|r| r.len() != N) {
            return Err(ChmError::Dimension { rows: rows.len(), cols: rows.iter().map(Vec::len).collect() });
        }
        let m = Self::from_fn(|i, j| rows[i][j]);
        m.check_unimodular(tol)?;
        Ok(m)
    }

    pub fn check_unimodular(&self, tol: &ToleranceConfig<T>) -> Result<()> {
        for (i, row) in self.entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                let d = e.modulus_defect();
                if d.is_nan() || d > tol.eps_unit {
                    return Err(ChmError::NotUnimodular {
                        context: format!("({i}, {j})"),
                        modulus: (T::one() + d).to_f64().unwrap_or(f64::NAN),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn ones() -> Self {
        Self::from_fn(|_, _| UnitScalar::one())
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> UnitScalar<T> {
        self.entries[i][j]
    }

    pub fn row(&self, i: usize) -> &[UnitScalar<T>; N] {
        &self.entries[i]
    }

    pub fn rows(&self) -> &[[UnitScalar<T>; N]; N] {
        &self.entries
    }

    pub fn entries(&self) -> impl Iterator<Item = UnitScalar<T>> + '_ {
        self.entries.iter().flat_map(|r| r.iter().copied())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.entries[j][i])
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(|i, j| self.entries[i][j].conj())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|i, j| self.entries[j][i].conj())
    }

    /// `out[i][j] = self[rows[i]][cols[j]]`.
    pub fn permuted(&self, rows: &[usize; N], cols: &[usize; N]) -> Self {
        Self::from_fn(|i, j| self.entries[rows[i]][cols[j]])
    }

    pub fn to_complex_rows(&self) -> [[Complex<T>; N]; N] {
        let mut out = [[Complex::zero(); N]; N];
        for i in 0..N {
            for j in 0..N {
                out[i][j] = self.entries[i][j].to_complex();
            }
        }
        out
    }

    pub fn max_modulus_defect(&self) -> T {
        self.entries().map(|e| e.modulus_defect()).fold(T::zero(), T::max)
    }

    /// Largest entrywise complex distance.
    pub fn max_distance(&self, other: &Self) -> T {
        let mut worst = T::zero();
        for i in 0..N {
            for j in 0..N {
                worst = worst.max(self.entries[i][j].distance(&other.entries[i][j]));
            }
        }
        worst
    }

    pub fn approx_eq(&self, other: &Self, eps: T) -> bool {
        self.max_distance(other) < eps
    }

    pub fn is_symmetric(&self, eps: T) -> bool {
        self.approx_eq(&self.transpose(), eps)
    }

    /// Inner product `Σ_c a[c]·conj(b[c])` of two rows.
    pub fn row_inner(&self, a: usize, b: usize) -> Complex<T> {
        let mut acc = Complex::zero();
        for c in 0..N {
            acc = acc + (self.entries[a][c] * self.entries[b][c].conj()).to_complex();
        }
        acc
    }

    /// `max_{i,j} |(M·M†)_{ij} − 6·δ_{ij}|`.
    pub fn gram_defect(&self) -> T {
        let six = T::lit(N as f64);
        let m = self.to_complex_rows();
        let mut worst = T::zero();
        for i in 0..N {
            for j in 0..N {
                let mut acc = Complex::zero();
                for c in 0..N {
                    acc = acc + m[i][c] * m[j][c].conj();
                }
                if i == j {
                    acc.re = acc.re - six;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    pub fn is_chm(&self, tol: &ToleranceConfig<T>) -> bool {
        self.max_modulus_defect() <= tol.eps_unit && self.gram_defect() < tol.eps_orth
    }

    pub fn ensure_chm(&self, tol: &ToleranceConfig<T>) -> Result<()> {
        if self.is_chm(tol) {
            Ok(())
        } else {
            Err(ChmError::NotChm { defect: self.gram_defect().to_f64().unwrap_or(f64::NAN) })
        }
    }

    /// Scales rows and columns so the first row and column become all ones.
    ///
    /// The dephased matrix is unique: `out[i][j] = M_ij·M_00 / (M_i0·M_0j)`.
    pub fn dephase(&self) -> Dephasing<T> {
        let m00 = self.entries[0][0];
        let mut col_scale = [UnitScalar::one(); N];
        let mut row_scale = [UnitScalar::one(); N];
        for j in 0..N {
            col_scale[j] = self.entries[0][j].conj();
        }
        for i in 0..N {
            row_scale[i] = self.entries[i][0].conj() * m00;
        }
        let matrix = Self::from_fn(|i, j| {
            if i == 0 || j == 0 {
                UnitScalar::one()
            } else {
                row_scale[i] * self.entries[i][j] * col_scale[j]
            }
        });
        Dephasing { matrix, left: MonomialUnitary::diagonal(row_scale), right: MonomialUnitary::diagonal(col_scale) }
    }

    /// Dephases relative to the pivot `(r, c)` without reordering: the pivot
    /// row and column become all ones.
    pub fn dephase_at(&self, r: usize, c: usize) -> Self {
        let p = self.entries[r][c];
        Self::from_fn(|i, j| {
            if i == r || j == c {
                UnitScalar::one()
            } else {
                self.entries[i][j] * p / (self.entries[i][c] * self.entries[r][j])
            }
        })
    }

    pub fn is_dephased(&self, eps: T) -> bool {
        let one = UnitScalar::one();
        (0..N).all(|k| self.entries[0][k].approx_eq(&one, eps) && self.entries[k][0].approx_eq(&one, eps))
    }

    pub fn imaginary_array(&self, tol: &ToleranceConfig<T>) -> ImaginaryArray {
        let mut counts = [0; N];
        for (i, row) in self.entries.iter().enumerate() {
            counts[i] = row.iter().filter(|e| e.im().abs() > tol.eps_eq).count();
        }
        ImaginaryArray(counts)
    }

    /// Representatives of the entry classes under `|u − v| < eps_eq`, sorted
    /// by phase in `[0, 2π)`.
    pub fn distinct_elements(&self, tol: &ToleranceConfig<T>) -> Vec<UnitScalar<T>> {
        let mut reps: Vec<UnitScalar<T>> = Vec::new();
        for e in self.entries() {
            match reps.iter_mut().find(|r| r.approx_eq(&e, tol.eps_eq)) {
                // Prefer a tagged representative when one shows up.
                Some(r) if r.exact_phase().is_none() && e.exact_phase().is_some() => *r = e,
                Some(_) => {}
                None => reps.push(e),
            }
        }
        sort_by_phase(&mut reps, tol.eps_eq);
        reps
    }

    /// All `6⁴` products `M_ij · M_kl · conj(M_il) · conj(M_kj)`, sorted.
    pub fn haagerup_multiset(&self) -> HaagerupSet<T> {
        let mut values = Vec::with_capacity(N * N * N * N);
        for i in 0..N {
            for k in 0..N {
                values.extend(quadruple_products(self, i, k));
            }
        }
        HaagerupSet::from_values(values)
    }

    /// Haagerup products anchored at row `i`; invariant under column
    /// permutations and diagonal scalings, and follows row `i` under row
    /// permutations.
    pub fn row_profile(&self, i: usize) -> HaagerupSet<T> {
        let mut values = Vec::with_capacity(N * N * N);
        for k in 0..N {
            values.extend(quadruple_products(self, i, k));
        }
        HaagerupSet::from_values(values)
    }
}

fn quadruple_products<T: Real>(m: &CMatrix<T>, i: usize, k: usize) -> impl Iterator<Item = UnitScalar<T>> + '_ {
    (0..N).flat_map(move |j| {
        (0..N).map(move |l| m.get(i, j) * m.get(k, l) * m.get(i, l).conj() * m.get(k, j).conj())
    })
}

/// Sorts by `(phase, re)`, snapping phases within `snap` of `2π` to zero.
pub fn sort_by_phase<T: Real>(values: &mut [UnitScalar<T>], snap: T) {
    values.sort_by(|a, b| a.phase_cmp(b, snap));
}

/// A canonically sorted multiset of unimodular values.
#[derive(Clone, Debug, PartialEq)]
pub struct HaagerupSet<T> {
    values: Vec<UnitScalar<T>>,
}

impl<T: Real> HaagerupSet<T> {
    fn from_values(mut values: Vec<UnitScalar<T>>) -> Self {
        // Sorting keys use a float phase for every element so the order is
        // total even when only some values carry exact tags.
        let snap = T::epsilon() * T::lit(1024.0);
        values.sort_by(|a, b| {
            let pa = a.phase_with_snap(snap);
            let pb = b.phase_with_snap(snap);
            pa.partial_cmp(&pb).unwrap_or(Ordering::Equal).then(a.re().partial_cmp(&b.re()).unwrap_or(Ordering::Equal))
        });
        Self { values }
    }

    pub fn values(&self) -> &[UnitScalar<T>] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Elementwise comparison of the sorted sequences within `eps`.
    pub fn matches(&self, other: &Self, eps: T) -> bool {
        if self.values.len() != other.values.len() {
            return false;
        }
        if self.values.iter().zip(&other.values).all(|(a, b)| a.approx_eq(b, eps)) {
            return true;
        }
        // Values straddling the 0/2π seam can sort to opposite ends; fall back
        // to a seam-free comparison by rotating both sequences.
        self.rotated_matches(other, eps)
    }

    fn rotated_matches(&self, other: &Self, eps: T) -> bool {
        let shift = |v: &[UnitScalar<T>]| {
            let mut keyed: Vec<(T, UnitScalar<T>)> = v
                .iter()
                .map(|x| {
                    let mut p = x.phase_with_snap(T::zero());
                    if T::TAU() - p < eps * T::lit(4.0) {
                        p = p - T::TAU();
                    }
                    (p, *x)
                })
                .collect();
            keyed.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));
            keyed.into_iter().map(|(_, x)| x).collect::<Vec<_>>()
        };
        let a = shift(&self.values);
        let b = shift(&other.values);
        a.iter().zip(&b).all(|(x, y)| x.approx_eq(y, eps))
    }

    /// Distinct values with multiplicities, grouped within `eps`.
    pub fn histogram(&self, eps: T) -> Vec<(UnitScalar<T>, usize)> {
        let mut out: Vec<(UnitScalar<T>, usize)> = Vec::new();
        for v in &self.values {
            match out.iter_mut().find(|(r, _)| r.approx_eq(v, eps)) {
                Some((_, n)) => *n += 1,
                None => out.push((*v, 1)),
            }
        }
        out
    }
}

impl<T: Real> fmt::Display for CMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    type M = CMatrix<f64>;

    fn tol() -> ToleranceConfig<f64> {
        ToleranceConfig::default()
    }

    #[test]
    fn all_ones_has_defect_six() {
        let ones = M::ones();
        assert_eq!(ones.gram_defect(), 6.0);
        assert!(!ones.is_chm(&tol()));
    }

    #[test]
    fn from_rows_checks_shape() {
        let rows = vec![vec![UnitScalar::<f64>::one(); 6]; 5];
        assert!(matches!(M::from_rows(rows, &tol()), Err(ChmError::Dimension { rows: 5, .. })));
        let mut rows = vec![vec![UnitScalar::<f64>::one(); 6]; 6];
        rows[2].pop();
        assert!(matches!(M::from_rows(rows, &tol()), Err(ChmError::Dimension { .. })));
    }

    #[test]
    fn from_rows_checks_modulus() {
        let mut rows = vec![vec![UnitScalar::<f64>::one(); 6]; 6];
        rows[1][3] = UnitScalar::new_unchecked(1.0, 0.5);
        assert!(matches!(M::from_rows(rows, &tol()), Err(ChmError::NotUnimodular { .. })));
    }

    #[test]
    fn m2_gram_defect_is_exact() {
        assert!(catalog::m2::<f64>().gram_defect() < 1e-12);
    }

    #[test]
    fn tao_with_s_minus_one_fails() {
        // Row 1 becomes (1,1,1,1,-1,-1); its inner product with row 2 is
        // 2 + 2ω² − 2ω = 2 − 2√3·i, of modulus 4.
        let tao = catalog::tao::<f64>();
        let broken = M::from_fn(|i, j| if i == 0 && j >= 4 { -tao.get(i, j) } else { tao.get(i, j) });
        let w = UnitScalar::<f64>::omega().to_complex();
        let expected = (Complex::new(2.0, 0.0) + (w * w) * 2.0 - w * 2.0).norm();
        assert!((expected - 4.0).abs() < 1e-12);
        assert!((broken.row_inner(0, 1).norm() - expected).abs() < 1e-12);
        assert!(broken.gram_defect() >= expected - 1e-12);
        assert!(!broken.is_chm(&tol()));
    }

    #[test]
    fn dephase_m2() {
        let d = catalog::m2::<f64>().dephase();
        assert!(d.matrix.is_dephased(1e-15));
        // out[1][1] = M_11·M_00 / (M_10·M_01) = i·i / (1·1).
        assert!(d.matrix.get(1, 1).approx_eq(&UnitScalar::minus_one(), 1e-15));
        let rebuilt = d.left.apply_left(&d.right.apply_right(&catalog::m2()));
        assert!(rebuilt.approx_eq(&d.matrix, 1e-15));
        assert!(d.matrix.is_chm(&tol()));
    }

    #[test]
    fn dephase_is_identity_on_dephased_family_member() {
        let h = catalog::h_family(&catalog::HFamilyParams::new(UnitScalar::<f64>::from_angle(0.4), UnitScalar::from_angle(2.1)), &tol()).unwrap();
        let d = h.dephase();
        assert!(d.matrix.approx_eq(&h, 1e-15));
        for k in 0..N {
            assert!(d.left.phases()[k].approx_eq(&UnitScalar::one(), 1e-15));
            assert!(d.right.phases()[k].approx_eq(&UnitScalar::one(), 1e-15));
        }
    }

    #[test]
    fn imaginary_arrays() {
        assert_eq!(catalog::m2::<f64>().imaginary_array(&tol()), ImaginaryArray([1; 6]));
        assert_eq!(catalog::m1::<f64>().imaginary_array(&tol()), ImaginaryArray([2; 6]));
        let real = M::from_fn(|i, j| if (i + j) % 3 == 0 { UnitScalar::minus_one() } else { UnitScalar::one() });
        assert_eq!(real.imaginary_array(&tol()).total(), 0);
    }

    #[test]
    fn distinct_elements_of_catalog() {
        let t = tol();
        let m2 = catalog::m2::<f64>().distinct_elements(&t);
        let expect = [UnitScalar::one(), UnitScalar::i(), UnitScalar::minus_one()];
        assert_eq!(m2.len(), 3);
        for (a, b) in m2.iter().zip(&expect) {
            assert!(a.approx_eq(b, 1e-15));
        }
        let tao = catalog::tao::<f64>().distinct_elements(&t);
        let w = UnitScalar::omega();
        assert_eq!(tao.len(), 3);
        for (a, b) in tao.iter().zip(&[UnitScalar::one(), w, w * w]) {
            assert!(a.approx_eq(b, 1e-15));
        }
    }

    #[test]
    fn distinct_elements_of_h11() {
        let t = tol();
        let h = catalog::h_family(&catalog::HFamilyParams::new(UnitScalar::<f64>::one(), UnitScalar::one()), &t).unwrap();
        let d = h.distinct_elements(&t);
        // Phases 0, 1/6, 1/3, 1/2, 2/3, 5/6 turns: {1, −ω², ω, −1, ω², −ω}.
        let expected: Vec<UnitScalar<f64>> = (0..6).map(|k| UnitScalar::root_of_unity(k, 6)).collect();
        assert_eq!(d.len(), 6);
        for (a, b) in d.iter().zip(&expected) {
            assert!(a.approx_eq(b, 1e-12), "{a} vs {b}");
        }
    }

    #[test]
    fn haagerup_of_tao_is_cube_roots() {
        let set = catalog::tao::<f64>().haagerup_multiset();
        assert_eq!(set.len(), 1296);
        let w = UnitScalar::<f64>::omega();
        let roots = [UnitScalar::one(), w, w * w];
        assert!(set.values().iter().all(|v| roots.iter().any(|r| r.approx_eq(v, 1e-12))));
    }

    #[test]
    fn haagerup_of_m2_contains_i() {
        let set = catalog::m2::<f64>().haagerup_multiset();
        assert!(set.values().iter().any(|v| v.approx_eq(&UnitScalar::i(), 1e-12)));
    }

    #[test]
    fn haagerup_matches_across_seam() {
        let a = HaagerupSet::from_values(vec![UnitScalar::<f64>::from_angle(-1e-10), UnitScalar::from_angle(1.0)]);
        let b = HaagerupSet::from_values(vec![UnitScalar::<f64>::from_angle(1e-10), UnitScalar::from_angle(1.0)]);
        assert!(a.matches(&b, 1e-8));
    }
}
