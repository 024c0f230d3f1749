//! Karlsson's block form for matrices containing a 2x2 Hadamard block.
//!
//! ```text
//!     [ F2   Z1           Z2          ]
//! H = [ Z3   ½·Z3·A·Z1    ½·Z3·B·Z2   ]
//!     [ Z4   ½·Z4·B·Z1    ½·Z4·A·Z2   ]
//! ```
//!
//! `A` and `B` depend on `(θ, φ)` only. Orthogonality holds for any unimodular
//! `z₁..z₄`, but unimodularity of the interior blocks does not: block
//! `½·Zr·X·Zc` is unimodular iff `Re(w_X(z_c)·conj(z_r)) = 0` with
//! `w_X(z) = X₁₂²·z − X₁₁²·conj(z)`. Given `z₁`, this fixes `z₂, z₃, z₄` up to
//! sign; [`KarlssonParams::complete`] solves for them.

use std::f64::consts::PI;

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{ChmError, Result};
use crate::matrix::CMatrix;
use crate::scalar::{Real, UnitScalar};
use crate::tolerance::ToleranceConfig;

pub type Mat2<T> = [[Complex<T>; 2]; 2];

fn mat_mul<T: Real>(a: &Mat2<T>, b: &Mat2<T>) -> Mat2<T> {
    let mut out = [[Complex::zero(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// `[[1, 1], [z, −z]]`, the column-side block.
fn col_block<T: Real>(z: UnitScalar<T>) -> Mat2<T> {
    let one = Complex::new(T::one(), T::zero());
    let z = z.to_complex();
    [[one, one], [z, -z]]
}

/// `[[1, z], [1, −z]]`, the row-side block.
fn row_block<T: Real>(z: UnitScalar<T>) -> Mat2<T> {
    let one = Complex::new(T::one(), T::zero());
    let z = z.to_complex();
    [[one, z], [one, -z]]
}

/// The `(θ, φ)`-dependent core `A₁₁, A₁₂, A, B`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KarlssonCore<T> {
    pub a11: Complex<T>,
    pub a12: Complex<T>,
    pub a: Mat2<T>,
    pub b: Mat2<T>,
}

impl<T: Real> KarlssonCore<T> {
    pub fn new(theta: T, phi: T) -> Self {
        let half = T::lit(0.5);
        let coeff = Complex::new(T::zero(), T::lit(3.0).sqrt() * half);
        let c = Complex::new(theta.cos(), T::zero());
        let s = theta.sin();
        let e_minus = Complex::new(phi.cos(), -phi.sin()) * s;
        let e_plus = Complex::new(phi.cos(), phi.sin()) * s;
        let base = Complex::new(-half, T::zero());
        let a11 = base + coeff * (c + e_minus);
        let a12 = base + coeff * (-c + e_plus);
        let one = Complex::new(T::one(), T::zero());
        let a = [[a11, a12], [a12.conj(), -a11.conj()]];
        let b = [[-one - a11, -one - a12], [-one - a12.conj(), one + a11.conj()]];
        Self { a11, a12, a, b }
    }

    /// `||A₁₁|² + |A₁₂|² − 2|`; zero for every `(θ, φ)`.
    pub fn norm_identity_defect(&self) -> T {
        (self.a11.norm_sqr() + self.a12.norm_sqr() - T::lit(2.0)).abs()
    }

    fn b11(&self) -> Complex<T> {
        self.b[0][0]
    }

    fn b12(&self) -> Complex<T> {
        self.b[0][1]
    }
}

/// `(θ, φ) ∈ [0, π)²` and four unimodular `z`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KarlssonParams<T> {
    pub theta: T,
    pub phi: T,
    pub z: [UnitScalar<T>; 4],
}

fn orientation<T: Real>(x11: Complex<T>, x12: Complex<T>, z: Complex<T>) -> Complex<T> {
    x12 * x12 * z - x11 * x11 * z.conj()
}

fn unit_direction<T: Real>(v: Complex<T>, what: &str) -> Result<UnitScalar<T>> {
    let n = v.norm();
    if n < T::lit(1e-6) {
        return Err(ChmError::Domain(format!("degenerate karlsson parameters: {what} is undetermined")));
    }
    Ok(UnitScalar::new_unchecked(v.re / n, v.im / n))
}

impl<T: Real> KarlssonParams<T> {
    pub fn new(theta: T, phi: T, z: [UnitScalar<T>; 4]) -> Self {
        Self { theta, phi, z }
    }

    pub fn validate(&self, tol: &ToleranceConfig<T>) -> Result<()> {
        let pi = T::PI();
        for (name, v) in [("theta", self.theta), ("phi", self.phi)] {
            if !(v >= T::zero() && v < pi) {
                return Err(ChmError::Domain(format!("{name} = {v} is outside [0, π)")));
            }
        }
        for (k, z) in self.z.iter().enumerate() {
            if z.modulus_defect() > tol.eps_unit {
                return Err(ChmError::Domain(format!("z{} is not unimodular", k + 1)));
            }
        }
        Ok(())
    }

    /// Solves `z₂, z₃, z₄` from `(θ, φ, z₁)` so that every block is unimodular.
    /// `signs[k]` selects the sign of `z_{k+2}`.
    pub fn complete(theta: T, phi: T, z1: UnitScalar<T>, signs: [bool; 3]) -> Result<Self> {
        let core = KarlssonCore::new(theta, phi);
        let i = Complex::new(T::zero(), T::one());
        let z1c = z1.to_complex();
        let w_a1 = orientation(core.a11, core.a12, z1c);
        let w_b1 = orientation(core.b11(), core.b12(), z1c);
        let z3 = unit_direction(i * w_a1, "z3")?;
        let z4 = unit_direction(i * w_b1, "z4")?;
        // z2 makes blocks Z3·B·Z2 and Z4·A·Z2 unimodular: Re(c·z2) = 0 for
        // c from either block. The better-conditioned one is used; if both
        // vanish z2 is unconstrained.
        let (z3c, z4c) = (z3.to_complex(), z4.to_complex());
        let from_b = core.b12() * core.b12() * z3c.conj() - (core.b11() * core.b11() * z3c.conj()).conj();
        let from_a = core.a12 * core.a12 * z4c.conj() - (core.a11 * core.a11 * z4c.conj()).conj();
        let c = if from_b.norm() >= from_a.norm() { from_b } else { from_a };
        let z2 = if c.norm() < T::lit(1e-6) { UnitScalar::one() } else { unit_direction(i * c.conj(), "z2")? };
        let pick = |z: UnitScalar<T>, neg: bool| if neg { -z } else { z };
        Ok(Self { theta, phi, z: [z1, pick(z2, signs[0]), pick(z3, signs[1]), pick(z4, signs[2])] })
    }
}

/// Assembles the Karlsson matrix, validating unimodularity of every block.
pub fn karlsson<T: Real>(p: &KarlssonParams<T>, tol: &ToleranceConfig<T>) -> Result<CMatrix<T>> {
    p.validate(tol)?;
    let core = KarlssonCore::new(p.theta, p.phi);
    let [z1, z2, z3, z4] = p.z;
    let half = T::lit(0.5);
    let one = Complex::new(T::one(), T::zero());
    let f2: Mat2<T> = [[one, one], [one, -one]];
    let scaled = |row: UnitScalar<T>, x: &Mat2<T>, col: UnitScalar<T>| {
        let m = mat_mul(&mat_mul(&row_block(row), x), &col_block(col));
        m.map(|r| r.map(|e| e * half))
    };
    let blocks: [[(&str, Mat2<T>); 3]; 3] = [
        [("F2", f2), ("Z1", col_block(z1)), ("Z2", col_block(z2))],
        [("Z3", row_block(z3)), ("Z3·A·Z1/2", scaled(z3, &core.a, z1)), ("Z3·B·Z2/2", scaled(z3, &core.b, z2))],
        [("Z4", row_block(z4)), ("Z4·B·Z1/2", scaled(z4, &core.b, z1)), ("Z4·A·Z2/2", scaled(z4, &core.a, z2))],
    ];
    let mut rows = [[UnitScalar::one(); 6]; 6];
    for (bi, block_row) in blocks.iter().enumerate() {
        for (bj, (name, block)) in block_row.iter().enumerate() {
            let bad: Vec<(f64, f64)> = block
                .iter()
                .flatten()
                .filter(|e| (e.norm() - T::one()).abs() > tol.eps_unit)
                .map(|e| (e.re.to_f64().unwrap_or(f64::NAN), e.im.to_f64().unwrap_or(f64::NAN)))
                .collect();
            if !bad.is_empty() {
                return Err(ChmError::KarlssonEntry { block: (*name).to_string(), entries: bad });
            }
            for r in 0..2 {
                for c in 0..2 {
                    let e = block[r][c];
                    rows[2 * bi + r][2 * bj + c] = UnitScalar::new_unchecked(e.re, e.im);
                }
            }
        }
    }
    // F2 is exact.
    rows[0][0] = UnitScalar::one();
    rows[0][1] = UnitScalar::one();
    rows[1][0] = UnitScalar::one();
    rows[1][1] = UnitScalar::minus_one();
    Ok(CMatrix::from_array(rows))
}

/// Uniform grid of `n` points over `[0, π)`.
pub fn angle_grid<T: Real>(n: usize) -> Vec<T> {
    (0..n).map(|k| T::lit(PI * k as f64 / n as f64)).collect()
}
