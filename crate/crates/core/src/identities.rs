//! Vanishing sums of three and four unimodular numbers.
//!
//! * Three unimodular numbers sum to zero only as a rotated `(1, ω, ω²)` or
//!   `(1, ω², ω)`.
//! * Four unimodular numbers sum to zero only in opposite pairs.
//! * For cube-root-of-unity alphabets, `g₁+g₂+g₃ + k(g₄+g₅+g₆) = 0` pins the
//!   unimodular factor `k` to a sixth root of unity.
//!
//! Preconditions are checked rather than assumed so that every function
//! doubles as a verifier.

use crate::error::{ChmError, Result};
use crate::scalar::{complex_sum, Real, Turns, UnitScalar};
use crate::tolerance::ToleranceConfig;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ChordClass<T> {
    NonZeroSum,
    /// `(a, b, c) = scale · (1, ω, ω²)`.
    OmegaOrder { scale: UnitScalar<T> },
    /// `(a, b, c) = scale · (1, ω², ω)`.
    OmegaBarOrder { scale: UnitScalar<T> },
}

impl<T> ChordClass<T> {
    pub fn is_zero_sum(&self) -> bool {
        !matches!(self, ChordClass::NonZeroSum)
    }
}

/// Which of `b, c, d` is `−a` in a vanishing four-term sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Partner {
    B,
    C,
    D,
}

fn require_unimodular<T: Real>(values: &[UnitScalar<T>], tol: &ToleranceConfig<T>) -> Result<()> {
    for (k, v) in values.iter().enumerate() {
        if v.modulus_defect() > tol.eps_unit {
            return Err(ChmError::Domain(format!("argument {k} is not unimodular")));
        }
    }
    Ok(())
}

pub fn chord3_class<T: Real>(
    a: UnitScalar<T>,
    b: UnitScalar<T>,
    c: UnitScalar<T>,
    tol: &ToleranceConfig<T>,
) -> Result<ChordClass<T>> {
    require_unimodular(&[a, b, c], tol)?;
    if complex_sum([a, b, c]).norm() >= tol.eps_orth {
        return Ok(ChordClass::NonZeroSum);
    }
    let w = UnitScalar::omega();
    let ratio = b / a;
    if ratio.distance(&w) <= ratio.distance(&w.conj()) {
        Ok(ChordClass::OmegaOrder { scale: a })
    } else {
        Ok(ChordClass::OmegaBarOrder { scale: a })
    }
}

/// For `a + b + c + d = 0`, the first of `b, c, d` equal to `−a`.
pub fn four_term_partner<T: Real>(
    a: UnitScalar<T>,
    b: UnitScalar<T>,
    c: UnitScalar<T>,
    d: UnitScalar<T>,
    tol: &ToleranceConfig<T>,
) -> Result<Partner> {
    require_unimodular(&[a, b, c, d], tol)?;
    let sum = complex_sum([a, b, c, d]).norm();
    if sum >= tol.eps_orth {
        return Err(ChmError::Precondition(format!("four-term sum has modulus {sum}")));
    }
    let neg = -a;
    [(b, Partner::B), (c, Partner::C), (d, Partner::D)]
        .into_iter()
        .find(|(x, _)| x.approx_eq(&neg, tol.eps_eq))
        .map(|(_, p)| p)
        .ok_or_else(|| ChmError::Inconsistency("vanishing four-term sum without an opposite pair".into()))
}

/// `k = −(g₁+g₂+g₃)/(g₄+g₅+g₆)` for `g ∈ {1, ω, ω²}⁶`, returned as an exact
/// sixth root of unity.
///
/// Requires `g₁, g₂, g₃` not all equal, both partial sums nonzero, and
/// `g₄, g₅, g₆` not all equal (otherwise `|k| = 1/√3`).
pub fn admissible_scale_factor<T: Real>(g: &[UnitScalar<T>; 6], tol: &ToleranceConfig<T>) -> Result<UnitScalar<T>> {
    require_unimodular(g, tol)?;
    let cube_roots: [UnitScalar<T>; 3] = [0, 1, 2].map(|p| UnitScalar::root_of_unity(p, 3));
    let mut idx = [0usize; 6];
    for (k, v) in g.iter().enumerate() {
        idx[k] = cube_roots
            .iter()
            .position(|r| r.approx_eq(v, tol.eps_eq))
            .ok_or_else(|| ChmError::Domain(format!("g{} is not a cube root of unity", k + 1)))?;
    }
    if idx[0] == idx[1] && idx[1] == idx[2] {
        return Err(ChmError::Precondition("g1, g2, g3 are all equal".into()));
    }
    if idx[3] == idx[4] && idx[4] == idx[5] {
        return Err(ChmError::Precondition("g4, g5, g6 are all equal; no unimodular k exists".into()));
    }
    let num = complex_sum(g[..3].iter().copied());
    let den = complex_sum(g[3..].iter().copied());
    if num.norm() < tol.eps_orth {
        return Err(ChmError::Precondition("g1 + g2 + g3 = 0".into()));
    }
    if den.norm() < tol.eps_orth {
        return Err(ChmError::Precondition("g4 + g5 + g6 = 0".into()));
    }
    let k = -num / den;
    (0..6)
        .map(|p| UnitScalar::<T>::from_turns(Turns::new(p, 6)))
        .find(|r| (r.to_complex() - k).norm() < tol.eps_eq)
        .ok_or_else(|| ChmError::Inconsistency(format!("scale factor {k} is not a sixth root of unity")))
}
