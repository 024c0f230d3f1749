//! Named matrices and parametric families of order six.

mod karlsson;

pub use karlsson::{angle_grid, karlsson, KarlssonCore, KarlssonParams, Mat2};

use crate::error::{ChmError, Result};
use crate::matrix::CMatrix;
use crate::scalar::{Real, UnitScalar};
use crate::tolerance::ToleranceConfig;

fn from_codes<T: Real>(codes: [[(i64, i64); 6]; 6]) -> CMatrix<T> {
    CMatrix::from_fn(|i, j| {
        let (p, q) = codes[i][j];
        UnitScalar::root_of_unity(p, q)
    })
}

/// Tao's matrix over `{1, ω, ω²}`.
///
/// The first row is all ones: the two entries printed as `s` in the source
/// must equal 1 for rows one and two to be orthogonal.
pub fn tao<T: Real>() -> CMatrix<T> {
    const O: (i64, i64) = (0, 1);
    const W: (i64, i64) = (1, 3);
    const W2: (i64, i64) = (2, 3);
    from_codes([
        [O, O, O, O, O, O],
        [O, O, W, W, W2, W2],
        [O, W, O, W2, W2, W],
        [O, W, W2, O, W, W2],
        [O, W2, W2, W, O, W],
        [O, W2, W, W2, W, O],
    ])
}

/// The real-equivalence representative over `{1, −1, ω, −ω}`.
pub fn m1<T: Real>() -> CMatrix<T> {
    const O: (i64, i64) = (0, 1);
    const X: (i64, i64) = (1, 2);
    const W: (i64, i64) = (1, 3);
    // −ω = e^{2πi(1/3 + 1/2)}
    const NW: (i64, i64) = (5, 6);
    from_codes([
        [W, W, O, O, O, O],
        [W, NW, X, O, X, O],
        [O, O, W, W, O, O],
        [O, X, NW, W, X, O],
        [O, O, O, O, W, W],
        [X, O, O, X, W, NW],
    ])
}

/// The symmetric matrix over `{1, −1, i}` with `i` on the diagonal.
pub fn m2<T: Real>() -> CMatrix<T> {
    const O: (i64, i64) = (0, 1);
    const X: (i64, i64) = (1, 2);
    const I: (i64, i64) = (1, 4);
    from_codes([
        [I, O, O, O, O, O],
        [O, I, O, O, X, X],
        [O, O, I, X, O, X],
        [O, O, X, I, X, O],
        [O, X, O, X, I, O],
        [O, X, X, O, O, I],
    ])
}

/// Parameters of the two-parameter family `H(α, β)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HFamilyParams<T> {
    pub alpha: UnitScalar<T>,
    pub beta: UnitScalar<T>,
}

impl<T: Real> HFamilyParams<T> {
    pub fn new(alpha: UnitScalar<T>, beta: UnitScalar<T>) -> Self {
        Self { alpha, beta }
    }

    pub fn validate(&self, tol: &ToleranceConfig<T>) -> Result<()> {
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta)] {
            if v.modulus_defect() > tol.eps_unit {
                return Err(ChmError::Domain(format!("{name} is not unimodular")));
            }
        }
        Ok(())
    }
}

/// The family containing a rank-one 2x3 block in rows 0–1, columns 0–2.
pub fn h_family<T: Real>(p: &HFamilyParams<T>, tol: &ToleranceConfig<T>) -> Result<CMatrix<T>> {
    p.validate(tol)?;
    let one = UnitScalar::one();
    let w = UnitScalar::omega();
    let w2 = w * w;
    let (a, b) = (p.alpha, p.beta);
    let rows: [[UnitScalar<T>; 6]; 6] = [
        [one, one, one, one, one, one],
        [one, one, one, -one, -one, -one],
        [one, w, w2, a, a * w, a * w2],
        [one, w, w2, -a, -(a * w), -(a * w2)],
        [one, w2, w, b, b * w2, b * w],
        [one, w2, w, -b, -(b * w2), -(b * w)],
    ];
    Ok(CMatrix::from_array(rows))
}

/// Every fixed catalog member, by name.
pub fn named<T: Real>() -> Vec<(&'static str, CMatrix<T>)> {
    vec![("tao", tao()), ("m1", m1()), ("m2", m2())]
}
