//! Unimodular scalars over a generic floating-point type.
//!
//! Every value carries its floating-point coordinates and, when it is a
//! known root of unity, an exact phase expressed as a rational number of
//! turns in `[0, 1)`. Products and conjugates keep the exact tag whenever
//! all operands carry one.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Div, Mul, Neg};

use num_complex::Complex;
use num_rational::Ratio;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive, Zero};

use crate::error::ChmError;

/// A rational number of turns; `1/3` is `e^{2πi/3}`.
pub type Turns = Ratio<i64>;

/// Floating-point scalar usable by every routine in the crate.
///
/// The associated constants are the default tolerances for that precision.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Default + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    const EPS_UNIT: f64;
    const EPS_ORTH: f64;
    const EPS_EQ: f64;

    /// Converts an `f64` literal. Never fails for finite input.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }
}

impl Real for f64 {
    const EPS_UNIT: f64 = 1e-9;
    const EPS_ORTH: f64 = 1e-8;
    const EPS_EQ: f64 = 1e-8;
}

impl Real for f32 {
    const EPS_UNIT: f64 = 1e-5;
    const EPS_ORTH: f64 = 1e-4;
    const EPS_EQ: f64 = 1e-4;
}

/// Reduces a turn count into `[0, 1)`.
pub fn reduce_turns(t: Turns) -> Turns {
    let r = t - t.floor();
    if r < Turns::zero() {
        r + Turns::from_integer(1)
    } else {
        r
    }
}

/// Parses `"p/q"` or `"p"` into reduced turns.
pub fn parse_turns(s: &str) -> Result<Turns, ChmError> {
    let s = s.trim();
    let bad = || ChmError::Parse(format!("invalid rational turns `{s}`"));
    let t = match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Turns::new(p, q)
        }
        None => Turns::from_integer(s.parse().map_err(|_| bad())?),
    };
    Ok(reduce_turns(t))
}

pub fn format_turns(t: Turns) -> String {
    format!("{}/{}", t.numer(), t.denom())
}

fn turns_to_real<T: Real>(t: Turns) -> T {
    T::lit(*t.numer() as f64) / T::lit(*t.denom() as f64)
}

/// A complex number of modulus one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitScalar<T> {
    re: T,
    im: T,
    exact: Option<Turns>,
}

impl<T: Real> UnitScalar<T> {
    pub fn one() -> Self {
        Self::from_turns(Turns::zero())
    }

    pub fn minus_one() -> Self {
        Self::from_turns(Turns::new(1, 2))
    }

    pub fn i() -> Self {
        Self::from_turns(Turns::new(1, 4))
    }

    /// The primitive cube root of unity `e^{2πi/3}`.
    pub fn omega() -> Self {
        Self::from_turns(Turns::new(1, 3))
    }

    /// Exact root of unity `e^{2πi t}`.
    pub fn from_turns(t: Turns) -> Self {
        let t = reduce_turns(t);
        let (re, im) = exact_coordinates::<T>(t);
        Self { re, im, exact: Some(t) }
    }

    pub fn root_of_unity(p: i64, q: i64) -> Self {
        Self::from_turns(Turns::new(p, q))
    }

    /// `e^{iθ}` for an angle in radians; carries no exact tag.
    pub fn from_angle(theta: T) -> Self {
        Self { re: theta.cos(), im: theta.sin(), exact: None }
    }

    /// `e^{2πi t}` for a floating-point number of turns.
    pub fn from_turns_float(t: T) -> Self {
        Self::from_angle(t * T::TAU())
    }

    /// Builds a scalar from coordinates, rejecting values off the unit circle
    /// by more than `eps`.
    pub fn from_parts(re: T, im: T, eps: T) -> Result<Self, ChmError> {
        let s = Self::new_unchecked(re, im);
        let defect = s.modulus_defect();
        if defect.is_nan() || defect > eps {
            return Err(ChmError::NotUnimodular {
                context: format!("({re}, {im})"),
                modulus: (re.hypot(im)).to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(s)
    }

    pub fn from_complex(z: Complex<T>, eps: T) -> Result<Self, ChmError> {
        Self::from_parts(z.re, z.im, eps)
    }

    /// Builds a scalar without the unimodularity check. Intended for values
    /// that are unimodular by construction (products, quotients).
    pub fn new_unchecked(re: T, im: T) -> Self {
        Self { re, im, exact: None }
    }

    pub fn re(&self) -> T {
        self.re
    }

    pub fn im(&self) -> T {
        self.im
    }

    pub fn exact_phase(&self) -> Option<Turns> {
        self.exact
    }

    pub fn to_complex(&self) -> Complex<T> {
        Complex::new(self.re, self.im)
    }

    /// `||z| - 1|`.
    pub fn modulus_defect(&self) -> T {
        (self.re.hypot(self.im) - T::one()).abs()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re, im: -self.im, exact: self.exact.map(|t| reduce_turns(-t)) }
    }

    pub fn powi(&self, n: i64) -> Self {
        let mut acc = Self::one();
        let base = if n < 0 { self.conj() } else { *self };
        for _ in 0..n.unsigned_abs() {
            acc = acc * base;
        }
        acc
    }

    /// Complex distance `|self - other|`.
    pub fn distance(&self, other: &Self) -> T {
        (self.re - other.re).hypot(self.im - other.im)
    }

    pub fn approx_eq(&self, other: &Self, eps: T) -> bool {
        self.distance(other) < eps
    }

    pub fn is_real(&self, eps: T) -> bool {
        self.im.abs() <= eps
    }

    /// Phase angle in `[0, 2π)`. Exact tags are used when present; a float
    /// phase within `snap` of `2π` is reported as `0`.
    pub fn phase_with_snap(&self, snap: T) -> T {
        if let Some(t) = self.exact {
            return turns_to_real::<T>(t) * T::TAU();
        }
        let mut p = self.im.atan2(self.re);
        if p < T::zero() {
            p = p + T::TAU();
        }
        if T::TAU() - p <= snap {
            p = T::zero();
        }
        p
    }

    pub fn phase(&self) -> T {
        self.phase_with_snap(T::epsilon() * T::lit(64.0))
    }

    /// Ordering by `(phase, re)`, the canonical order for reports.
    pub fn phase_cmp(&self, other: &Self, snap: T) -> Ordering {
        if let (Some(a), Some(b)) = (self.exact, other.exact) {
            return a.cmp(&b);
        }
        let pa = self.phase_with_snap(snap);
        let pb = other.phase_with_snap(snap);
        pa.partial_cmp(&pb)
            .unwrap_or(Ordering::Equal)
            .then(self.re.partial_cmp(&other.re).unwrap_or(Ordering::Equal))
    }

    /// Recovers an exact tag when the value sits within `eps` of a root of
    /// unity of order dividing `max_order`.
    pub fn with_detected_tag(mut self, max_order: i64, eps: T) -> Self {
        if self.exact.is_some() {
            return self;
        }
        let turns = self.phase() / T::TAU();
        for q in 1..=max_order {
            let p = (turns * T::lit(q as f64)).round().to_i64().unwrap_or(0);
            let cand = Self::from_turns(Turns::new(p, q));
            if cand.approx_eq(&self, eps) {
                self.exact = cand.exact;
                return self;
            }
        }
        self
    }

    /// Converts between precisions, keeping the exact tag.
    pub fn cast<U: Real>(&self) -> UnitScalar<U> {
        match self.exact {
            Some(t) => UnitScalar::from_turns(t),
            None => UnitScalar::new_unchecked(
                U::lit(self.re.to_f64().unwrap_or(f64::NAN)),
                U::lit(self.im.to_f64().unwrap_or(f64::NAN)),
            ),
        }
    }
}

fn exact_coordinates<T: Real>(t: Turns) -> (T, T) {
    // Quarter turns are returned exactly so that {1, -1, i, -i} stay clean.
    let four = t * Turns::from_integer(4);
    if four.is_integer() {
        let (re, im) = match four.to_integer() {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        };
        return (T::lit(re), T::lit(im));
    }
    let angle = turns_to_real::<T>(t) * T::TAU();
    (angle.cos(), angle.sin())
}

impl<T: Real> Mul for UnitScalar<T> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        if let (Some(a), Some(b)) = (self.exact, rhs.exact) {
            return Self::from_turns(a + b);
        }
        Self {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
            exact: None,
        }
    }
}

impl<T: Real> Div for UnitScalar<T> {
    type Output = Self;

    // 1/u = conj(u) on the unit circle.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.conj()
    }
}

impl<T: Real> Neg for UnitScalar<T> {
    type Output = Self;

    fn neg(self) -> Self {
        match self.exact {
            Some(t) => Self::from_turns(t + Turns::new(1, 2)),
            None => Self { re: -self.re, im: -self.im, exact: None },
        }
    }
}

impl<T: Real> fmt::Display for UnitScalar<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact {
            Some(t) if t.is_zero() => write!(f, "1"),
            Some(t) => write!(f, "e^(2πi·{})", format_turns(t)),
            None => {
                let sign = if self.im < T::zero() { '-' } else { '+' };
                write!(f, "{:.6}{}{:.6}i", self.re, sign, self.im.abs())
            }
        }
    }
}

/// Sums a slice of unimodular values as a plain complex number.
pub fn complex_sum<T: Real>(values: impl IntoIterator<Item = UnitScalar<T>>) -> Complex<T> {
    values.into_iter().fold(Complex::new(T::zero(), T::zero()), |acc, v| acc + v.to_complex())
}
