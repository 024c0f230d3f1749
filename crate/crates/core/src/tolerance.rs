use crate::error::{ChmError, Result};
use crate::scalar::Real;

/// Numerical thresholds shared by every check.
///
/// * `eps_unit` bounds `||z| - 1|` for an entry to count as unimodular.
/// * `eps_orth` bounds inner products that must vanish.
/// * `eps_eq` is the absolute complex distance under which two entries are
///   the same element.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ToleranceConfig<T> {
    pub eps_unit: T,
    pub eps_orth: T,
    pub eps_eq: T,
}

impl<T: Real> ToleranceConfig<T> {
    pub fn new(eps_unit: T, eps_orth: T, eps_eq: T) -> Result<Self> {
        let tol = Self { eps_unit, eps_orth, eps_eq };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |x: T| x > T::zero() && x.is_finite();
        if !(positive(self.eps_unit) && positive(self.eps_orth) && positive(self.eps_eq)) {
            return Err(ChmError::Domain("tolerances must be strictly positive".into()));
        }
        if self.eps_unit > self.eps_eq {
            return Err(ChmError::Domain("eps_unit must not exceed eps_eq".into()));
        }
        Ok(())
    }

    /// Tolerance used when re-verifying witnesses built from composed monomials.
    pub fn witness_eps(&self) -> T {
        self.eps_eq * T::lit(10.0)
    }
}

impl<T: Real> Default for ToleranceConfig<T> {
    fn default() -> Self {
        Self { eps_unit: T::lit(T::EPS_UNIT), eps_orth: T::lit(T::EPS_ORTH), eps_eq: T::lit(T::EPS_EQ) }
    }
}
