//! Construction, verification and classification of 6x6 complex Hadamard
//! matrices.
//!
//! Everything is generic over the real scalar (`f32` or `f64`); the aliases
//! below fix it to `f64`.

#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod equivalence;
pub mod error;
pub mod identities;
pub mod json;
pub mod matrix;
pub mod monomial;
pub mod report;
pub mod scalar;
pub mod search;
pub mod substructure;
pub mod tolerance;

pub use error::{ChmError, Result};
pub use matrix::{CMatrix, HaagerupSet, ImaginaryArray, N};
pub use report::{Classification, SearchReport};
pub use monomial::{EquivalenceWitness, MonomialUnitary};
pub use scalar::{Real, Turns, UnitScalar};
pub use tolerance::ToleranceConfig;

pub type UnitScalar64 = UnitScalar<f64>;
pub type CMatrix64 = CMatrix<f64>;
pub type Tolerance64 = ToleranceConfig<f64>;
pub type Witness64 = EquivalenceWitness<f64>;
pub type UnitScalar32 = UnitScalar<f32>;
pub type CMatrix32 = CMatrix<f32>;
pub type Tolerance32 = ToleranceConfig<f32>;
