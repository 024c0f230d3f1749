//! JSON documents for matrices, scalars and equivalence witnesses.
//!
//! A matrix is `{"n": 6, "entries": [[{"re", "im", "phase_turns"?}, …], …]}`.
//! When `phase_turns` is present it is authoritative and `re`/`im` are
//! regenerated from it on load.

use serde::{Deserialize, Serialize};

use crate::error::{ChmError, Result};
use crate::matrix::{CMatrix, N};
use crate::monomial::{EquivalenceWitness, MonomialUnitary};
use crate::scalar::{format_turns, parse_turns, Real, UnitScalar};
use crate::tolerance::ToleranceConfig;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarDoc {
    pub re: f64,
    pub im: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase_turns: Option<String>,
}

impl<T: Real> From<&UnitScalar<T>> for ScalarDoc {
    fn from(u: &UnitScalar<T>) -> Self {
        Self {
            re: u.re().to_f64().unwrap_or(f64::NAN),
            im: u.im().to_f64().unwrap_or(f64::NAN),
            phase_turns: u.exact_phase().map(format_turns),
        }
    }
}

impl ScalarDoc {
    pub fn to_scalar<T: Real>(&self, tol: &ToleranceConfig<T>) -> Result<UnitScalar<T>> {
        match &self.phase_turns {
            Some(t) => Ok(UnitScalar::from_turns(parse_turns(t)?)),
            None => {
                let (re, im) = (T::lit(self.re), T::lit(self.im));
                if !(re.is_finite() && im.is_finite()) {
                    return Err(ChmError::Parse("non-finite scalar component".into()));
                }
                UnitScalar::from_parts(re, im, tol.eps_unit)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub n: usize,
    pub entries: Vec<Vec<ScalarDoc>>,
}

impl<T: Real> From<&CMatrix<T>> for MatrixDoc {
    fn from(m: &CMatrix<T>) -> Self {
        Self { n: N, entries: m.rows().iter().map(|r| r.iter().map(ScalarDoc::from).collect()).collect() }
    }
}

impl MatrixDoc {
    pub fn to_matrix<T: Real>(&self, tol: &ToleranceConfig<T>) -> Result<CMatrix<T>> {
        if self.n != N {
            return Err(ChmError::Dimension { rows: self.n, cols: self.entries.iter().map(Vec::len).collect() });
        }
        let rows = self
            .entries
            .iter()
            .map(|r| r.iter().map(|e| e.to_scalar(tol)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        CMatrix::from_rows(rows, tol)
    }
}

/// `left · source · right = target`, with 0-based permutations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessDoc {
    pub perm_left: Vec<usize>,
    pub phases_left: Vec<ScalarDoc>,
    pub perm_right: Vec<usize>,
    pub phases_right: Vec<ScalarDoc>,
}

impl<T: Real> From<&EquivalenceWitness<T>> for WitnessDoc {
    fn from(w: &EquivalenceWitness<T>) -> Self {
        Self {
            perm_left: w.left.perm().to_vec(),
            phases_left: w.left.phases().iter().map(ScalarDoc::from).collect(),
            perm_right: w.right.perm().to_vec(),
            phases_right: w.right.phases().iter().map(ScalarDoc::from).collect(),
        }
    }
}

impl WitnessDoc {
    pub fn to_witness<T: Real>(&self, tol: &ToleranceConfig<T>) -> Result<EquivalenceWitness<T>> {
        let monomial = |perm: &[usize], phases: &[ScalarDoc]| -> Result<MonomialUnitary<T>> {
            let perm: [usize; N] = perm.try_into().map_err(|_| ChmError::Parse("permutation needs 6 entries".into()))?;
            let phases: Vec<UnitScalar<T>> = phases.iter().map(|p| p.to_scalar(tol)).collect::<Result<_>>()?;
            let phases: [UnitScalar<T>; N] =
                phases.try_into().map_err(|_| ChmError::Parse("phase list needs 6 entries".into()))?;
            MonomialUnitary::new(perm, phases)
        };
        Ok(EquivalenceWitness {
            left: monomial(&self.perm_left, &self.phases_left)?,
            right: monomial(&self.perm_right, &self.phases_right)?,
        })
    }
}

pub fn matrix_to_json<T: Real>(m: &CMatrix<T>) -> String {
    serde_json::to_string_pretty(&MatrixDoc::from(m)).expect("matrix documents serialise")
}

pub fn matrix_from_json<T: Real>(text: &str, tol: &ToleranceConfig<T>) -> Result<CMatrix<T>> {
    let doc: MatrixDoc = serde_json::from_str(text).map_err(|e| ChmError::Parse(e.to_string()))?;
    doc.to_matrix(tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn catalog_round_trips_exactly() {
        let t = ToleranceConfig::<f64>::default();
        for (_, m) in catalog::named::<f64>() {
            let back: CMatrix<f64> = matrix_from_json(&matrix_to_json(&m), &t).unwrap();
            assert_eq!(back, m);
        }
    }

    #[test]
    fn phase_turns_are_authoritative() {
        let text = r#"{"re": 5.0, "im": 0.0, "phase_turns": "1/4"}"#;
        let doc: ScalarDoc = serde_json::from_str(text).unwrap();
        let u: UnitScalar<f64> = doc.to_scalar(&ToleranceConfig::default()).unwrap();
        assert_eq!(u, UnitScalar::i());
    }

    #[test]
    fn malformed_documents_are_rejected() {
        let t = ToleranceConfig::<f64>::default();
        assert!(matches!(matrix_from_json::<f64>("garbage", &t), Err(ChmError::Parse(_))));
        let short = r#"{"n": 6, "entries": [[{"re": 1.0, "im": 0.0}]]}"#;
        assert!(matches!(matrix_from_json::<f64>(short, &t), Err(ChmError::Dimension { .. })));
        let mut doc = MatrixDoc::from(&catalog::tao::<f64>());
        doc.entries[2][3] = ScalarDoc { re: 0.5, im: 0.0, phase_turns: None };
        assert!(matches!(doc.to_matrix::<f64>(&t), Err(ChmError::NotUnimodular { .. })));
    }

    #[test]
    fn witness_round_trip() {
        let t = ToleranceConfig::<f64>::default();
        let left = MonomialUnitary::new([1, 0, 2, 3, 5, 4], [UnitScalar::i(); N]).unwrap();
        let w = EquivalenceWitness { left, right: MonomialUnitary::identity() };
        let doc = WitnessDoc::from(&w);
        let back: EquivalenceWitness<f64> = doc.to_witness(&t).unwrap();
        assert_eq!(back.left.perm(), w.left.perm());
        assert_eq!(back.left.phases(), w.left.phases());
    }
}
