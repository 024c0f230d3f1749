//! Scan outcomes as serialisable documents.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::json::{MatrixDoc, ScalarDoc};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Classification {
    EquivM2,
    EquivTao,
    HFamilyMember { alpha: ScalarDoc, beta: ScalarDoc },
    Unclassified,
}

/// Per-hit structure recorded alongside the classification.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct HitDetails {
    pub h2_reducible: bool,
    /// Per-row occurrences of the free alphabet element, when there is one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub free_element_counts: Option<[usize; 6]>,
    /// All counts odd, or the hit is equivalent to M2.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parity_dichotomy: Option<bool>,
}

/// `counterexample` is true exactly when some classification is
/// `Unclassified`; `push` maintains this.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub parameter: String,
    pub samples: usize,
    pub matrices_found: Vec<MatrixDoc>,
    pub classifications: Vec<Classification>,
    pub details: Vec<HitDetails>,
    pub counterexample: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl SearchReport {
    pub fn new(parameter: impl Into<String>) -> Self {
        Self { parameter: parameter.into(), samples: 1, ..Self::default() }
    }

    pub fn push(&mut self, matrix: MatrixDoc, class: Classification, details: HitDetails) {
        self.counterexample |= class == Classification::Unclassified;
        self.matrices_found.push(matrix);
        self.classifications.push(class);
        self.details.push(details);
    }

    pub fn is_empty(&self) -> bool {
        self.matrices_found.is_empty()
    }

    /// True when the stored flag agrees with the classifications.
    pub fn is_consistent(&self) -> bool {
        self.counterexample == self.classifications.contains(&Classification::Unclassified)
            && self.matrices_found.len() == self.classifications.len()
            && self.details.len() == self.classifications.len()
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "parameter: {}", self.parameter);
        let _ = writeln!(out, "samples: {}", self.samples);
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "seed: {seed}");
        }
        let _ = writeln!(out, "matrices found: {}", self.matrices_found.len());
        for (k, (class, d)) in self.classifications.iter().zip(&self.details).enumerate() {
            let label = match class {
                Classification::EquivM2 => "equivalent to M2".to_string(),
                Classification::EquivTao => "equivalent to Tao".to_string(),
                Classification::HFamilyMember { alpha, beta } => {
                    format!("H(alpha, beta) with alpha = {}, beta = {}", scalar_text(alpha), scalar_text(beta))
                }
                Classification::Unclassified => "UNCLASSIFIED".to_string(),
            };
            let _ = write!(out, "  [{k}] {label}; h2-reducible: {}", d.h2_reducible);
            if let Some(c) = d.free_element_counts {
                let _ = write!(out, "; free-element counts {c:?}");
            }
            out.push('\n');
        }
        let _ = writeln!(out, "counterexample: {}", self.counterexample);
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }
}

fn scalar_text(s: &ScalarDoc) -> String {
    match &s.phase_turns {
        Some(t) => format!("e^(2πi·{t})"),
        None => format!("{:.6}{:+.6}i", s.re, s.im),
    }
}

/// A single report or a list of per-sample reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ReportDocument {
    One(SearchReport),
    Many(Vec<SearchReport>),
}

impl ReportDocument {
    pub fn reports(&self) -> &[SearchReport] {
        match self {
            ReportDocument::One(r) => std::slice::from_ref(r),
            ReportDocument::Many(v) => v,
        }
    }

    pub fn render_text(&self) -> String {
        self.reports().iter().map(SearchReport::render_text).collect::<Vec<_>>().join("\n")
    }
}
