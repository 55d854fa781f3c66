//! Certificate verdicts and machine-readable run reports.

mod json;

pub use json::{to_json_string, RunReport};

use serde_json::{json, Value};

use crate::global::Povm;
use crate::io::{ket_to_json, matrix_to_json};
use crate::operator::{ComplexMatrix, HermitianOperator};

/// Evidence attached to a verdict.
#[derive(Clone, Debug)]
pub enum Witness {
    /// A direction |λ⟩ along which an operator inequality fails.
    Vector(ComplexMatrix),
    Operator(HermitianOperator),
    /// A direction on A together with a B-measurement {Ñ_k}; the pair
    /// proves a sequential strategy suboptimal when the margin is negative.
    DirectionAndMeasurement {
        direction: ComplexMatrix,
        measurement: Povm,
    },
}

impl Witness {
    pub fn to_json(&self) -> Value {
        match self {
            Witness::Vector(v) => json!({ "vector": ket_to_json(v) }),
            Witness::Operator(op) => json!({ "operator": matrix_to_json(op.matrix()) }),
            Witness::DirectionAndMeasurement {
                direction,
                measurement,
            } => json!({
                "direction": ket_to_json(direction),
                "measurement": measurement
                    .elements()
                    .iter()
                    .map(|e| matrix_to_json(e.matrix()))
                    .collect::<Vec<_>>(),
            }),
        }
    }
}

/// One checked condition: a margin that must be ≥ −tol_psd.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub label: String,
    pub margin: f64,
    pub pass: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn new(label: impl Into<String>, margin: f64, tol_psd: f64) -> Self {
        Verdict {
            label: label.into(),
            margin,
            pass: margin >= -tol_psd,
            witness: None,
        }
    }

    pub fn with_witness(mut self, witness: Witness) -> Self {
        self.witness = Some(witness);
        self
    }
}

#[derive(Clone, Debug, Default)]
pub struct ConditionReport {
    pub verdicts: Vec<Verdict>,
    /// Free-form remarks (skipped pairs, discarded restarts, ...).
    pub notes: Vec<String>,
    /// Named scalars computed along the way.
    pub scalars: Vec<(String, f64)>,
}

impl ConditionReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, v: Verdict) {
        self.verdicts.push(v);
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn scalar(&mut self, name: impl Into<String>, value: f64) {
        self.scalars.push((name.into(), value));
    }

    pub fn get_scalar(&self, name: &str) -> Option<f64> {
        self.scalars.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn worst_margin(&self) -> f64 {
        self.verdicts.iter().map(|v| v.margin).fold(f64::INFINITY, f64::min)
    }

    pub fn verdict(&self, label: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.label == label)
    }

    pub fn merge(&mut self, other: ConditionReport) {
        self.verdicts.extend(other.verdicts);
        self.notes.extend(other.notes);
        self.scalars.extend(other.scalars);
    }

    pub fn to_json(&self) -> Value {
        json!({
            "pass": self.passed(),
            "worst_margin": self.worst_margin(),
            "verdicts": self.verdicts.iter().map(|v| {
                let mut o = json!({ "label": v.label, "margin": v.margin, "pass": v.pass });
                if let Some(w) = &v.witness {
                    o["witness"] = w.to_json();
                }
                o
            }).collect::<Vec<_>>(),
            "notes": self.notes,
            "scalars": self.scalars.iter().map(|(k, v)| (k.clone(), json!(v))).collect::<serde_json::Map<_, _>>(),
        })
    }
}
