//! Closed-form strategies for the worked examples, with their condition
//! reports and the scalar quantities used to check them.

mod bell;
mod domino;
mod double_trine;
mod trine_bound;

pub use bell::{bell3_strategy, bell3_strategy_with, bell3_strategy_operators, bell_pair_strategy};
pub use domino::{
    domino_certificate_sweep, domino_certificate_sweep_with, domino_p_q, domino_sigma_tilde, domino_strategy,
    domino_strategy_with, domino_strategy_operators, DominoSweepOptions,
};
pub use double_trine::{
    double_trine_global, double_trine_nonoptimal, double_trine_nonoptimal_strategy, double_trine_nonoptimal_with,
    double_trine_optimal, double_trine_optimal_strategy, double_trine_optimal_with, double_trine_overlap_analysis,
    helstrom_ket, mirror_parameter, phi_ket, trine_measurement,
};
pub use trine_bound::{
    two_state_bound, lambda_pm_formula, trine_bound_appendix_a, trine_bound_appendix_a_with, trine_priors,
};

use serde_json::{json, Map, Value};

use crate::global::Povm;
use crate::io::matrix_to_json;
use crate::operator::Tolerances;
use crate::report::ConditionReport;
use crate::sequential::{CertifyOptions, SequentialStrategy};

/// The measurement a case study constructs.
#[derive(Clone, Debug)]
pub enum CaseStrategy {
    Sequential(SequentialStrategy),
    Global(Povm),
    None,
}

#[derive(Clone, Debug)]
pub struct CaseStudyResult {
    pub name: String,
    pub strategy: CaseStrategy,
    pub p_corr: f64,
    pub reports: Vec<(String, ConditionReport)>,
    pub extras: Vec<(String, f64)>,
}

impl CaseStudyResult {
    fn new(name: &str, strategy: CaseStrategy, p_corr: f64) -> Self {
        CaseStudyResult {
            name: name.to_string(),
            strategy,
            p_corr,
            reports: Vec::new(),
            extras: Vec::new(),
        }
    }

    fn extra(&mut self, key: impl Into<String>, value: f64) {
        self.extras.push((key.into(), value));
    }

    fn report(&mut self, key: &str, report: ConditionReport) {
        self.reports.push((key.to_string(), report));
    }

    pub fn get_extra(&self, key: &str) -> Option<f64> {
        self.extras.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    pub fn get_report(&self, key: &str) -> Option<&ConditionReport> {
        self.reports.iter().find(|(k, _)| k == key).map(|(_, r)| r)
    }

    pub fn sequential(&self) -> Option<&SequentialStrategy> {
        match &self.strategy {
            CaseStrategy::Sequential(s) => Some(s),
            _ => None,
        }
    }

    /// True when every attached report passes.
    pub fn all_passed(&self) -> bool {
        self.reports.iter().all(|(_, r)| r.passed())
    }

    pub fn to_json(&self) -> Value {
        let strategy = match &self.strategy {
            CaseStrategy::Sequential(s) => serde_json::to_value(s.to_file()).expect("strategy serializes"),
            CaseStrategy::Global(p) => json!({
                "povm": p.elements().iter().map(|e| matrix_to_json(e.matrix())).collect::<Vec<_>>()
            }),
            CaseStrategy::None => Value::Null,
        };
        let reports: Map<String, Value> = self.reports.iter().map(|(k, r)| (k.clone(), r.to_json())).collect();
        let extras: Map<String, Value> = self.extras.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        json!({
            "name": self.name,
            "p_corr": self.p_corr,
            "strategy": strategy,
            "reports": reports,
            "extras": extras,
        })
    }
}

/// Settings shared by the case studies that run checks or searches.
#[derive(Clone, Debug, Default)]
pub struct CaseOptions {
    pub tol: Tolerances,
    pub certify: CertifyOptions,
}

