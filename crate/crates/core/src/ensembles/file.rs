use std::path::Path;

use serde::{Deserialize, Serialize};

use super::Ensemble;
use crate::error::{Error, Result};
use crate::io::{hermitian_from_json, ket_from_json, ket_to_json, matrix_to_json, JsonComplex, JsonMatrix, Probability};
use crate::operator::{HermitianOperator, Tolerances};

/// On-disk ensemble description. Exactly one of `states` (dense density
/// matrices) or `kets` (pure states) must be present.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleFile {
    #[serde(alias = "dims")]
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bipartite_dims: Option<(usize, usize)>,
    pub priors: Vec<Probability>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub states: Option<Vec<JsonMatrix>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kets: Option<Vec<Vec<JsonComplex>>>,
}

impl EnsembleFile {
    pub fn from_ensemble(e: &Ensemble) -> Self {
        EnsembleFile {
            dim: e.dim(),
            bipartite_dims: e.bipartite_dims(),
            priors: e.priors().iter().map(|p| Probability::Number(*p)).collect(),
            states: Some(e.states().iter().map(|s| matrix_to_json(s.matrix())).collect()),
            kets: None,
        }
    }

    /// Pure-state form; callers supply the kets.
    pub fn from_kets(
        kets: &[crate::operator::ComplexMatrix],
        priors: Vec<Probability>,
        bipartite_dims: Option<(usize, usize)>,
    ) -> Self {
        EnsembleFile {
            dim: kets.first().map_or(0, |k| k.rows()),
            bipartite_dims,
            priors,
            states: None,
            kets: Some(kets.iter().map(ket_to_json).collect()),
        }
    }

    pub fn into_ensemble(self, tol: &Tolerances) -> Result<Ensemble> {
        let priors = self
            .priors
            .iter()
            .map(Probability::value)
            .collect::<Result<Vec<_>>>()?;
        let states: Vec<HermitianOperator> = match (self.states, self.kets) {
            (Some(states), None) => states
                .iter()
                .enumerate()
                .map(|(i, m)| {
                    hermitian_from_json(m).map_err(|e| Error::invalid(format!("state {i}: {e}")))
                })
                .collect::<Result<_>>()?,
            (None, Some(kets)) => kets
                .iter()
                .enumerate()
                .map(|(i, k)| {
                    let ket = ket_from_json(k).map_err(|e| Error::invalid(format!("ket {i}: {e}")))?;
                    if ket.norm() == 0.0 {
                        return Err(Error::invalid(format!("ket {i} is zero")));
                    }
                    Ok(HermitianOperator::pure_state(&ket))
                })
                .collect::<Result<_>>()?,
            _ => {
                return Err(Error::Parse(
                    "ensemble file needs exactly one of 'states' or 'kets'".into(),
                ))
            }
        };
        if let Some((i, s)) = states.iter().enumerate().find(|(_, s)| s.dim() != self.dim) {
            return Err(Error::dims(format!(
                "state {i} has dimension {}, file declares {}",
                s.dim(),
                self.dim
            )));
        }
        Ensemble::with_tolerances(states, priors, self.bipartite_dims, tol)
    }
}

pub fn parse_ensemble(text: &str, tol: &Tolerances) -> Result<Ensemble> {
    let file: EnsembleFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("ensemble file: {e}")))?;
    file.into_ensemble(tol)
}

/// Reads and validates an ensemble file.
pub fn load_ensemble(path: impl AsRef<Path>) -> Result<Ensemble> {
    load_ensemble_with(path, &Tolerances::default())
}

pub fn load_ensemble_with(path: impl AsRef<Path>, tol: &Tolerances) -> Result<Ensemble> {
    let text = std::fs::read_to_string(path)?;
    parse_ensemble(&text, tol)
}
