//! State ensembles: validated (prior, state) lists, the named builtin
//! ensembles, and the JSON file format.

mod builtin;
mod file;

pub use builtin::{
    anti_trine_ket, bell_ket, builtin_ensemble, domino_factors, domino_subset_ensemble,
    domino_subsets, trine_ket, trine_rotation, EnsembleName, SubsetEnsemble,
};
pub use file::{load_ensemble, load_ensemble_with, parse_ensemble, EnsembleFile};

use crate::error::{Error, Result};
use crate::operator::{psd_margin, ComplexMatrix, HermitianOperator, Tolerances};

/// Weighted list of density operators, optionally factorized as A ⊗ B.
#[derive(Clone, Debug)]
pub struct Ensemble {
    states: Vec<HermitianOperator>,
    priors: Vec<f64>,
    bipartite_dims: Option<(usize, usize)>,
}

impl Ensemble {
    pub fn new(
        states: Vec<HermitianOperator>,
        priors: Vec<f64>,
        bipartite_dims: Option<(usize, usize)>,
    ) -> Result<Self> {
        Self::with_tolerances(states, priors, bipartite_dims, &Tolerances::default())
    }

    pub fn with_tolerances(
        states: Vec<HermitianOperator>,
        priors: Vec<f64>,
        bipartite_dims: Option<(usize, usize)>,
        tol: &Tolerances,
    ) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::invalid("ensemble has no states"));
        }
        if states.len() != priors.len() {
            return Err(Error::dims(format!(
                "{} states but {} priors",
                states.len(),
                priors.len()
            )));
        }
        if let Some((i, p)) = priors.iter().enumerate().find(|(_, p)| !(**p >= 0.0) || !p.is_finite()) {
            return Err(Error::invalid(format!("prior {i} is {p}, must be a nonnegative number")));
        }
        let total: f64 = priors.iter().sum();
        if (total - 1.0).abs() > tol.psd {
            return Err(Error::invalid(format!("priors sum {total}, expected 1")));
        }
        let dim = states[0].dim();
        for (i, s) in states.iter().enumerate() {
            if s.dim() != dim {
                return Err(Error::dims(format!("state {i} has dimension {}, expected {dim}", s.dim())));
            }
            let tr = s.trace();
            if (tr - 1.0).abs() > tol.psd {
                return Err(Error::invalid(format!("state {i} trace {tr:?}, expected 1")));
            }
            let m = psd_margin(s)?;
            if m < -tol.psd {
                return Err(Error::invalid(format!(
                    "state {i} is not positive semidefinite (min eigenvalue {m:e})"
                )));
            }
        }
        if let Some((a, b)) = bipartite_dims {
            if a * b != dim {
                return Err(Error::dims(format!(
                    "bipartite dims ({a}, {b}) do not factor state dimension {dim}"
                )));
            }
        }
        Ok(Ensemble {
            states,
            priors,
            bipartite_dims,
        })
    }

    /// Ensemble of pure states given by (not necessarily normalized) kets.
    pub fn from_kets(
        kets: &[ComplexMatrix],
        priors: Vec<f64>,
        bipartite_dims: Option<(usize, usize)>,
    ) -> Result<Self> {
        let states = kets.iter().map(HermitianOperator::pure_state).collect();
        Self::new(states, priors, bipartite_dims)
    }

    pub fn uniform(states: Vec<HermitianOperator>, bipartite_dims: Option<(usize, usize)>) -> Result<Self> {
        let n = states.len();
        Self::new(states, vec![1.0 / n as f64; n], bipartite_dims)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn states(&self) -> &[HermitianOperator] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &HermitianOperator {
        &self.states[i]
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn prior(&self, i: usize) -> f64 {
        self.priors[i]
    }

    pub fn bipartite_dims(&self) -> Option<(usize, usize)> {
        self.bipartite_dims
    }

    /// Bipartite dims or a rejected-input error.
    pub fn require_bipartite(&self) -> Result<(usize, usize)> {
        self.bipartite_dims
            .ok_or_else(|| Error::invalid("ensemble has no bipartite factorization"))
    }

    pub fn with_bipartite_dims(mut self, dims: (usize, usize)) -> Result<Self> {
        if dims.0 * dims.1 != self.dim() {
            return Err(Error::dims(format!(
                "bipartite dims {:?} do not factor state dimension {}",
                dims,
                self.dim()
            )));
        }
        self.bipartite_dims = Some(dims);
        Ok(self)
    }

    /// The operators p_i ρ_i.
    pub fn weighted_states(&self) -> Vec<HermitianOperator> {
        self.states
            .iter()
            .zip(&self.priors)
            .map(|(s, p)| s.scale(*p))
            .collect()
    }

    /// Σ_i p_i ρ_i.
    pub fn average_state(&self) -> HermitianOperator {
        HermitianOperator::sum(self.dim(), &self.weighted_states())
    }

    /// Largest entrywise distance to another ensemble of the same shape.
    pub fn max_abs_diff(&self, other: &Ensemble) -> f64 {
        assert_eq!(self.len(), other.len());
        let states = self
            .states
            .iter()
            .zip(&other.states)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max);
        let priors = self
            .priors
            .iter()
            .zip(&other.priors)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        states.max(priors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_priors_not_summing_to_one() {
        let s = HermitianOperator::diag(&[1.0, 0.0]);
        let err = Ensemble::new(vec![s.clone(), s], vec![0.6, 0.6], None).unwrap_err();
        assert!(err.to_string().contains("priors sum 1.2"), "{err}");
    }

    #[test]
    fn rejects_trace_two_state() {
        let s = HermitianOperator::diag(&[1.0, 1.0]);
        let err = Ensemble::new(vec![s], vec![1.0], None).unwrap_err();
        assert!(err.to_string().contains("state 0 trace 2.0"), "{err}");
    }

    #[test]
    fn rejects_non_psd_state() {
        let s = HermitianOperator::diag(&[1.5, -0.5]);
        let err = Ensemble::new(vec![s], vec![1.0], None).unwrap_err();
        assert!(err.to_string().contains("not positive semidefinite"), "{err}");
    }

    #[test]
    fn rejects_bad_factorization() {
        let s = HermitianOperator::diag(&[0.5, 0.5, 0.0]);
        assert!(Ensemble::new(vec![s], vec![1.0], Some((2, 2))).is_err());
    }
}
