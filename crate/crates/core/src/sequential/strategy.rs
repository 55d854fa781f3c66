use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::ensembles::Ensemble;
use crate::error::{Error, Result};
use crate::global::Povm;
use crate::io::{matrix_from_json, matrix_to_json, JsonMatrix};
use crate::operator::{ComplexMatrix, HermitianOperator, Tolerances};

/// Measure A with {M_j}; on outcome j measure B with {N_{i|j}} and guess i.
#[derive(Clone, Debug, PartialEq)]
pub struct SequentialStrategy {
    a_povm: Povm,
    b_povms: Vec<Povm>,
}

impl SequentialStrategy {
    pub fn new(a_povm: Povm, b_povms: Vec<Povm>) -> Result<Self> {
        if b_povms.len() != a_povm.len() {
            return Err(Error::dims(format!(
                "{} A-outcomes but {} B-measurements",
                a_povm.len(),
                b_povms.len()
            )));
        }
        let hyp = b_povms[0].len();
        let dim_b = b_povms[0].dim();
        for (j, b) in b_povms.iter().enumerate() {
            if b.len() != hyp {
                return Err(Error::dims(format!(
                    "B-measurement {j} has {} outcomes, expected {hyp}",
                    b.len()
                )));
            }
            if b.dim() != dim_b {
                return Err(Error::dims(format!(
                    "B-measurement {j} acts on dimension {}, expected {dim_b}",
                    b.dim()
                )));
            }
        }
        Ok(SequentialStrategy { a_povm, b_povms })
    }

    /// Builds the strategy from raw operators, validating every POVM.
    pub fn from_operators(
        a: Vec<HermitianOperator>,
        b: Vec<Vec<HermitianOperator>>,
        tol: &Tolerances,
    ) -> Result<Self> {
        let a_povm = Povm::with_tolerances(a, tol)
            .map_err(|e| Error::invalid(format!("A-measurement: {e}")))?;
        let b_povms = b
            .into_iter()
            .enumerate()
            .map(|(j, ops)| {
                Povm::with_tolerances(ops, tol).map_err(|e| Error::invalid(format!("B-measurement {j}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(a_povm, b_povms)
    }

    pub fn a_povm(&self) -> &Povm {
        &self.a_povm
    }

    pub fn b_povms(&self) -> &[Povm] {
        &self.b_povms
    }

    /// M_j.
    pub fn m(&self, j: usize) -> &HermitianOperator {
        self.a_povm.element(j)
    }

    /// N_{i|j}.
    pub fn n(&self, i: usize, j: usize) -> &HermitianOperator {
        self.b_povms[j].element(i)
    }

    /// Number of A-outcomes.
    pub fn outcomes(&self) -> usize {
        self.a_povm.len()
    }

    pub fn hypotheses(&self) -> usize {
        self.b_povms[0].len()
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.a_povm.dim(), self.b_povms[0].dim())
    }

    /// Checks that the strategy fits a bipartite ensemble and returns its dims.
    pub fn check_compatible(&self, ensemble: &Ensemble) -> Result<(usize, usize)> {
        let dims = ensemble.require_bipartite()?;
        if dims != self.dims() {
            return Err(Error::dims(format!(
                "strategy acts on {:?} but the ensemble factorizes as {:?}",
                self.dims(),
                dims
            )));
        }
        if self.hypotheses() != ensemble.len() {
            return Err(Error::dims(format!(
                "strategy guesses among {} hypotheses but the ensemble has {}",
                self.hypotheses(),
                ensemble.len()
            )));
        }
        Ok(dims)
    }

    pub fn to_file(&self) -> StrategyFile {
        StrategyFile {
            a_povm: self.a_povm.elements().iter().map(|e| matrix_to_json(e.matrix())).collect(),
            b_povms: self
                .b_povms
                .iter()
                .map(|p| p.elements().iter().map(|e| matrix_to_json(e.matrix())).collect())
                .collect(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("strategy serializes")
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json_string())?;
        Ok(())
    }
}

/// JSON form: `a_povm` lists M_j, `b_povms[j][i]` is N_{i|j}; complex
/// entries as `[re, im]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyFile {
    pub a_povm: Vec<JsonMatrix>,
    pub b_povms: Vec<Vec<JsonMatrix>>,
}

impl StrategyFile {
    pub fn into_strategy(self, tol: &Tolerances) -> Result<SequentialStrategy> {
        let parse = |m: &JsonMatrix| HermitianOperator::with_tolerance(matrix_from_json(m)?, tol.herm);
        let a = self.a_povm.iter().map(parse).collect::<Result<Vec<_>>>()?;
        let b = self
            .b_povms
            .iter()
            .map(|row| row.iter().map(parse).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        SequentialStrategy::from_operators(a, b, tol)
    }
}

pub fn parse_strategy(text: &str, tol: &Tolerances) -> Result<SequentialStrategy> {
    let file: StrategyFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.into_strategy(tol)
}

pub fn load_strategy(path: impl AsRef<Path>, tol: &Tolerances) -> Result<SequentialStrategy> {
    let text = std::fs::read_to_string(path)?;
    parse_strategy(&text, tol)
}

/// Adds an outcome along |λ⟩: M_j′ = (𝟙 − ε|λ⟩⟨λ|)M_j(𝟙 − ε|λ⟩⟨λ|),
/// M_n = ε(2 − ε)|λ⟩⟨λ| with B-measurement `b_replacement` on that outcome.
pub fn perturb_strategy(
    strategy: &SequentialStrategy,
    direction: &ComplexMatrix,
    b_replacement: &Povm,
    epsilon: f64,
) -> Result<SequentialStrategy> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::invalid(format!("epsilon {epsilon} outside (0, 0.5)")));
    }
    let (dim_a, dim_b) = strategy.dims();
    if direction.rows() != dim_a || direction.cols() != 1 {
        return Err(Error::dims(format!("direction must be a ket of dimension {dim_a}")));
    }
    if b_replacement.dim() != dim_b || b_replacement.len() != strategy.hypotheses() {
        return Err(Error::dims("replacement B-measurement does not match the strategy"));
    }
    let lam = direction.normalized();
    let proj = HermitianOperator::projector(&lam);
    let shrink = (&HermitianOperator::identity(dim_a) - &proj.scale(epsilon)).into_matrix();
    let mut elements: Vec<HermitianOperator> = strategy
        .a_povm
        .elements()
        .iter()
        .map(|m| m.conjugate_by(&shrink))
        .collect();
    elements.push(proj.scale(epsilon * (2.0 - epsilon)));
    let mut b = strategy.b_povms.clone();
    b.push(b_replacement.clone());
    SequentialStrategy::new(Povm::new(elements)?, b)
}
