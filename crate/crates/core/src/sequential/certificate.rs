//! Search for a direction |λ⟩ on A and a B-measurement {Ñ_k} with
//! ⟨λ|Γ^A|λ⟩ < Σ_k p_k Tr(⟨λ|ρ_k|λ⟩ Ñ_k). Such a pair proves the strategy
//! suboptimal; failing to find one is numerical evidence of optimality.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::evaluate::gamma_a_sym;
use super::SequentialStrategy;
use crate::ensembles::Ensemble;
use crate::error::Result;
use crate::global::{helstrom_two_state, solve_weighted, Povm, SolverOptions};
use crate::operator::{sandwich_a, ComplexMatrix, HermitianOperator, Tolerances, C64};
use crate::report::{ConditionReport, Verdict, Witness};

pub const LABEL_SEQUENTIAL_OPTIMALITY: &str = "sequential_optimality";

#[derive(Clone, Debug)]
pub struct CertifyOptions {
    /// Random starting directions in addition to the grid.
    pub search_budget: usize,
    pub seed: u64,
    /// Bloch-angle grid (θ, φ) used when A is a qubit.
    pub grid: (usize, usize),
    /// Number of best candidates refined by local search.
    pub refine_top: usize,
    /// Local search stops once its step falls below this.
    pub min_step: f64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            search_budget: 2048,
            seed: 0,
            grid: (64, 128),
            refine_top: 10,
            min_step: 1e-9,
        }
    }
}

/// Evaluation of the certificate inequality along one direction.
#[derive(Clone, Debug)]
pub struct DirectionValue {
    pub direction: ComplexMatrix,
    /// ⟨λ|Γ^A_sym|λ⟩.
    pub gamma_expectation: f64,
    /// max_Ñ Σ_k p_k Tr(τ_k Ñ_k), attained by `measurement`.
    pub inner_value: f64,
    /// Certified upper bound on the inner maximum.
    pub inner_bound: f64,
    /// Σ_k p_k Tr τ_k = ⟨λ|ρ^A|λ⟩.
    pub weight: f64,
    pub measurement: Povm,
}

impl DirectionValue {
    /// ⟨λ|Γ^A|λ⟩ minus the inner upper bound: never optimistic.
    pub fn margin(&self) -> f64 {
        self.gamma_expectation - self.inner_bound
    }

    /// ⟨λ|Γ^A|λ⟩ minus the achieved inner value: negative values are a proof
    /// of suboptimality.
    pub fn achieved_margin(&self) -> f64 {
        self.gamma_expectation - self.inner_value
    }
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub report: ConditionReport,
    /// The direction with the smallest margin found.
    pub binding: DirectionValue,
    pub evaluations: usize,
    pub discarded: usize,
}

/// Evaluates the inner problem at the (normalized) direction `lambda`.
pub fn evaluate_direction(
    ensemble: &Ensemble,
    gamma_sym: &HermitianOperator,
    lambda: &ComplexMatrix,
) -> Result<(DirectionValue, bool)> {
    let dims = ensemble.require_bipartite()?;
    let lam = lambda.normalized();
    let ops: Vec<HermitianOperator> = ensemble
        .states()
        .iter()
        .zip(ensemble.priors())
        .map(|(rho, p)| Ok(sandwich_a(rho, &lam, dims)?.scale(*p)))
        .collect::<Result<_>>()?;
    let weight: f64 = ops.iter().map(|o| o.trace()).sum();
    let (measurement, inner_value, inner_bound, converged) = if ops.len() == 2 {
        let h = helstrom_two_state(1.0, &ops[0], 1.0, &ops[1])?;
        (h.povm, h.p_corr, h.p_corr, true)
    } else {
        let s = solve_weighted(&ops, &SolverOptions::default())?;
        (s.povm, s.value, s.dual_bound, s.converged)
    };
    Ok((
        DirectionValue {
            gamma_expectation: gamma_sym.expectation(&lam),
            direction: lam,
            inner_value,
            inner_bound,
            weight,
            measurement,
        },
        converged,
    ))
}

fn from_coords(x: &[f64]) -> ComplexMatrix {
    let d = x.len() / 2;
    let v: Vec<C64> = (0..d).map(|k| C64::new(x[2 * k], x[2 * k + 1])).collect();
    ComplexMatrix::ket(&v).normalized()
}

fn to_coords(v: &ComplexMatrix) -> Vec<f64> {
    v.as_slice().iter().flat_map(|z| [z.re, z.im]).collect()
}

fn bloch_ket(theta: f64, phi: f64) -> ComplexMatrix {
    ComplexMatrix::ket(&[
        C64::new((theta / 2.0).cos(), 0.0),
        C64::from_polar((theta / 2.0).sin(), phi),
    ])
}

struct Searcher<'a> {
    ensemble: &'a Ensemble,
    gamma_sym: &'a HermitianOperator,
}

impl Searcher<'_> {
    /// Margin at a direction; `None` if the inner solve failed.
    fn eval(&self, lambda: &ComplexMatrix) -> Option<DirectionValue> {
        match evaluate_direction(self.ensemble, self.gamma_sym, lambda) {
            Ok((v, true)) => Some(v),
            _ => None,
        }
    }

    /// Compass search on the real coordinates of |λ⟩.
    fn refine(&self, start: DirectionValue, min_step: f64) -> (DirectionValue, usize) {
        let mut best = start;
        let mut x = to_coords(&best.direction);
        let mut step = 0.05;
        let mut evals = 0;
        while step >= min_step && evals < 20_000 {
            let mut improved = false;
            for k in 0..x.len() {
                for sign in [1.0, -1.0] {
                    let mut trial = x.clone();
                    trial[k] += sign * step;
                    evals += 1;
                    if let Some(v) = self.eval(&from_coords(&trial)) {
                        if v.margin() < best.margin() {
                            best = v;
                            x = to_coords(&best.direction);
                            improved = true;
                            break;
                        }
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        (best, evals)
    }
}

/// Numerical check of ⟨λ|Γ^A|λ⟩ ≥ max_Ñ Σ_k p_k Tr(⟨λ|ρ_k|λ⟩ Ñ_k) for all |λ⟩.
pub fn certify_sequential_optimal(
    ensemble: &Ensemble,
    strategy: &SequentialStrategy,
    search_budget: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<ConditionReport> {
    let opts = CertifyOptions {
        search_budget,
        seed,
        ..CertifyOptions::default()
    };
    Ok(certify_with(ensemble, strategy, &opts, tol)?.report)
}

pub fn certify_with(
    ensemble: &Ensemble,
    strategy: &SequentialStrategy,
    opts: &CertifyOptions,
    tol: &Tolerances,
) -> Result<Certificate> {
    let (dim_a, _) = strategy.check_compatible(ensemble)?;
    let gamma_sym = gamma_a_sym(ensemble, strategy)?;
    let searcher = Searcher {
        ensemble,
        gamma_sym: &gamma_sym,
    };

    let mut starts: Vec<ComplexMatrix> = Vec::new();
    if dim_a == 2 {
        let (nt, np) = opts.grid;
        for a in 0..nt {
            let theta = std::f64::consts::PI * (a as f64 + 0.5) / nt as f64;
            for b in 0..np {
                let phi = 2.0 * std::f64::consts::PI * b as f64 / np as f64;
                starts.push(bloch_ket(theta, phi));
            }
        }
    }
    for k in 0..dim_a {
        starts.push(ComplexMatrix::basis_ket(dim_a, k));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.search_budget {
        let x: Vec<f64> = (0..2 * dim_a).map(|_| StandardNormal.sample(&mut rng)).collect();
        starts.push(from_coords(&x));
    }

    let evaluated: Vec<Option<DirectionValue>> = starts.par_iter().map(|l| searcher.eval(l)).collect();
    let mut discarded = evaluated.iter().filter(|v| v.is_none()).count();
    let mut evaluations = evaluated.len();
    let mut pool: Vec<DirectionValue> = evaluated.into_iter().flatten().collect();
    pool.sort_by(|a, b| a.margin().total_cmp(&b.margin()));
    pool.truncate(opts.refine_top.max(1));

    let refined: Vec<(DirectionValue, usize)> = pool
        .into_par_iter()
        .map(|v| searcher.refine(v, opts.min_step))
        .collect();
    evaluations += refined.iter().map(|(_, e)| e).sum::<usize>();
    let binding = refined
        .into_iter()
        .map(|(v, _)| v)
        .min_by(|a, b| a.margin().total_cmp(&b.margin()));
    let binding = match binding {
        Some(b) => b,
        None => {
            discarded += 1;
            return Err(crate::error::Error::Numerical(format!(
                "every inner solve failed ({discarded} directions)"
            )));
        }
    };

    let mut report = ConditionReport::new();
    let margin = binding.margin();
    let mut verdict = Verdict::new(LABEL_SEQUENTIAL_OPTIMALITY, margin, tol.psd);
    if !verdict.pass {
        verdict = verdict.with_witness(Witness::DirectionAndMeasurement {
            direction: binding.direction.clone(),
            measurement: binding.measurement.clone(),
        });
        if binding.achieved_margin() < -tol.psd {
            report.note("violation attained by the witness measurement: strategy is suboptimal");
        }
    } else {
        report.note("no violating direction found: numerical evidence of optimality, not a proof");
    }
    report.push(verdict);
    report.scalar("gamma_expectation", binding.gamma_expectation);
    report.scalar("inner_value", binding.inner_value);
    report.scalar("inner_bound", binding.inner_bound);
    report.scalar("direction_weight", binding.weight);
    if binding.weight > 0.0 {
        report.scalar("normalized_gamma_expectation", binding.gamma_expectation / binding.weight);
        report.scalar("normalized_inner_value", binding.inner_value / binding.weight);
    }
    report.scalar("evaluations", evaluations as f64);
    report.scalar("discarded_evaluations", discarded as f64);
    if discarded > 0 {
        report.note(format!("{discarded} inner solves did not converge and were skipped"));
    }
    Ok(Certificate {
        report,
        binding,
        evaluations,
        discarded,
    })
}
