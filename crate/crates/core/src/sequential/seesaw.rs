//! Alternating optimization: B-measurements optimal for each branch's
//! posteriors, then the A-measurement optimal for the induced states.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::evaluate::{branch_operators, induced_operators, p_corr_sequential, REACHABLE_EPS};
use super::SequentialStrategy;
use crate::ensembles::Ensemble;
use crate::error::{Error, Result};
use crate::global::{solve_weighted, Povm, SolverOptions};
use crate::operator::{ComplexMatrix, HermitianOperator, C64};

#[derive(Clone, Debug)]
pub struct SeesawOptions {
    pub restarts: usize,
    pub seed: u64,
    pub max_rounds: usize,
    /// A run stops once a full round improves p_corr by less than this.
    pub tol: f64,
    /// Number of A-outcomes; defaults to hypotheses + 1.
    pub a_outcomes: Option<usize>,
}

impl Default for SeesawOptions {
    fn default() -> Self {
        SeesawOptions {
            restarts: 50,
            seed: 0,
            max_rounds: 300,
            tol: 1e-12,
            a_outcomes: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SeesawRun {
    pub strategy: SequentialStrategy,
    pub p_corr: f64,
    /// p_corr after every half-step.
    pub history: Vec<f64>,
    pub rounds: usize,
}

impl SeesawRun {
    /// Largest decrease between consecutive half-steps (0 when monotone).
    pub fn max_decrease(&self) -> f64 {
        self.history
            .windows(2)
            .map(|w| w[0] - w[1])
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug)]
pub struct SeesawResult {
    pub best: SeesawRun,
    pub best_restart: usize,
    pub runs: Vec<SeesawRun>,
}

/// Seed for restart `r`, mixed so nearby restarts get unrelated streams.
pub fn sub_seed(seed: u64, r: u64) -> u64 {
    let mut z = seed ^ r.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn solver_opts() -> SolverOptions {
    SolverOptions {
        max_iters: 2000,
        tol: 1e-11,
        seed: None,
    }
}

/// POVM with `outcomes` elements built from random PSD operators.
pub fn random_povm(dim: usize, outcomes: usize, rng: &mut ChaCha8Rng) -> Result<Povm> {
    let elements = (0..outcomes)
        .map(|_| {
            let g = ComplexMatrix::from_fn(dim, dim, |_, _| {
                C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
            });
            HermitianOperator::symmetrize(&g.matmul(&g.adjoint()))
        })
        .collect();
    Povm::normalized_from(elements)
}

fn branch_value(ops: &[HermitianOperator], povm: &Povm) -> f64 {
    ops.iter().zip(povm.elements()).map(|(w, n)| w.trace_with(n)).sum()
}

/// Best B-measurement for each branch; a branch keeps its previous
/// measurement unless the new one does at least as well.
fn b_step(ensemble: &Ensemble, a: &Povm, previous: Option<&[Povm]>) -> Result<Vec<Povm>> {
    let dim_b = ensemble.require_bipartite()?.1;
    let hyp = ensemble.len();
    (0..a.len())
        .map(|j| {
            let ops = branch_operators(ensemble, a.element(j))?;
            let prev = previous.map(|p| p[j].clone());
            let total: f64 = ops.iter().map(|o| o.trace()).sum();
            if total <= REACHABLE_EPS {
                return Ok(prev.unwrap_or_else(|| Povm::constant_guess(dim_b, hyp, 0)));
            }
            let new = solve_weighted(&ops, &solver_opts())?.povm;
            Ok(match prev {
                Some(p) if branch_value(&ops, &p) > branch_value(&ops, &new) => p,
                _ => new,
            })
        })
        .collect()
}

fn a_step(ensemble: &Ensemble, strategy: &SequentialStrategy) -> Result<Povm> {
    let ks = induced_operators(ensemble, strategy)?;
    Ok(solve_weighted(&ks, &solver_opts())?.povm)
}

/// Runs the alternation from an initial A-measurement.
pub fn seesaw_from(ensemble: &Ensemble, initial_a: Povm, max_rounds: usize, tol: f64) -> Result<SeesawRun> {
    let b = b_step(ensemble, &initial_a, None)?;
    let mut strategy = SequentialStrategy::new(initial_a, b)?;
    let mut p = p_corr_sequential(ensemble, &strategy)?;
    let mut history = vec![p];
    let mut rounds = 0;
    while rounds < max_rounds {
        rounds += 1;
        let start = p;

        let a = a_step(ensemble, &strategy)?;
        let candidate = SequentialStrategy::new(a, strategy.b_povms().to_vec())?;
        let pc = p_corr_sequential(ensemble, &candidate)?;
        if pc >= p {
            strategy = candidate;
            p = pc;
        }
        history.push(p);

        let b = b_step(ensemble, strategy.a_povm(), Some(strategy.b_povms()))?;
        let candidate = SequentialStrategy::new(strategy.a_povm().clone(), b)?;
        let pc = p_corr_sequential(ensemble, &candidate)?;
        if pc >= p {
            strategy = candidate;
            p = pc;
        }
        history.push(p);

        if p - start < tol {
            break;
        }
    }
    Ok(SeesawRun {
        strategy,
        p_corr: p,
        history,
        rounds,
    })
}

/// Best strategy over seeded random restarts and its success probability.
pub fn seesaw_optimize(
    ensemble: &Ensemble,
    restarts: usize,
    seed: u64,
    max_rounds: usize,
    tol: f64,
) -> Result<(SequentialStrategy, f64)> {
    let res = seesaw_optimize_with(
        ensemble,
        &SeesawOptions {
            restarts,
            seed,
            max_rounds,
            tol,
            a_outcomes: None,
        },
    )?;
    Ok((res.best.strategy, res.best.p_corr))
}

pub fn seesaw_optimize_with(ensemble: &Ensemble, opts: &SeesawOptions) -> Result<SeesawResult> {
    let (dim_a, _) = ensemble.require_bipartite()?;
    if opts.restarts == 0 {
        return Err(Error::invalid("see-saw needs at least one restart"));
    }
    let outcomes = opts.a_outcomes.unwrap_or(ensemble.len() + 1);
    if outcomes == 0 {
        return Err(Error::invalid("A-measurement needs at least one outcome"));
    }
    let runs = (0..opts.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(opts.seed, r as u64));
            let a = random_povm(dim_a, outcomes, &mut rng)?;
            seesaw_from(ensemble, a, opts.max_rounds, opts.tol)
        })
        .collect::<Result<Vec<_>>>()?;
    // first restart wins ties, so the result does not depend on scheduling
    let mut best_restart = 0;
    for (r, run) in runs.iter().enumerate() {
        if run.p_corr > runs[best_restart].p_corr {
            best_restart = r;
        }
    }
    Ok(SeesawResult {
        best: runs[best_restart].clone(),
        best_restart,
        runs,
    })
}
