//! Unrestricted minimum-error discrimination: success probability, the
//! two-state Helstrom measurement, the square-root measurement, a general
//! solver and the optimality-condition checks.

mod povm;
mod solver;

pub use povm::Povm;
pub use solver::{solve_weighted, SolverOptions, WeightedSolution};

use crate::ensembles::Ensemble;
use crate::error::{Error, Result};
use crate::operator::{hermitian_eigen, pinv_sqrt, psd_margin, ComplexMatrix, HermitianOperator, Tolerances};
use crate::report::{ConditionReport, Verdict, Witness};

pub const LABEL_GAMMA_PSD: &str = "gamma_minus_weighted_state_psd";
pub const LABEL_PAIRWISE: &str = "pairwise_stationarity";
pub const LABEL_COMPLEMENTARY: &str = "complementary_slackness";

#[derive(Clone, Debug)]
pub struct GlobalSolution {
    pub povm: Povm,
    pub p_corr: f64,
    /// Σ_i p_i ρ_i π_i, symmetrized.
    pub gamma: HermitianOperator,
    pub iterations: usize,
    pub converged: bool,
    /// Upper bound on the optimal success probability from a feasible dual point.
    pub dual_bound: f64,
}

fn check_shape(ensemble: &Ensemble, povm: &Povm) -> Result<()> {
    if povm.len() != ensemble.len() {
        return Err(Error::dims(format!(
            "POVM has {} elements but the ensemble has {} states",
            povm.len(),
            ensemble.len()
        )));
    }
    if povm.dim() != ensemble.dim() {
        return Err(Error::dims(format!(
            "POVM acts on dimension {} but states have dimension {}",
            povm.dim(),
            ensemble.dim()
        )));
    }
    Ok(())
}

/// Σ_i p_i Tr(ρ_i π_i).
pub fn p_corr_global(ensemble: &Ensemble, povm: &Povm) -> Result<f64> {
    check_shape(ensemble, povm)?;
    Ok(ensemble
        .weighted_states()
        .iter()
        .zip(povm.elements())
        .map(|(w, p)| w.trace_with(p))
        .sum())
}

/// Γ = Σ_i p_i ρ_i π_i (not Hermitian unless the POVM is stationary).
pub fn gamma_matrix(ensemble: &Ensemble, povm: &Povm) -> Result<ComplexMatrix> {
    check_shape(ensemble, povm)?;
    let n = ensemble.dim();
    let mut g = ComplexMatrix::zeros(n, n);
    for (w, p) in ensemble.weighted_states().iter().zip(povm.elements()) {
        g += &w.mul(p);
    }
    Ok(g)
}

fn solution(ensemble: &Ensemble, povm: Povm, iterations: usize, converged: bool, dual_bound: f64) -> Result<GlobalSolution> {
    let p_corr = p_corr_global(ensemble, &povm)?;
    let gamma = HermitianOperator::symmetrize(&gamma_matrix(ensemble, &povm)?);
    Ok(GlobalSolution {
        povm,
        p_corr,
        gamma,
        iterations,
        converged,
        dual_bound,
    })
}

/// Optimal measurement for two weighted states: Π₀ projects onto the
/// positive eigenspace of p₀ρ₀ − p₁ρ₁. Weights need not sum to one.
pub fn helstrom_two_state(
    p0: f64,
    rho0: &HermitianOperator,
    p1: f64,
    rho1: &HermitianOperator,
) -> Result<GlobalSolution> {
    if rho0.dim() != rho1.dim() {
        return Err(Error::dims("Helstrom states differ in dimension"));
    }
    let w0 = rho0.scale(p0);
    let w1 = rho1.scale(p1);
    let d = &w0 - &w1;
    let eig = hermitian_eigen(&d)?;
    let pi0 = eig.spectral_projector(|x| x > 0.0);
    let pi1 = &HermitianOperator::identity(d.dim()) - &pi0;
    let trace_norm: f64 = eig.values.iter().map(|x| x.abs()).sum();
    let p_corr = 0.5 * (w0.trace() + w1.trace() + trace_norm);
    let povm = Povm::from_elements_unchecked(vec![pi0, pi1]);
    let mut g = w0.mul(povm.element(0));
    g += &w1.mul(povm.element(1));
    Ok(GlobalSolution {
        povm,
        p_corr,
        gamma: HermitianOperator::symmetrize(&g),
        iterations: 0,
        converged: true,
        dual_bound: p_corr,
    })
}

/// S^{-1/2} p_i ρ_i S^{-1/2} with S = Σ p_i ρ_i; the projector onto ker S
/// is added to element 0.
pub fn square_root_measurement(ensemble: &Ensemble) -> Result<Povm> {
    let s = ensemble.average_state();
    let scale = s.matrix().max_abs().max(1e-300);
    let si = pinv_sqrt(&s, 1e-12 * scale)?;
    let elements = ensemble
        .weighted_states()
        .iter()
        .map(|w| w.conjugate_by(si.matrix()))
        .collect();
    Povm::completed(elements, 0)
}

/// Optimal global measurement with default solver settings.
pub fn solve_min_error(ensemble: &Ensemble, max_iters: usize, tol: f64) -> Result<GlobalSolution> {
    solve_min_error_with(
        ensemble,
        &SolverOptions {
            max_iters,
            tol,
            seed: None,
        },
    )
}

pub fn solve_min_error_with(ensemble: &Ensemble, opts: &SolverOptions) -> Result<GlobalSolution> {
    let sol = solve_weighted(&ensemble.weighted_states(), opts)?;
    solution(ensemble, sol.povm, sol.iterations, sol.converged, sol.dual_bound)
}

/// Checks the three optimality conditions for `povm`:
/// Γ_sym − p_jρ_j ⪰ 0, π_i(p_iρ_i − p_jρ_j)π_j = 0 and (Γ − p_jρ_j)π_j = 0.
pub fn check_global_optimality(ensemble: &Ensemble, povm: &Povm, tol: &Tolerances) -> Result<ConditionReport> {
    check_shape(ensemble, povm)?;
    let weighted = ensemble.weighted_states();
    let n = ensemble.dim();
    let mut report = ConditionReport::new();

    // Γ_sym = Σ p_i ½{ρ_i, π_i}
    let gamma_sym = HermitianOperator::sum(
        n,
        &weighted
            .iter()
            .zip(povm.elements())
            .map(|(w, p)| w.jordan(p))
            .collect::<Vec<_>>(),
    );
    let mut worst = f64::INFINITY;
    let mut worst_vec = None;
    for w in &weighted {
        let eig = hermitian_eigen(&(&gamma_sym - w))?;
        if eig.values[0] < worst {
            worst = eig.values[0];
            worst_vec = Some(eig.vector(0));
        }
    }
    let mut v = Verdict::new(LABEL_GAMMA_PSD, worst, tol.psd);
    if !v.pass {
        if let Some(vec) = worst_vec {
            v = v.with_witness(Witness::Vector(vec));
        }
    }
    report.push(v);

    let mut pair_resid: f64 = 0.0;
    for i in 0..weighted.len() {
        for j in (i + 1)..weighted.len() {
            let diff = &weighted[i] - &weighted[j];
            if diff.matrix().max_abs() <= tol.herm {
                report.note(format!("pair ({i}, {j}) skipped: identical weighted states"));
                continue;
            }
            let r = povm.element(i).matrix().matmul(diff.matrix()).matmul(povm.element(j).matrix());
            pair_resid = pair_resid.max(r.max_abs());
        }
    }
    report.push(Verdict::new(LABEL_PAIRWISE, -pair_resid, tol.psd));

    let gamma = gamma_matrix(ensemble, povm)?;
    let mut slack: f64 = 0.0;
    for (w, p) in weighted.iter().zip(povm.elements()) {
        let r = (&gamma - w.matrix()).matmul(p.matrix());
        slack = slack.max(r.max_abs());
    }
    report.push(Verdict::new(LABEL_COMPLEMENTARY, -slack, tol.psd));
    report.scalar("p_corr", p_corr_global(ensemble, povm)?);
    report.scalar("gamma_hermiticity_defect", gamma.max_abs_diff(&gamma.adjoint()));
    Ok(report)
}

/// Minimum eigenvalue of Γ_sym − p_jρ_j over j.
pub fn gamma_margin(ensemble: &Ensemble, povm: &Povm) -> Result<f64> {
    let g = HermitianOperator::symmetrize(&gamma_matrix(ensemble, povm)?);
    ensemble
        .weighted_states()
        .iter()
        .map(|w| psd_margin(&(&g - w)))
        .try_fold(f64::INFINITY, |acc, m| m.map(|m| acc.min(m)))
}
