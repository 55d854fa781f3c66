//! Two copies of the trine states.

use std::f64::consts::PI;

use super::{CaseOptions, CaseStrategy, CaseStudyResult};
use super::trine_bound::trine_priors;
use crate::ensembles::{anti_trine_ket, builtin_ensemble, trine_ket, trine_rotation, EnsembleName};
use crate::error::Result;
use crate::global::{
    check_global_optimality, p_corr_global, solve_min_error, square_root_measurement, Povm,
};
use crate::operator::{c64, hermitian_eigen, tensor_product, ComplexMatrix, HermitianOperator, C64};
use crate::sequential::{
    certify_with, check_necessary_a, check_necessary_b, gamma_a, induced_operators, p_corr_sequential,
    perturb_strategy, SequentialStrategy,
};

/// Probability of telling two equiprobable trine states apart.
fn p_helstrom() -> f64 {
    0.5 * (1.0 + 3f64.sqrt() / 2.0)
}

/// Helstrom ket |φ_{i|j}⟩ for hypothesis i on branch j (i ≠ j).
pub fn helstrom_ket(i: usize, j: usize) -> ComplexMatrix {
    assert!(i < 3 && j < 3 && i != j, "Helstrom ket needs distinct indices below 3");
    let base = [PI / 2.0, PI / 6.0, -PI / 6.0][j];
    // the lower remaining index takes the + sign
    let lower = (0..3).find(|&k| k != j).unwrap();
    let sign = if i == lower { 1.0 } else { -1.0 };
    let s = 1.0 / 2f64.sqrt();
    ComplexMatrix::ket(&[c64(s, 0.0), C64::from_polar(sign * s, base)])
}

/// {(2/3)|ψ_j⟩⟨ψ_j|}.
pub fn trine_measurement() -> Povm {
    let elements = (0..3)
        .map(|j| HermitianOperator::projector(&trine_ket(j)).scale(2.0 / 3.0))
        .collect();
    Povm::new(elements).expect("trine measurement is a POVM")
}

/// Mirror-symmetric parameter of the non-optimal second step.
pub fn mirror_parameter() -> f64 {
    1.0 / (5.0 * 3f64.sqrt())
}

/// |Φ_j⟩ = (|00⟩ + ω^j(|01⟩+|10⟩)/√2 + ω^{2j}|11⟩)/√3.
pub fn phi_ket(j: usize) -> ComplexMatrix {
    let w = C64::from_polar(1.0, 2.0 * PI * j as f64 / 3.0);
    let r3 = 1.0 / 3f64.sqrt();
    let mid = w * (r3 / 2f64.sqrt());
    ComplexMatrix::ket(&[c64(r3, 0.0), mid, mid, w * w * r3])
}

/// Anti-trine first step, then Helstrom between the two surviving states.
pub fn double_trine_optimal_strategy() -> SequentialStrategy {
    let a: Vec<HermitianOperator> = (0..3)
        .map(|j| HermitianOperator::projector(&anti_trine_ket(j)).scale(2.0 / 3.0))
        .collect();
    let b = (0..3)
        .map(|j| {
            (0..3)
                .map(|i| {
                    if i == j {
                        HermitianOperator::zeros(2)
                    } else {
                        HermitianOperator::projector(&helstrom_ket(i, j))
                    }
                })
                .collect()
        })
        .collect();
    SequentialStrategy::from_operators(a, b, &Default::default()).expect("optimal double trine strategy is valid")
}

/// Trine measurement on A, then the mirror-symmetric measurement on B.
pub fn double_trine_nonoptimal_strategy() -> SequentialStrategy {
    let a = mirror_parameter();
    let psi = trine_ket(0);
    let perp = anti_trine_ket(0);
    let i = c64(0.0, 1.0);
    let plus = &psi.scale_real(a) - &perp.scale(i);
    let minus = &psi.scale_real(a) + &perp.scale(i);
    let branch0 = [
        HermitianOperator::projector(&psi).scale(1.0 - a * a),
        HermitianOperator::projector(&plus).scale(0.5),
        HermitianOperator::projector(&minus).scale(0.5),
    ];
    let u = trine_rotation();
    let mut b = Vec::with_capacity(3);
    let mut uj = ComplexMatrix::identity(2);
    for j in 0..3 {
        let mut ops = vec![HermitianOperator::zeros(2); 3];
        for (k, n) in branch0.iter().enumerate() {
            ops[(k + j) % 3] = n.conjugate_by(&uj);
        }
        b.push(ops);
        uj = u.matmul(&uj);
    }
    SequentialStrategy::from_operators(trine_measurement().elements().to_vec(), b, &Default::default())
        .expect("mirror-symmetric strategy is valid")
}

/// max_{i,j} |Tr(ρ_i N_{i|j}) − f(i, j)|.
fn success_table_deviation(strategy: &SequentialStrategy, f: impl Fn(usize, usize) -> f64) -> f64 {
    let mut dev: f64 = 0.0;
    for i in 0..3 {
        let rho = HermitianOperator::pure_state(&trine_ket(i));
        for j in 0..3 {
            dev = dev.max((rho.trace_with(strategy.n(i, j)) - f(i, j)).abs());
        }
    }
    dev
}

pub fn double_trine_optimal() -> Result<CaseStudyResult> {
    double_trine_optimal_with(&CaseOptions::default())
}

pub fn double_trine_optimal_with(opts: &CaseOptions) -> Result<CaseStudyResult> {
    let ens = builtin_ensemble(EnsembleName::DoubleTrine);
    let strategy = double_trine_optimal_strategy();
    let p = p_corr_sequential(&ens, &strategy)?;
    let ph = p_helstrom();

    let mut res = CaseStudyResult::new("double_trine_optimal", CaseStrategy::Sequential(strategy.clone()), p);
    res.report("necessary_b", check_necessary_b(&ens, &strategy, &opts.tol)?);
    res.report("necessary_a", check_necessary_a(&ens, &strategy, &opts.tol)?);
    let cert = certify_with(&ens, &strategy, &opts.certify, &opts.tol)?;
    res.report("certificate", cert.report);

    res.extra("p_helstrom", ph);
    res.extra("p_corr_closed_form", (2.0 + 3f64.sqrt()) / 4.0);
    res.extra(
        "success_table_deviation",
        success_table_deviation(&strategy, |i, j| if i == j { 0.0 } else { ph }),
    );
    let g = gamma_a(&ens, &strategy)?;
    res.extra(
        "gamma_a_deviation",
        g.max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5 * ph)),
    );
    res.extra(
        "helstrom_symmetry_distance",
        helstrom_ket(0, 1).distance_up_to_phase(&trine_rotation().matmul(&helstrom_ket(2, 0))),
    );
    res.extra("binding_theta", bloch_theta(&cert.binding.direction));
    res.extra("binding_phi", bloch_phi(&cert.binding.direction));
    res.extra("binding_inner_value_normalized", cert.binding.inner_value / cert.binding.weight);
    // priors induced on B at the binding direction, against the worst case
    // of the two-state bound
    let lam = cert.binding.direction.normalized();
    let mut q: Vec<f64> = (0..3).map(|k| lam.inner(&trine_ket(k)).norm_sqr()).collect();
    let total: f64 = q.iter().sum();
    q.iter_mut().for_each(|x| *x /= total);
    q.sort_by(f64::total_cmp);
    let mut worst = trine_priors(-PI / 3.0).to_vec();
    worst.sort_by(f64::total_cmp);
    res.extra(
        "binding_prior_distance",
        q.iter().zip(&worst).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max),
    );
    Ok(res)
}

fn bloch_theta(v: &ComplexMatrix) -> f64 {
    2.0 * v[(1, 0)].norm().atan2(v[(0, 0)].norm())
}

fn bloch_phi(v: &ComplexMatrix) -> f64 {
    (v[(1, 0)] * v[(0, 0)].conj()).arg()
}

pub fn double_trine_global() -> Result<CaseStudyResult> {
    let ens = builtin_ensemble(EnsembleName::DoubleTrine);
    let phis: Vec<ComplexMatrix> = (0..3).map(phi_ket).collect();
    let povm = Povm::from_kets(&phis, 0)?;
    let p = p_corr_global(&ens, &povm)?;

    let mut res = CaseStudyResult::new("double_trine_global", CaseStrategy::Global(povm.clone()), p);
    res.report("global_optimality", check_global_optimality(&ens, &povm, &Default::default())?);

    let analytic = 0.5 + 2f64.sqrt() / 3.0;
    res.extra("p_corr_closed_form", analytic);
    let mut ortho: f64 = 0.0;
    for (j, a) in phis.iter().enumerate() {
        for (k, b) in phis.iter().enumerate() {
            let target = if j == k { 1.0 } else { 0.0 };
            ortho = ortho.max((a.inner(b) - c64(target, 0.0)).norm());
        }
    }
    res.extra("orthonormality_defect", ortho);
    let srm = square_root_measurement(&ens)?;
    let srm_dev = srm
        .elements()
        .iter()
        .zip(povm.elements())
        .map(|(a, b)| a.max_abs_diff(b))
        .fold(0.0, f64::max);
    res.extra("srm_deviation", srm_dev);
    res.extra("p_corr_square_root", p_corr_global(&ens, &srm)?);
    let solved = solve_min_error(&ens, 2000, 1e-10)?;
    res.extra("p_corr_solver", solved.p_corr);
    let seq = p_corr_sequential(&ens, &double_trine_optimal_strategy())?;
    res.extra("p_corr_sequential", seq);
    res.extra("sequential_ratio", seq / p);
    Ok(res)
}

/// Spectral analysis of the B-outcome-0 operator of the optimal strategy.
pub fn double_trine_overlap_analysis() -> Result<CaseStudyResult> {
    let strategy = double_trine_optimal_strategy();
    let pi0 = HermitianOperator::sum(
        4,
        &[
            tensor_product(strategy.m(1), strategy.n(0, 1))?,
            tensor_product(strategy.m(2), strategy.n(0, 2))?,
        ],
    );
    let eig = hermitian_eigen(&pi0)?;
    let phi0 = phi_ket(0);

    let (s, c) = (PI / 12.0).sin_cos();
    let r = 1.0 / 2f64.sqrt();
    let alpha = ComplexMatrix::ket(&[c64(c, 0.0), c64(r, 0.0), c64(r, 0.0), c64(c, 0.0)]).normalized();
    let beta = ComplexMatrix::ket(&[c64(s, 0.0), c64(r, 0.0), c64(-r, 0.0), c64(-s, 0.0)]).normalized();
    let psi00 = trine_ket(0).kron(&trine_ket(0));

    let mut res = CaseStudyResult::new("double_trine_overlap_analysis", CaseStrategy::Sequential(strategy), f64::NAN);
    let ens = builtin_ensemble(EnsembleName::DoubleTrine);
    res.p_corr = p_corr_sequential(&ens, res.sequential().unwrap())?;

    // spectrum is ascending: two zeros, then (2 - √3/2)/3, (2 + √3/2)/3
    res.extra("pi0_eigenvalue_high", eig.values[3]);
    res.extra("pi0_eigenvalue_low", eig.values[2]);
    res.extra("pi0_eigenvalue_high_closed_form", (2.0 + 3f64.sqrt() / 2.0) / 3.0);
    res.extra("pi0_eigenvalue_low_closed_form", (2.0 - 3f64.sqrt() / 2.0) / 3.0);
    res.extra("pi0_null_eigenvalue_max", eig.values[1].abs().max(eig.values[0].abs()));
    res.extra("alpha0_eigenvector_distance", eig.vector(3).distance_up_to_phase(&alpha));
    res.extra("beta0_eigenvector_distance", eig.vector(2).distance_up_to_phase(&beta));
    res.extra("alpha0_phi0_overlap_sq", alpha.inner(&phi0).norm_sqr());
    res.extra("phi0_pi0_expectation", pi0.expectation(&phi0));
    res.extra("alpha0_beta0_overlap", alpha.inner(&beta).norm());
    res.extra("beta0_psi0psi0_overlap", beta.inner(&psi00).norm());
    Ok(res)
}

pub fn double_trine_nonoptimal() -> Result<CaseStudyResult> {
    double_trine_nonoptimal_with(&CaseOptions::default())
}

pub fn double_trine_nonoptimal_with(opts: &CaseOptions) -> Result<CaseStudyResult> {
    let ens = builtin_ensemble(EnsembleName::DoubleTrine);
    let strategy = double_trine_nonoptimal_strategy();
    let p = p_corr_sequential(&ens, &strategy)?;

    let mut res = CaseStudyResult::new("double_trine_nonoptimal", CaseStrategy::Sequential(strategy.clone()), p);
    res.report("necessary_b", check_necessary_b(&ens, &strategy, &opts.tol)?);
    res.report("necessary_a", check_necessary_a(&ens, &strategy, &opts.tol)?);
    let cert = certify_with(&ens, &strategy, &opts.certify, &opts.tol)?;
    let failed = !cert.report.passed();
    res.report("certificate", cert.report);

    res.extra("mirror_parameter", mirror_parameter());
    res.extra(
        "success_table_deviation",
        success_table_deviation(&strategy, |i, j| 32.0 / 75.0 + if i == j { 42.0 / 75.0 } else { 0.0 }),
    );
    let g = gamma_a(&ens, &strategy)?;
    res.extra("gamma_a_deviation", g.max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.4)));
    let ks = induced_operators(&ens, &strategy)?;
    let k_dev = ks
        .iter()
        .enumerate()
        .map(|(j, k)| {
            let expected = &HermitianOperator::identity(2).scale(16.0 / 75.0)
                + &HermitianOperator::pure_state(&trine_ket(j)).scale(14.0 / 75.0);
            k.max_abs_diff(&expected)
        })
        .fold(0.0, f64::max);
    res.extra("induced_operator_deviation", k_dev);
    res.extra("certificate_achieved_margin", cert.binding.achieved_margin());

    if failed {
        let eps = 1e-3;
        let better = perturb_strategy(&strategy, &cert.binding.direction, &cert.binding.measurement, eps)?;
        let pb = p_corr_sequential(&ens, &better)?;
        res.extra("witness_epsilon", eps);
        res.extra("witness_p_corr", pb);
        res.extra("witness_improvement", pb - p);
    }
    Ok(res)
}
