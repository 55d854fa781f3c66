//! Three Bell states: both parties measure in the computational basis and
//! |Ψ₂⟩ is never named.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{CaseOptions, CaseStrategy, CaseStudyResult};
use crate::ensembles::{bell_ket, builtin_ensemble, Ensemble, EnsembleName};
use crate::error::{Error, Result};
use crate::operator::{c64, contract_b, psd_margin, tensor_product, ComplexMatrix, HermitianOperator};
use crate::report::{ConditionReport, Verdict};
use crate::sequential::{
    certify_with, check_necessary_a, check_necessary_b, gamma_a, p_corr_sequential, random_povm,
    SequentialStrategy,
};

fn z_projectors() -> [HermitianOperator; 2] {
    [
        HermitianOperator::projector(&ComplexMatrix::basis_ket(2, 0)),
        HermitianOperator::projector(&ComplexMatrix::basis_ket(2, 1)),
    ]
}

fn x_projectors() -> [HermitianOperator; 2] {
    let s = 1.0 / 2f64.sqrt();
    [
        HermitianOperator::projector(&ComplexMatrix::ket(&[c64(s, 0.0), c64(s, 0.0)])),
        HermitianOperator::projector(&ComplexMatrix::ket(&[c64(s, 0.0), c64(-s, 0.0)])),
    ]
}

/// A-measurement and B-measurements of the three-state strategy.
pub fn bell3_strategy_operators() -> (Vec<HermitianOperator>, Vec<Vec<HermitianOperator>>) {
    let [p0, p1] = z_projectors();
    let zero = HermitianOperator::zeros(2);
    (
        vec![p0.clone(), p1.clone()],
        vec![
            vec![p0.clone(), p1.clone(), zero.clone()],
            vec![p1, p0, zero],
        ],
    )
}

/// Local strategy separating Bell states `a` and `b` (from |Ψ₀⟩, |Ψ₁⟩,
/// |Ψ₂⟩) perfectly: both parties measure Z, or X for the pair |Ψ₀⟩, |Ψ₂⟩
/// that Z cannot separate, and Bob compares outcomes.
pub fn bell_pair_strategy(a: usize, b: usize) -> Result<(Ensemble, SequentialStrategy)> {
    if a == b || a > 2 || b > 2 {
        return Err(Error::invalid(format!("Bell pair ({a}, {b}) must be two distinct indices below 3")));
    }
    let (a, b) = (a.min(b), a.max(b));
    let kets = [bell_ket(a), bell_ket(b)];
    let ens = Ensemble::from_kets(&kets, vec![0.5, 0.5], Some((2, 2)))?;
    let basis = if (a, b) == (0, 2) { x_projectors() } else { z_projectors() };
    // on the chosen basis the first state gives equal outcomes, the second
    // opposite ones (or the reverse); decide from the states themselves
    let rho_a = HermitianOperator::pure_state(&kets[0]);
    let same = rho_a.trace_with(&tensor_product(&basis[0], &basis[0])?)
        + rho_a.trace_with(&tensor_product(&basis[1], &basis[1])?);
    let first_equal = same > 0.5;
    let b_povms = (0..2)
        .map(|j| {
            let (eq, ne) = (basis[j].clone(), basis[1 - j].clone());
            if first_equal {
                vec![eq, ne]
            } else {
                vec![ne, eq]
            }
        })
        .collect();
    let strategy = SequentialStrategy::from_operators(basis.to_vec(), b_povms, &Default::default())?;
    Ok((ens, strategy))
}

pub fn bell3_strategy() -> Result<CaseStudyResult> {
    bell3_strategy_with(&CaseOptions::default())
}

pub fn bell3_strategy_with(opts: &CaseOptions) -> Result<CaseStudyResult> {
    let ens = builtin_ensemble(EnsembleName::Bell3);
    let (a, b) = bell3_strategy_operators();
    let strategy = SequentialStrategy::from_operators(a, b, &opts.tol)?;
    let p = p_corr_sequential(&ens, &strategy)?;
    let mut res = CaseStudyResult::new("bell3", CaseStrategy::Sequential(strategy.clone()), p);

    res.report("necessary_b", check_necessary_b(&ens, &strategy, &opts.tol)?);
    res.report("necessary_a", check_necessary_a(&ens, &strategy, &opts.tol)?);

    // every B-marginal is 𝟙/2, so c̃ = 1/3 for every Ñ and the condition
    // reads 𝟙 − σ̃ ⪰ 0
    let g = gamma_a(&ens, &strategy)?;
    let mut reduction = ConditionReport::new();
    let mut c_dev: f64 = 0.0;
    let mut worst = f64::INFINITY;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.certify.seed);
    for _ in 0..opts.certify.search_budget.max(1) {
        let n = random_povm(2, 3, &mut rng)?;
        let mut sigma = HermitianOperator::zeros(2);
        let mut c = 0.0;
        for (k, (rho, pk)) in ens.states().iter().zip(ens.priors()).enumerate() {
            let reduced = HermitianOperator::symmetrize(&contract_b(rho, n.element(k), (2, 2))?);
            c += pk * reduced.trace();
            sigma = &sigma + &reduced.scale(*pk);
        }
        c_dev = c_dev.max((c - 1.0 / 3.0).abs());
        let sigma = sigma.scale(1.0 / c);
        worst = worst.min(psd_margin(&(&HermitianOperator::identity(2) - &sigma))?);
    }
    reduction.push(Verdict::new("identity_minus_sigma", worst, opts.tol.psd));
    reduction.scalar("c_tilde_deviation", c_dev);
    res.report("identity_reduction", reduction);
    res.report("certificate", certify_with(&ens, &strategy, &opts.certify, &opts.tol)?.report);

    res.extra("gamma_a_deviation", g.max_abs_diff(&ComplexMatrix::identity(2).scale_real(1.0 / 3.0)));
    res.extra("c_tilde", 1.0 / 3.0);
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        let (pair, s) = bell_pair_strategy(a, b)?;
        res.extra(format!("pair_{a}{b}_p_corr"), p_corr_sequential(&pair, &s)?);
    }
    Ok(res)
}
