//! Evaluate a one-way strategy (Alice measures, tells Bob the outcome,
//! Bob names the state) and test the necessary optimality conditions.

use seqdisc::cases::{double_trine_nonoptimal_strategy, double_trine_optimal_strategy};
use seqdisc::ensembles::{builtin_ensemble, EnsembleName};
use seqdisc::operator::Tolerances;
use seqdisc::sequential::{
    bayes_posteriors, check_necessary_a, check_necessary_b, gamma_a, p_corr_sequential, SequentialStrategy,
};

fn describe(label: &str, s: &SequentialStrategy) -> seqdisc::Result<()> {
    let e = builtin_ensemble(EnsembleName::DoubleTrine);
    let tol = Tolerances::default();
    println!("{label}");
    println!("  p_corr       = {:.10}", p_corr_sequential(&e, s)?);
    println!("  B conditions = {}", check_necessary_b(&e, s, &tol)?.passed());
    println!("  A conditions = {}", check_necessary_a(&e, s, &tol)?.passed());
    let g = gamma_a(&e, s)?;
    println!("  Γ^A diagonal = {:.6} {:.6}", g[(0, 0)].re, g[(1, 1)].re);
    let (post, _) = bayes_posteriors(&e, s.m(0))?;
    println!("  posteriors after outcome 0 = {post:.4?}");
    Ok(())
}

fn main() -> seqdisc::Result<()> {
    describe("anti-trine on A, Helstrom on B", &double_trine_optimal_strategy())?;
    describe("trine on A, mirror triple on B", &double_trine_nonoptimal_strategy())?;
    Ok(())
}
