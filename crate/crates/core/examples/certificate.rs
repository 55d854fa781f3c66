//! Search for a direction on A that proves a strategy suboptimal. For the
//! trine-based scheme the witness is turned into a better strategy.

use seqdisc::cases::{double_trine_nonoptimal_strategy, double_trine_optimal_strategy};
use seqdisc::ensembles::{builtin_ensemble, EnsembleName};
use seqdisc::operator::Tolerances;
use seqdisc::sequential::{certify_with, p_corr_sequential, perturb_strategy, CertifyOptions};

fn main() -> seqdisc::Result<()> {
    let e = builtin_ensemble(EnsembleName::DoubleTrine);
    let tol = Tolerances::default();
    let opts = CertifyOptions { search_budget: 512, ..Default::default() };

    let opt = certify_with(&e, &double_trine_optimal_strategy(), &opts, &tol)?;
    println!(
        "optimal scheme: pass = {}, worst margin = {:.2e} over {} directions",
        opt.report.passed(),
        opt.report.worst_margin(),
        opt.evaluations
    );

    let s = double_trine_nonoptimal_strategy();
    let cert = certify_with(&e, &s, &opts, &tol)?;
    println!(
        "trine scheme:   pass = {}, achieved margin = {:.4}",
        cert.report.passed(),
        cert.binding.achieved_margin()
    );
    let before = p_corr_sequential(&e, &s)?;
    for eps in [1e-3, 1e-2, 5e-2] {
        let better = perturb_strategy(&s, &cert.binding.direction, &cert.binding.measurement, eps)?;
        println!("  ε = {eps:<5} p_corr {before:.6} -> {:.6}", p_corr_sequential(&e, &better)?);
    }
    Ok(())
}
