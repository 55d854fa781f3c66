//! Every worked example with its headline numbers and condition reports.

use seqdisc::cases::*;
use seqdisc::sequential::CertifyOptions;

fn show(r: &CaseStudyResult) {
    println!("{:<24} p_corr = {:.10}", r.name, r.p_corr);
    for (name, rep) in &r.reports {
        println!("    {name:<22} {} (worst margin {:.2e})", if rep.passed() { "PASS" } else { "FAIL" }, rep.worst_margin());
    }
}

fn main() -> seqdisc::Result<()> {
    let opts = CaseOptions { certify: CertifyOptions { search_budget: 256, ..Default::default() }, ..Default::default() };
    show(&double_trine_optimal_with(&opts)?);
    show(&double_trine_global()?);
    let overlap = double_trine_overlap_analysis()?;
    println!(
        "{:<24} |<α0|Φ0>|² = {:.4}, <Φ0|π0|Φ0> = {:.4}",
        overlap.name,
        overlap.get_extra("alpha0_phi0_overlap_sq").unwrap(),
        overlap.get_extra("phi0_pi0_expectation").unwrap()
    );
    show(&double_trine_nonoptimal_with(&opts)?);
    show(&trine_bound_appendix_a(64)?);
    show(&bell3_strategy_with(&opts)?);
    let domino = domino_strategy()?;
    show(&domino);
    let (p, q) = domino_p_q();
    println!("    p = {p:.6}, q = {q:.6}, global optimum {:.6}", domino.get_extra("p_corr_global").unwrap());
    Ok(())
}
