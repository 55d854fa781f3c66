//! Upper bound on the largest eigenvalue of Σ_k s_k ρ_k for the trine
//! states, used to certify the optimal double trine strategy.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CaseStrategy, CaseStudyResult};
use crate::ensembles::trine_ket;
use crate::error::{Error, Result};
use crate::global::{helstrom_two_state, solve_weighted, SolverOptions};
use crate::operator::{hermitian_eigen, HermitianOperator, C64};
use crate::report::{ConditionReport, Verdict};
use crate::sequential::random_povm;

/// q_k(θ) = (1 + cos(θ + 2πk/3))/3.
pub fn trine_priors(theta: f64) -> [f64; 3] {
    [0, 1, 2].map(|k| (1.0 + (theta + 2.0 * PI * k as f64 / 3.0).cos()) / 3.0)
}

/// Two-state bound ½(1 + (2/3)√((1 + cos θ/4)² + (3 sin θ/4)²)).
pub fn two_state_bound(theta: f64) -> f64 {
    let x = 1.0 + 0.25 * theta.cos();
    let y = 0.75 * theta.sin();
    0.5 * (1.0 + 2.0 / 3.0 * x.hypot(y))
}

/// Eigenvalues (λ₋, λ₊) of Σ_k s_k |ψ_k⟩⟨ψ_k|.
pub fn lambda_pm_formula(s: [f64; 3]) -> (f64, f64) {
    let w = C64::from_polar(1.0, 2.0 * PI / 3.0);
    let z = C64::new(s[0], 0.0) + w * s[1] + w.conj() * s[2];
    let half = 0.5 * (s[0] + s[1] + s[2]);
    (half - 0.5 * z.norm(), half + 0.5 * z.norm())
}

fn trine_states() -> Vec<HermitianOperator> {
    (0..3).map(|k| HermitianOperator::pure_state(&trine_ket(k))).collect()
}

pub fn trine_bound_appendix_a(theta_grid: usize) -> Result<CaseStudyResult> {
    trine_bound_appendix_a_with(theta_grid, 100, 0)
}

/// Sweeps θ over [−π/3, 0] and checks the λ± formula on `samples` random
/// weight triples, plus λ₊ ≤ p_H/2 for random measurements Ñ.
pub fn trine_bound_appendix_a_with(theta_grid: usize, samples: usize, seed: u64) -> Result<CaseStudyResult> {
    if theta_grid < 16 {
        return Err(Error::invalid(format!("theta grid needs at least 16 points, got {theta_grid}")));
    }
    let rho = trine_states();
    let mut report = ConditionReport::new();

    let thetas: Vec<f64> = (0..theta_grid)
        .map(|k| -PI / 3.0 + PI / 3.0 * k as f64 / (theta_grid - 1) as f64)
        .collect();
    let bounds: Vec<f64> = thetas.iter().map(|&t| two_state_bound(t)).collect();
    let monotone = bounds.windows(2).map(|w| w[0] - w[1]).fold(f64::INFINITY, f64::min);
    report.push(Verdict::new("bound_monotone_decreasing", monotone, 0.0));

    // the closed form against the Helstrom value of q0ρ0 vs q1ρ1 + q2ρ2,
    // and the three-state optimum against the bound
    let mut helstrom_gap: f64 = 0.0;
    let mut three_state_slack = f64::INFINITY;
    for &t in &thetas {
        let q = trine_priors(t);
        let mixed = &rho[1].scale(q[1]) + &rho[2].scale(q[2]);
        let h = helstrom_two_state(1.0, &rho[0].scale(q[0]), 1.0, &mixed)?;
        helstrom_gap = helstrom_gap.max((h.p_corr - two_state_bound(t)).abs());
        let ops: Vec<_> = rho.iter().zip(q).map(|(r, qk)| r.scale(qk)).collect();
        let three = solve_weighted(&ops, &SolverOptions::default())?;
        three_state_slack = three_state_slack.min(two_state_bound(t) - three.value);
    }
    report.scalar("helstrom_formula_gap", helstrom_gap);
    report.push(Verdict::new("three_state_below_bound", three_state_slack, 1e-9));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut formula_gap: f64 = 0.0;
    for _ in 0..samples {
        let s: [f64; 3] = [rng.gen(), rng.gen(), rng.gen()];
        let op = HermitianOperator::sum(2, &rho.iter().zip(s).map(|(r, sk)| r.scale(sk)).collect::<Vec<_>>());
        let eig = hermitian_eigen(&op)?;
        let (lm, lp) = lambda_pm_formula(s);
        formula_gap = formula_gap.max((eig.values[0] - lm).abs()).max((eig.values[1] - lp).abs());
    }
    report.scalar("lambda_formula_gap", formula_gap);

    let half_ph = 0.25 * (1.0 + 3f64.sqrt() / 2.0);
    let mut lambda_slack = f64::INFINITY;
    for _ in 0..samples {
        let n = random_povm(2, 3, &mut rng)?;
        let s = [0, 1, 2].map(|k| rho[k].trace_with(n.element(k)) / 3.0);
        lambda_slack = lambda_slack.min(half_ph - lambda_pm_formula(s).1);
    }
    report.push(Verdict::new("largest_eigenvalue_below_half_p_helstrom", lambda_slack, 1e-12));

    let top = two_state_bound(-PI / 3.0);
    let mut res = CaseStudyResult::new("trine_bound", CaseStrategy::None, top);
    res.report("two_state_bound", report);
    res.extra("theta_at_max", thetas[0]);
    res.extra("bound_at_max", top);
    res.extra("bound_at_zero", two_state_bound(0.0));
    res.extra("p_helstrom", 2.0 * half_ph);
    let q = trine_priors(-PI / 3.0);
    res.extra("q0_at_max", q[0]);
    res.extra("q1_at_max", q[1]);
    res.extra("q2_at_max", q[2]);
    let (lm, lp) = lambda_pm_formula([q[0] / 3.0, q[1] / 3.0, q[2] / 3.0]);
    res.extra("lambda_minus_at_max", lm);
    res.extra("lambda_plus_at_max", lp);
    Ok(res)
}
