use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seqdisc::cases::{double_trine_nonoptimal_strategy, double_trine_optimal_strategy};
use seqdisc::ensembles::{builtin_ensemble, Ensemble, EnsembleName};
use seqdisc::global::{p_corr_global, solve_min_error, Povm};
use seqdisc::operator::{c64, tensor_product, ComplexMatrix, HermitianOperator, Tolerances, C64};
use seqdisc::sequential::*;

fn random_strategy(ens: &Ensemble, outcomes: usize, rng: &mut ChaCha8Rng) -> SequentialStrategy {
    let (da, db) = ens.require_bipartite().unwrap();
    let a = random_povm(da, outcomes, rng).unwrap();
    let b = (0..outcomes).map(|_| random_povm(db, ens.len(), rng).unwrap()).collect();
    SequentialStrategy::new(a, b).unwrap()
}

fn random_ket(dim: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let v: Vec<C64> = (0..dim).map(|_| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    ComplexMatrix::ket(&v).normalized()
}

#[test]
fn three_evaluations_of_p_corr_agree_on_product_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for name in [EnsembleName::DoubleTrine, EnsembleName::Domino] {
        let ens = builtin_ensemble(name);
        for _ in 0..10 {
            let s = random_strategy(&ens, 4, &mut rng);
            let p = p_corr_sequential(&ens, &s).unwrap();
            assert!((p - p_corr_sequential_joint(&ens, &s).unwrap()).abs() < 1e-12);
            assert!((p - p_corr_sequential_factorized(&ens, &s).unwrap()).abs() < 1e-12);
        }
    }
}

#[test]
fn joint_evaluation_matches_on_entangled_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let ens = builtin_ensemble(EnsembleName::Bell3);
    for _ in 0..10 {
        let s = random_strategy(&ens, 3, &mut rng);
        let p = p_corr_sequential(&ens, &s).unwrap();
        assert!((p - p_corr_sequential_joint(&ens, &s).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn sequential_never_beats_global() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for name in [EnsembleName::DoubleTrine, EnsembleName::Bell3, EnsembleName::Domino] {
        let ens = builtin_ensemble(name);
        let global = solve_min_error(&ens, 2000, 1e-10).unwrap();
        for _ in 0..20 {
            let s = random_strategy(&ens, 3, &mut rng);
            assert!(p_corr_sequential(&ens, &s).unwrap() <= global.dual_bound + 1e-9);
        }
    }
}

#[test]
fn posteriors_are_distributions() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let ens = builtin_ensemble(EnsembleName::Domino);
    for _ in 0..20 {
        let m = random_povm(3, 2, &mut rng).unwrap();
        let (post, states) = bayes_posteriors(&ens, m.element(0)).unwrap();
        assert!((post.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(post.iter().all(|&p| p >= -1e-15));
        for s in states {
            assert!((s.trace() - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn induced_ensemble_reproduces_p_corr() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let ens = builtin_ensemble(EnsembleName::DoubleTrine);
    for _ in 0..20 {
        let s = random_strategy(&ens, 3, &mut rng);
        let ind = induced_a_ensemble(&ens, &s).unwrap();
        let total: f64 = (0..3).map(|j| ind.weighted(j, 2).trace_with(s.m(j))).sum();
        assert!((total - p_corr_sequential(&ens, &s).unwrap()).abs() < 1e-12);
        assert!((ind.probs_q.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        // Tr Γ^A is the same sum
        let g = gamma_a(&ens, &s).unwrap();
        assert!((g.trace().re - total).abs() < 1e-12);
    }
}

#[test]
fn necessary_conditions_separate_strategies() {
    let ens = builtin_ensemble(EnsembleName::DoubleTrine);
    let tol = Tolerances::default();
    let opt = double_trine_optimal_strategy();
    assert!(check_necessary_b(&ens, &opt, &tol).unwrap().passed());
    assert!(check_necessary_a(&ens, &opt, &tol).unwrap().passed());
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let random = random_strategy(&ens, 3, &mut rng);
    assert!(!check_necessary_b(&ens, &random, &tol).unwrap().passed());
}

// brute-force lower bound on max_Ñ Σ_k Tr(τ_k Ñ_k) for qubit operators
fn inner_oracle(ops: &[HermitianOperator], rng: &mut ChaCha8Rng) -> f64 {
    let value = |p: &Povm| ops.iter().zip(p.elements()).map(|(o, n)| o.trace_with(n)).sum::<f64>();
    let mut best = f64::NEG_INFINITY;
    for _ in 0..4000 {
        best = best.max(value(&random_povm(2, ops.len(), rng).unwrap()));
    }
    // projective two-outcome measurements on any pair, scanned on a grid
    for a in 0..ops.len() {
        for b in 0..ops.len() {
            if a == b {
                continue;
            }
            for t in 0..=90 {
                for f in 0..180 {
                    let (th, ph) = (std::f64::consts::PI * t as f64 / 90.0, 2.0 * std::f64::consts::PI * f as f64 / 180.0);
                    let k = ComplexMatrix::ket(&[c64((th / 2.0).cos(), 0.0), C64::from_polar((th / 2.0).sin(), ph)]);
                    let p0 = HermitianOperator::projector(&k);
                    let v = ops[a].trace_with(&p0) + ops[b].trace() - ops[b].trace_with(&p0);
                    best = best.max(v);
                }
            }
        }
    }
    best
}

#[test]
fn inner_problem_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let ens = builtin_ensemble(EnsembleName::DoubleTrine);
    let g = gamma_a_sym(&ens, &double_trine_optimal_strategy()).unwrap();
    for _ in 0..5 {
        let lam = random_ket(2, &mut rng);
        let (dv, _) = evaluate_direction(&ens, &g, &lam).unwrap();
        let ops: Vec<HermitianOperator> = ens
            .states()
            .iter()
            .zip(ens.priors())
            .map(|(rho, p)| {
                let proj = tensor_product(&HermitianOperator::projector(&lam), &HermitianOperator::identity(2)).unwrap();
                seqdisc::operator::partial_trace(
                    &HermitianOperator::symmetrize(&proj.mul(rho).matmul(proj.matrix())),
                    (2, 2),
                    seqdisc::operator::Subsystem::B,
                )
                .unwrap()
                .scale(*p)
            })
            .collect();
        let oracle = inner_oracle(&ops, &mut rng);
        assert!(oracle <= dv.inner_bound + 1e-9, "oracle {oracle} above bound {}", dv.inner_bound);
        assert!(dv.inner_value - oracle < 1e-3, "solver {} oracle {oracle}", dv.inner_value);
        assert!(dv.inner_value <= dv.inner_bound + 1e-12);
    }
}

#[test]
fn perturbation_slope_matches_margin() {
    let ens = builtin_ensemble(EnsembleName::DoubleTrine);
    let s = double_trine_nonoptimal_strategy();
    let g = gamma_a_sym(&ens, &s).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let p0 = p_corr_sequential(&ens, &s).unwrap();
    for _ in 0..5 {
        let lam = random_ket(2, &mut rng);
        let (dv, _) = evaluate_direction(&ens, &g, &lam).unwrap();
        let h = 1e-6;
        let p1 = p_corr_sequential(&ens, &perturb_strategy(&s, &lam, &dv.measurement, h).unwrap()).unwrap();
        let slope = (p1 - p0) / h;
        assert!((slope + 2.0 * dv.achieved_margin()).abs() < 1e-4, "slope {slope} margin {}", dv.achieved_margin());
    }
}

#[test]
fn certificate_finds_improving_witness() {
    let ens = builtin_ensemble(EnsembleName::DoubleTrine);
    let s = double_trine_nonoptimal_strategy();
    let opts = CertifyOptions { search_budget: 128, ..Default::default() };
    let cert = certify_with(&ens, &s, &opts, &Tolerances::default()).unwrap();
    assert!(!cert.report.passed());
    assert!(cert.binding.achieved_margin() < 0.0);
    let better = perturb_strategy(&s, &cert.binding.direction, &cert.binding.measurement, 1e-3).unwrap();
    assert!(p_corr_sequential(&ens, &better).unwrap() > 0.8);
}

#[test]
fn seesaw_is_deterministic_and_monotone() {
    let ens = builtin_ensemble(EnsembleName::DoubleTrine);
    let opts = SeesawOptions { restarts: 4, seed: 9, ..Default::default() };
    let a = seesaw_optimize_with(&ens, &opts).unwrap();
    let b = seesaw_optimize_with(&ens, &opts).unwrap();
    assert_eq!(a.best.p_corr.to_bits(), b.best.p_corr.to_bits());
    assert_eq!(a.best_restart, b.best_restart);
    for r in &a.runs {
        assert!(r.max_decrease() <= 1e-10);
    }
    assert!(a.best.p_corr <= p_corr_global(&ens, &solve_min_error(&ens, 2000, 1e-10).unwrap().povm).unwrap() + 1e-9);
}

#[test]
fn strategies_round_trip_through_json() {
    let s = double_trine_optimal_strategy();
    let back = parse_strategy(&s.to_json_string(), &Tolerances::default()).unwrap();
    for j in 0..s.outcomes() {
        assert!(s.m(j).max_abs_diff(back.m(j)) < 1e-15);
        for i in 0..s.hypotheses() {
            assert!(s.n(i, j).max_abs_diff(back.n(i, j)) < 1e-15);
        }
    }
}

#[test]
fn game_matches_exact_payout() {
    let ens = builtin_ensemble(EnsembleName::DoubleTrine);
    let s = double_trine_optimal_strategy();
    let g = simulate_game(&ens, &s, 3, 200_000, 1).unwrap();
    assert!((g.exact_payout - p_corr_sequential(&ens, &s).unwrap()).abs() < 1e-12);
    assert!((g.expected_payout - g.exact_payout).abs() < 4.0 * g.std_error);
    assert_eq!(g, simulate_game(&ens, &s, 3, 200_000, 1).unwrap());
    assert!(simulate_game(&ens, &s, 2, 10, 1).is_err());
}

#[test]
fn perturbing_the_optimum_never_helps_to_first_order() {
    let ens = builtin_ensemble(EnsembleName::DoubleTrine);
    let s = double_trine_optimal_strategy();
    let p = p_corr_sequential(&ens, &s).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let eps = 1e-3;
    for _ in 0..100 {
        let lam = random_ket(2, &mut rng);
        let b = random_povm(2, 3, &mut rng).unwrap();
        let q = p_corr_sequential(&ens, &perturb_strategy(&s, &lam, &b, eps).unwrap()).unwrap();
        assert!(q <= p + 1e-12 + 4.0 * eps * eps, "gain {}", q - p);
    }
}

#[test]
fn global_optimum_resists_one_outcome_variations() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let eps = 1e-3;
    for name in [EnsembleName::DoubleTrine, EnsembleName::Trine] {
        let ens = builtin_ensemble(name);
        let sol = solve_min_error(&ens, 2000, 1e-10).unwrap();
        let n = ens.dim();
        for _ in 0..100 {
            let lam = random_ket(n, &mut rng);
            let proj = HermitianOperator::projector(&lam);
            let shrink = (&HermitianOperator::identity(n) - &proj.scale(eps)).into_matrix();
            let j = rng.gen_range(0..ens.len());
            let elements = sol
                .povm
                .elements()
                .iter()
                .enumerate()
                .map(|(i, e)| {
                    let e = e.conjugate_by(&shrink);
                    if i == j { &e + &proj.scale(eps * (2.0 - eps)) } else { e }
                })
                .collect();
            let varied = Povm::new(elements).unwrap();
            let q = p_corr_global(&ens, &varied).unwrap();
            assert!(q <= sol.p_corr + 1e-12 + 4.0 * eps * eps);
        }
    }
}
