use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seqdisc::ensembles::Ensemble;
use seqdisc::global::{p_corr_global, solve_min_error};
use seqdisc::operator::*;
use seqdisc::sequential::{p_corr_sequential, perturb_strategy, random_povm, SequentialStrategy};

fn random_matrix(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

fn random_psd(n: usize, rng: &mut ChaCha8Rng) -> HermitianOperator {
    let g = random_matrix(n, rng);
    HermitianOperator::symmetrize(&g.matmul(&g.adjoint()))
}

fn random_state(n: usize, rng: &mut ChaCha8Rng) -> HermitianOperator {
    let p = random_psd(n, rng);
    let t = p.trace();
    p.scale(1.0 / t)
}

// Gram–Schmidt on the columns of a random matrix
fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let g = random_matrix(n, rng);
    let mut cols: Vec<ComplexMatrix> = Vec::new();
    for c in 0..n {
        let mut v = g.column(c);
        for u in &cols {
            let proj = u.scale(u.inner(&v));
            v = &v - &proj;
        }
        cols.push(v.normalized());
    }
    ComplexMatrix::from_fn(n, n, |r, c| cols[c][(r, 0)])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn trace_of_psd_product_is_nonnegative(seed in any::<u64>(), n in 2usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (random_psd(n, &mut rng), random_psd(n, &mut rng));
        prop_assert!(a.trace_with(&b) >= -1e-12);
    }

    #[test]
    fn partial_traces_of_products(seed in any::<u64>(), da in 2usize..4, db in 2usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (random_state(da, &mut rng), random_state(db, &mut rng));
        let ab = tensor_product(&a, &b).unwrap();
        prop_assert!(partial_trace(&ab, (da, db), Subsystem::A).unwrap().max_abs_diff(&a) < 1e-12);
        prop_assert!(partial_trace(&ab, (da, db), Subsystem::B).unwrap().max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn eigen_decomposition_reconstructs(seed in any::<u64>(), n in 2usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = HermitianOperator::symmetrize(&random_matrix(n, &mut rng));
        let eig = hermitian_eigen(&h).unwrap();
        prop_assert!(eig.reconstruct().max_abs_diff(&h) < 1e-10);
        prop_assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn solver_is_unitarily_invariant(seed in any::<u64>(), n in 2usize..4, m in 2usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let states: Vec<_> = (0..m).map(|_| random_state(n, &mut rng)).collect();
        let u = random_unitary(n, &mut rng);
        let rotated: Vec<_> = states.iter().map(|s| s.conjugate_by(&u)).collect();
        let a = solve_min_error(&Ensemble::uniform(states, None).unwrap(), 2000, 1e-10).unwrap();
        let b = solve_min_error(&Ensemble::uniform(rotated, None).unwrap(), 2000, 1e-10).unwrap();
        prop_assert!((a.p_corr - b.p_corr).abs() < 1e-7);
    }

    #[test]
    fn solver_beats_random_measurements(seed in any::<u64>(), n in 2usize..4, m in 2usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let states: Vec<_> = (0..m).map(|_| random_state(n, &mut rng)).collect();
        let e = Ensemble::uniform(states, None).unwrap();
        let best = solve_min_error(&e, 2000, 1e-10).unwrap();
        prop_assert!(best.p_corr <= best.dual_bound + 1e-9);
        for _ in 0..10 {
            let povm = random_povm(n, m, &mut rng).unwrap();
            prop_assert!(p_corr_global(&e, &povm).unwrap() <= best.p_corr + 1e-8);
        }
    }

    #[test]
    fn perturbed_strategies_stay_valid(seed in any::<u64>(), eps in 1e-4f64..0.4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let states: Vec<_> = (0..3).map(|_| random_state(4, &mut rng)).collect();
        let e = Ensemble::uniform(states, Some((2, 2))).unwrap();
        let a = random_povm(2, 3, &mut rng).unwrap();
        let b = (0..3).map(|_| random_povm(2, 3, &mut rng).unwrap()).collect();
        let s = SequentialStrategy::new(a, b).unwrap();
        let lam = ComplexMatrix::ket(&[c64(rng.gen(), rng.gen()), c64(rng.gen(), rng.gen())]);
        let p = perturb_strategy(&s, &lam, &random_povm(2, 3, &mut rng).unwrap(), eps).unwrap();
        prop_assert!(p.a_povm().completeness_error() < 1e-12);
        let value = p_corr_sequential(&e, &p).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&value));
    }
}
