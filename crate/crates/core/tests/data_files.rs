//! The JSON files under data/ match the strategies built in code.

use seqdisc::cases::*;
use seqdisc::ensembles::{builtin_ensemble, load_ensemble, EnsembleName};
use seqdisc::operator::Tolerances;
use seqdisc::sequential::{load_strategy, SequentialStrategy};

fn path(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn same(a: &SequentialStrategy, b: &SequentialStrategy) -> bool {
    a.outcomes() == b.outcomes()
        && (0..a.outcomes()).all(|j| {
            a.m(j).max_abs_diff(b.m(j)) < 1e-14
                && (0..a.hypotheses()).all(|i| a.n(i, j).max_abs_diff(b.n(i, j)) < 1e-14)
        })
}

#[test]
fn strategy_files_match() {
    let tol = Tolerances::default();
    let load = |f: &str| load_strategy(path(f), &tol).unwrap();
    assert!(same(&load("double_trine_optimal.json"), &double_trine_optimal_strategy()));
    assert!(same(&load("double_trine_nonoptimal.json"), &double_trine_nonoptimal_strategy()));
    let (a, b) = bell3_strategy_operators();
    assert!(same(&load("bell3.json"), &SequentialStrategy::from_operators(a, b, &tol).unwrap()));
    let (a, b) = domino_strategy_operators().unwrap();
    assert!(same(&load("domino.json"), &SequentialStrategy::from_operators(a, b, &tol).unwrap()));
}

#[test]
fn ensemble_file_matches() {
    let e = load_ensemble(path("double_trine_ensemble.json")).unwrap();
    assert!(e.max_abs_diff(&builtin_ensemble(EnsembleName::DoubleTrine)) < 1e-14);
}
