//! One-way sequential measurements on bipartite ensembles: evaluation,
//! necessary conditions, the optimality certificate, see-saw search and
//! the three-party game.

mod certificate;
mod evaluate;
mod game;
mod seesaw;
mod strategy;

pub use certificate::{
    certify_sequential_optimal, certify_with, evaluate_direction, Certificate, CertifyOptions, DirectionValue,
    LABEL_SEQUENTIAL_OPTIMALITY,
};
pub use evaluate::{
    bayes_posteriors, branch_operators, check_necessary_a, check_necessary_b, gamma_a, gamma_a_sym,
    induced_a_ensemble, induced_operators, p_corr_sequential, p_corr_sequential_factorized,
    p_corr_sequential_joint, InducedAEnsemble, LABEL_NECESSARY_A, LABEL_NECESSARY_B,
};
pub use game::{simulate_game, GameOutcome};
pub use seesaw::{
    random_povm, seesaw_from, seesaw_optimize, seesaw_optimize_with, sub_seed, SeesawOptions, SeesawResult,
    SeesawRun,
};
pub use strategy::{load_strategy, parse_strategy, perturb_strategy, SequentialStrategy, StrategyFile};
