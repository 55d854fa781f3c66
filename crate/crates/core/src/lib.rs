//! Minimum-error discrimination of bipartite quantum states, comparing the
//! optimal joint measurement with the best one-way sequential strategy:
//! measure A, pass the outcome on, then measure B.
//!
//! The crate provides the dense linear algebra, an interior-point solver
//! for the global problem, the necessary and sufficient optimality
//! conditions for sequential strategies, a see-saw optimizer, a Monte
//! Carlo game simulator and the worked examples (double trine, Bell
//! states, domino states).
//!
//! ```
//! use seqdisc::cases::double_trine_optimal_strategy;
//! use seqdisc::ensembles::{builtin_ensemble, EnsembleName};
//! use seqdisc::sequential::p_corr_sequential;
//!
//! let ens = builtin_ensemble(EnsembleName::DoubleTrine);
//! let p = p_corr_sequential(&ens, &double_trine_optimal_strategy()).unwrap();
//! assert!((p - (2.0 + 3f64.sqrt()) / 4.0).abs() < 1e-12);
//! ```

pub mod cases;
pub mod cli;
pub mod ensembles;
pub mod error;
pub mod global;
pub mod io;
pub mod operator;
pub mod report;
pub mod sequential;

pub use error::{Error, Result};
