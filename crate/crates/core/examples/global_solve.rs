//! Optimal joint measurement for the builtin ensembles and a random one,
//! with the optimality conditions checked on each solution.

use seqdisc::ensembles::{builtin_ensemble, Ensemble, EnsembleName};
use seqdisc::global::{check_global_optimality, helstrom_two_state, solve_min_error, square_root_measurement, p_corr_global};
use seqdisc::operator::{c64, ComplexMatrix, Tolerances};

fn main() -> seqdisc::Result<()> {
    let tol = Tolerances::default();
    for name in [EnsembleName::Trine, EnsembleName::DoubleTrine, EnsembleName::Bell3, EnsembleName::Domino] {
        let e = builtin_ensemble(name);
        let s = solve_min_error(&e, 2000, 1e-10)?;
        let report = check_global_optimality(&e, &s.povm, &tol)?;
        println!(
            "{:<14} p_corr = {:.10}  dual bound = {:.10}  conditions {}",
            name.to_string(),
            s.p_corr,
            s.dual_bound,
            if report.passed() { "hold" } else { "violated" }
        );
    }

    // symmetric pure states: the square-root measurement is already optimal
    let dt = builtin_ensemble(EnsembleName::DoubleTrine);
    println!("double trine SRM p_corr = {:.10}", p_corr_global(&dt, &square_root_measurement(&dt)?)?);

    // two states: the solver against the Helstrom formula
    let a = ComplexMatrix::ket(&[c64(1.0, 0.0), c64(0.0, 0.0)]);
    let b = ComplexMatrix::ket(&[c64(0.6, 0.0), c64(0.0, 0.8)]);
    let pair = Ensemble::from_kets(&[a, b], vec![0.3, 0.7], None)?;
    let h = helstrom_two_state(0.3, pair.state(0), 0.7, pair.state(1))?;
    let s = solve_min_error(&pair, 2000, 1e-10)?;
    println!("two states: Helstrom {:.10}, solver {:.10}", h.p_corr, s.p_corr);
    Ok(())
}
