//! Alternating optimization of the two measurement steps from random
//! starts, and from the trine measurement where it gets stuck.

use seqdisc::cases::trine_measurement;
use seqdisc::ensembles::{builtin_ensemble, EnsembleName};
use seqdisc::sequential::{seesaw_from, seesaw_optimize_with, SeesawOptions};

fn main() -> seqdisc::Result<()> {
    for name in [EnsembleName::DoubleTrine, EnsembleName::Bell3] {
        let e = builtin_ensemble(name);
        let r = seesaw_optimize_with(&e, &SeesawOptions { restarts: 20, seed: 1, ..Default::default() })?;
        let mut values: Vec<f64> = r.runs.iter().map(|run| run.p_corr).collect();
        values.sort_by(f64::total_cmp);
        println!(
            "{:<12} best {:.10} (restart {}), worst restart {:.6}",
            name.to_string(),
            r.best.p_corr, r.best_restart, values[0]
        );
    }
    let e = builtin_ensemble(EnsembleName::DoubleTrine);
    let stuck = seesaw_from(&e, trine_measurement(), 300, 1e-12)?;
    println!("from the trine measurement: {:.10} after {} rounds", stuck.p_corr, stuck.rounds);
    Ok(())
}
