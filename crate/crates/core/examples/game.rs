//! Monte Carlo play of the game whose expected payout equals the
//! sequential success probability.

use seqdisc::cases::double_trine_optimal_strategy;
use seqdisc::ensembles::{builtin_ensemble, EnsembleName};
use seqdisc::sequential::simulate_game;

fn main() -> seqdisc::Result<()> {
    let e = builtin_ensemble(EnsembleName::DoubleTrine);
    let s = double_trine_optimal_strategy();
    for trials in [1_000, 100_000, 1_000_000] {
        let g = simulate_game(&e, &s, 3, trials, 42)?;
        println!(
            "{trials:>9} trials: payout {:.5} ± {:.5} (exact {:.7})",
            g.expected_payout, g.std_error, g.exact_payout
        );
    }
    Ok(())
}
