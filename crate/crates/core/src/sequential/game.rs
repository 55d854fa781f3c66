//! Monte Carlo play of the three-party game: Claire sends ρ_i to Alice and
//! Bob and a uniformly random index j to Bob; Alice must name j and Bob i.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SequentialStrategy;
use crate::ensembles::Ensemble;
use crate::error::{Error, Result};
use crate::operator::tensor_product;

#[derive(Clone, Debug, PartialEq)]
pub struct GameOutcome {
    pub n_payout: usize,
    pub trials: u64,
    pub wins: u64,
    pub win_rate: f64,
    pub expected_payout: f64,
    pub std_error: f64,
    /// n · P(win) computed exactly from the strategy.
    pub exact_payout: f64,
}

/// Index of the first cumulative weight exceeding `u`; the last index
/// absorbs rounding.
fn pick(cumulative: &[f64], u: f64) -> usize {
    cumulative
        .iter()
        .position(|&c| u < c)
        .unwrap_or(cumulative.len() - 1)
}

fn cumulative(weights: &[f64]) -> Vec<f64> {
    let clipped: Vec<f64> = weights.iter().map(|w| w.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    let mut acc = 0.0;
    clipped
        .iter()
        .map(|w| {
            acc += w / total;
            acc
        })
        .collect()
}

pub fn simulate_game(
    ensemble: &Ensemble,
    strategy: &SequentialStrategy,
    n_payout: usize,
    trials: u64,
    seed: u64,
) -> Result<GameOutcome> {
    strategy.check_compatible(ensemble)?;
    let n = strategy.outcomes();
    if n_payout != n {
        return Err(Error::invalid(format!(
            "payout n = {n_payout} must equal the number of A-outcomes ({n})"
        )));
    }
    if trials == 0 {
        return Err(Error::invalid("at least one trial is required"));
    }
    let hyp = ensemble.len();

    // joint[i][j] = distribution of (Alice's outcome j', Bob's outcome i')
    // given state i and index j, flattened as j' * hyp + i'
    let mut joint = Vec::with_capacity(hyp);
    let mut exact_win = 0.0;
    for (i, (rho, p)) in ensemble.states().iter().zip(ensemble.priors()).enumerate() {
        let mut per_index = Vec::with_capacity(n);
        for j in 0..n {
            let mut w = Vec::with_capacity(n * hyp);
            for jp in 0..n {
                for ip in 0..hyp {
                    let op = tensor_product(strategy.m(jp), strategy.n(ip, j))?;
                    w.push(rho.trace_with(&op));
                }
            }
            exact_win += p / n as f64 * w[j * hyp + i].max(0.0);
            per_index.push(cumulative(&w));
        }
        joint.push(per_index);
    }
    let priors = cumulative(ensemble.priors());

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut wins = 0u64;
    for _ in 0..trials {
        let i = pick(&priors, rng.gen::<f64>());
        let j = rng.gen_range(0..n);
        let outcome = pick(&joint[i][j], rng.gen::<f64>());
        if outcome / hyp == j && outcome % hyp == i {
            wins += 1;
        }
    }
    let w = wins as f64 / trials as f64;
    Ok(GameOutcome {
        n_payout,
        trials,
        wins,
        win_rate: w,
        expected_payout: n_payout as f64 * w,
        std_error: n_payout as f64 * (w * (1.0 - w) / trials as f64).sqrt(),
        exact_payout: n_payout as f64 * exact_win,
    })
}
