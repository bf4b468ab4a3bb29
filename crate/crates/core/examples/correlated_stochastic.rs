//! Stochastic edges: independent coins versus a single shared coin per trial.
//! Ranking never looks at the probabilities, so both laws behave alike.

use obliv_match::analysis::{estimate_ratio, Algorithm};
use obliv_match::{generate_stochastic, Comonotone, Realization, WeightDist};

fn main() -> Result<(), obliv_match::Error> {
    let dist = WeightDist::Uniform {
        low: 0.0,
        high: 1.0,
    };
    for seed in 0..3 {
        let (inst, probs) = generate_stochastic(10, 10, &dist, 0.0, 1.0, seed)?;
        let independent = Realization::bernoulli(probs.clone())?;
        let correlated = Realization::joint(Comonotone::new(probs)?);
        for (name, real) in [("independent", &independent), ("comonotone", &correlated)] {
            let est = estimate_ratio(&inst, real, Algorithm::Ranking, 5_000, seed)?;
            println!(
                "instance {seed} {name:>11}: ratio {:.4} +/- {:.4}, E[W*] {:.3}",
                est.ratio, est.ci_half_width, est.opt_mean
            );
        }
    }
    Ok(())
}
