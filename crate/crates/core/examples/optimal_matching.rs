//! Exact maximum-weight matching on a realized edge set, cross-checked by
//! exhaustive search.

use obliv_match::{brute_force_mwm, generate_random, max_weight_matching, Realization, WeightDist};

fn main() -> Result<(), obliv_match::Error> {
    let dist = WeightDist::Exponential { rate: 1.0 };
    for seed in 0..5 {
        let (inst, real) = generate_random(7, 5, &dist, 0.6, seed)?;
        let Realization::Adversarial(bits) = &real else {
            unreachable!()
        };
        let fast = max_weight_matching(&inst, bits)?;
        let slow = brute_force_mwm(&inst, bits)?;
        println!(
            "seed {seed}: hungarian {:.6}, brute force {:.6}, M* = {:?}",
            fast.value,
            slow.value,
            fast.matching.pairs()
        );
    }
    Ok(())
}
