//! Exploratory: random search over small dense instances for the lowest
//! Ranking ratio. Nothing here is asserted; it only shows how far above
//! 1 - 1/e typical small instances sit.

use obliv_match::analysis::{estimate_ratio, Algorithm, ONE_MINUS_INV_E};
use obliv_match::{generate_random, WeightDist};

fn main() -> Result<(), obliv_match::Error> {
    let mut worst: Option<(f64, usize, u64)> = None;
    for n in 2..=6 {
        for seed in 0..40 {
            let (inst, real) = generate_random(n, n, &WeightDist::Constant(1.0), 0.6, seed)?;
            let est = estimate_ratio(&inst, &real, Algorithm::Ranking, 2_000, seed)?;
            if est.opt_mean > 0.0 && worst.is_none_or(|(r, _, _)| est.ratio < r) {
                worst = Some((est.ratio, n, seed));
            }
        }
    }
    if let Some((ratio, n, seed)) = worst {
        println!("lowest ratio {ratio:.4} on {n}x{n} unit instance, seed {seed} (target {ONE_MINUS_INV_E:.4})");
    }
    Ok(())
}
