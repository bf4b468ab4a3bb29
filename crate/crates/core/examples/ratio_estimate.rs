//! Monte Carlo approximation ratio of Ranking and greedy on a few instance
//! families, with 99% confidence half-widths.

use obliv_match::analysis::{estimate_ratio, Algorithm, ONE_MINUS_INV_E};
use obliv_match::{
    generate_random, generate_upper_triangular, BipartiteInstance, Grid, Realization, WeightDist,
};

fn main() -> Result<(), obliv_match::Error> {
    let blocking = (
        BipartiteInstance::from_weights(Grid::filled(2, 2, 1.0))?,
        Realization::Adversarial(Grid::from_rows(vec![vec![true, true], vec![true, false]])?),
    );
    let cases = [
        ("blocking 2x2", blocking),
        ("upper-triangular 25", generate_upper_triangular(25)?),
        (
            "random 20x20",
            generate_random(
                20,
                20,
                &WeightDist::Uniform {
                    low: 0.0,
                    high: 1.0,
                },
                0.5,
                1,
            )?,
        ),
        (
            "random 15x15 exp",
            generate_random(15, 15, &WeightDist::Exponential { rate: 1.0 }, 0.3, 2)?,
        ),
    ];
    println!("target 1 - 1/e = {ONE_MINUS_INV_E:.4}");
    for (name, (inst, real)) in &cases {
        for algo in [Algorithm::Ranking, Algorithm::Greedy] {
            let est = estimate_ratio(inst, real, algo, 5_000, 11)?;
            println!(
                "{name:>20} {algo:?}: ratio {:.4} +/- {:.4} (E[ALG] {:.3}, E[W*] {:.3})",
                est.ratio, est.ci_half_width, est.alg_mean, est.opt_mean
            );
        }
    }
    Ok(())
}
