//! Sweeps the rank of one left vertex: matched weight is non-increasing, the
//! marginal rank splits the sweep, and the gain bounds hold on both sides.

use obliv_match::analysis::{
    analytic_bound, find_marginal_rank, marginal_rank_gain_check, monotonicity_check, THETA_TOL,
};
use obliv_match::{draw_ranks, generate_random, Realization, WeightDist};

fn main() -> Result<(), obliv_match::Error> {
    let (inst, real) = generate_random(
        6,
        6,
        &WeightDist::Uniform {
            low: 0.0,
            high: 1.0,
        },
        0.7,
        6011,
    )?;
    let Realization::Adversarial(bits) = &real else {
        unreachable!()
    };
    let ranks = draw_ranks(6, 6011);
    let u = 2;

    let mono = monotonicity_check(&inst, bits, &ranks, u, 20)?;
    for (y, w) in &mono.sweep {
        println!("  y_u = {y:.2}: matched weight {w:.4}");
    }
    println!("non-increasing: {}", mono.pass());

    for v in (0..inst.n_right()).filter(|&v| bits.present(u, v)) {
        let m = find_marginal_rank(&inst, bits, &ranks, u, v, THETA_TOL)?;
        let gains = marginal_rank_gain_check(&inst, bits, &m, 100)?;
        let bound = analytic_bound(m.theta)?;
        println!(
            "reference ({u},{v}) w {:.4}: theta {:.6}, {} below / {} above, violations {}, bound {:.6}",
            inst.weight(u, v),
            m.theta,
            gains.below,
            gains.above,
            gains.violations.len(),
            bound.value()
        );
    }
    Ok(())
}
