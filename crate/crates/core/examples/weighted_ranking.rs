//! One weighted Ranking trial: ranks, the perturbed-weight schedule, the
//! committed matching and the gain split.

use obliv_match::analysis::gain_conservation_check;
use obliv_match::{
    build_schedule, draw_ranks, generate_random, max_weight_matching, run_greedy, run_ranking,
    ProbeEnv, Realization, WeightDist,
};

fn main() -> Result<(), obliv_match::Error> {
    let (inst, real) = generate_random(
        4,
        4,
        &WeightDist::Uniform {
            low: 0.0,
            high: 1.0,
        },
        0.6,
        5,
    )?;
    let ranks = draw_ranks(inst.n_left(), 17);
    println!("ranks: {:.3?}", ranks.as_slice());

    for e in build_schedule(&inst, &ranks)?.entries().iter().take(6) {
        println!(
            "  ({}, {}) perturbed {:.4} (w = {:.4})",
            e.u,
            e.v,
            e.perturbed,
            inst.weight(e.u, e.v)
        );
    }

    let mut env = ProbeEnv::new(&inst, &real, 0)?;
    let out = run_ranking(&mut env, &ranks)?;
    println!(
        "ranking: {:?} weight {:.4} after {} probes",
        out.matching.pairs(),
        out.matching.total_weight(),
        env.probes_used()
    );
    println!("alpha_left  {:.4?}", out.gains.alpha_left);
    println!("alpha_right {:.4?}", out.gains.alpha_right);
    println!(
        "conservation residual {:.2e}",
        gain_conservation_check(&out.matching, &out.gains).residual
    );

    let mut env = ProbeEnv::new(&inst, &real, 0)?;
    println!("greedy weight {:.4}", run_greedy(&mut env)?.total_weight());
    let Realization::Adversarial(bits) = &real else {
        unreachable!()
    };
    println!("optimum {:.4}", max_weight_matching(&inst, bits)?.value);
    Ok(())
}
