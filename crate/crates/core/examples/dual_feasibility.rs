//! Estimates E[alpha_u + alpha_v] for every edge of the optimal matching and
//! compares it with (1 - 1/e) w_uv.

use obliv_match::analysis::estimate_dual_feasibility;
use obliv_match::{generate_random, generate_upper_triangular, Realization, WeightDist};

fn main() -> Result<(), obliv_match::Error> {
    for (name, (inst, real)) in [
        ("upper-triangular 10", generate_upper_triangular(10)?),
        (
            "random 10x10",
            generate_random(
                10,
                10,
                &WeightDist::Uniform {
                    low: 0.0,
                    high: 1.0,
                },
                0.5,
                3,
            )?,
        ),
    ] {
        let Realization::Adversarial(bits) = &real else {
            unreachable!()
        };
        let rep = estimate_dual_feasibility(&inst, bits, 5_000, 1)?;
        println!("{name}: W* = {:.4}", rep.optimum);
        for r in &rep.rows {
            println!(
                "  ({}, {}) w {:.3}: E[gain] {:.4} +/- {:.4} vs target {:.4} {}",
                r.u,
                r.v,
                r.weight,
                r.mean_gain,
                r.ci_half_width,
                r.target,
                if r.pass { "ok" } else { "FAIL" }
            );
        }
    }
    Ok(())
}
