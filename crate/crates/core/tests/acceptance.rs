//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::Command;
use std::time::Instant;

use obliv_match::analysis::{
    analytic_bound, estimate_dual_feasibility, estimate_ratio, find_marginal_rank,
    left_matched_weight, marginal_rank_gain_check, monotonicity_check, Algorithm, RatioEstimate,
    ONE_MINUS_INV_E, THETA_TOL,
};
use obliv_match::seed::rng_from_seed;
use obliv_match::{
    brute_force_mwm, draw_ranks, generate_random, generate_stochastic, generate_upper_triangular,
    max_weight_matching, BipartiteInstance, Comonotone, EdgeBits, Grid, Realization, WeightDist,
};
use rand::Rng;

const TRIALS: u64 = 10_000;
/// Ratio threshold for the desk-scale guarantee (1 - 1/e rounded down).
const RATIO_THRESHOLD: f64 = 0.6321;
const CONSERVATION_REL_TOL: f64 = 1e-9;
const DUAL_SAMPLES: usize = 10_000;
const MONO_CONFIGS: u64 = 100;
const MONO_GRID: usize = 200;
const MARGINAL_CONFIGS: u64 = 50;
const MARGINAL_SWEEP: usize = 10_000;
const MARGINAL_AGREEMENT: f64 = 2e-4;
const GAIN_SAMPLES: usize = 100;
const BOUND_POINTS: usize = 101;
const BOUND_TOL: f64 = 1e-10;
const ORACLE_INSTANCES: u64 = 200;
const ORACLE_TOL: f64 = 1e-9;

const UNIFORM: WeightDist = WeightDist::Uniform {
    low: 0.0,
    high: 1.0,
};

struct Named {
    name: String,
    instance: BipartiteInstance,
    realization: Realization,
}

fn bits_of(r: &Realization) -> &EdgeBits {
    match r {
        Realization::Adversarial(b) => b,
        _ => unreachable!("battery instances are adversarial"),
    }
}

fn battery() -> Vec<Named> {
    let mut out = Vec::new();
    for i in 0..30 {
        let (instance, realization) = generate_random(20, 20, &UNIFORM, 0.5, 1000 + i).unwrap();
        out.push(Named {
            name: format!("random20x20#{i}"),
            instance,
            realization,
        });
    }
    for n in [10, 25, 50] {
        let (instance, realization) = generate_upper_triangular(n).unwrap();
        out.push(Named {
            name: format!("upper-triangular{n}"),
            instance,
            realization,
        });
    }
    out.push(Named {
        name: "blocking2x2".into(),
        instance: BipartiteInstance::from_weights(Grid::filled(2, 2, 1.0)).unwrap(),
        realization: Realization::Adversarial(
            Grid::from_rows(vec![vec![true, true], vec![true, false]]).unwrap(),
        ),
    });
    out
}

fn ratio_ok(est: &RatioEstimate) -> bool {
    est.ratio - est.ci_half_width >= RATIO_THRESHOLD - est.ci_half_width
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn c1_c2() -> (Outcome, Outcome) {
    let mut worst: Option<(String, RatioEstimate)> = None;
    let mut failures = Vec::new();
    let mut trials = 0u64;
    let mut conservation_failures = 0u64;
    let mut max_residual = 0.0f64;
    for (k, case) in battery().into_iter().enumerate() {
        let est = estimate_ratio(
            &case.instance,
            &case.realization,
            Algorithm::Ranking,
            TRIALS,
            7 + k as u64,
        )
        .unwrap();
        trials += est.n_trials;
        conservation_failures += est.conservation_failures;
        max_residual = max_residual.max(est.max_conservation_residual);
        if !ratio_ok(&est) {
            failures.push(case.name.clone());
        }
        if worst.as_ref().is_none_or(|(_, w)| est.ratio < w.ratio) {
            worst = Some((case.name, est));
        }
    }
    let (wname, w) = worst.unwrap();
    let c1 = Outcome {
        pass: failures.is_empty(),
        detail: format!(
            "34 instances x {TRIALS} trials; min ratio {:.4} +/- {:.4} on {wname}; failures {:?}",
            w.ratio, w.ci_half_width, failures
        ),
    };
    let c2 = Outcome {
        pass: conservation_failures == 0,
        detail: format!(
            "{trials} trials, {conservation_failures} failures, max |sum alpha - ALG| = {max_residual:.2e} (tol {CONSERVATION_REL_TOL:.0e}*(1+W))"
        ),
    };
    (c1, c2)
}

fn c3() -> Outcome {
    let mut cases = vec![generate_upper_triangular(10).unwrap()];
    for i in 0..10 {
        cases.push(generate_random(10, 10, &UNIFORM, 0.5, 2000 + i).unwrap());
    }
    let mut edges = 0;
    let mut failed = 0;
    let mut min_margin = f64::INFINITY;
    for (k, (inst, real)) in cases.iter().enumerate() {
        let rep =
            estimate_dual_feasibility(inst, bits_of(real), DUAL_SAMPLES, 31 + k as u64).unwrap();
        for r in &rep.rows {
            edges += 1;
            failed += usize::from(!r.pass);
            min_margin = min_margin.min(r.margin / r.weight);
        }
    }
    Outcome {
        pass: failed == 0,
        detail: format!(
            "{edges} M* edges, {failed} failures, min (E[alpha_u+alpha_v]-(1-1/e)w)/w = {min_margin:.4}"
        ),
    }
}

fn c4() -> Outcome {
    let mut violations = 0;
    for i in 0..MONO_CONFIGS {
        let (inst, real) = generate_random(8, 8, &UNIFORM, 0.5, 3000 + i).unwrap();
        let ranks = draw_ranks(8, 4000 + i);
        let u = rng_from_seed(5000 + i).random_range(0..8);
        let rep = monotonicity_check(&inst, bits_of(&real), &ranks, u, MONO_GRID).unwrap();
        violations += usize::from(!rep.pass());
    }
    Outcome {
        pass: violations == 0,
        detail: format!("{MONO_CONFIGS} configurations, grid {MONO_GRID}, {violations} violations"),
    }
}

/// First grid point at which `u` no longer matches weight >= w_uv.
fn sweep_threshold(
    inst: &BipartiteInstance,
    bits: &EdgeBits,
    ranks: &obliv_match::RankVector,
    u: usize,
    v: usize,
) -> f64 {
    let w = inst.weight(u, v);
    (0..MARGINAL_SWEEP)
        .map(|k| k as f64 / MARGINAL_SWEEP as f64)
        .find(|&y| left_matched_weight(inst, bits, ranks, u, y).unwrap() < w)
        .unwrap_or(1.0)
}

fn c5() -> Outcome {
    let mut done = 0u64;
    let mut seed = 6000u64;
    let mut worst_gap = 0.0f64;
    let mut interior = 0;
    let mut gain_violations = 0;
    while done < MARGINAL_CONFIGS {
        seed += 1;
        let (inst, real) = generate_random(6, 6, &UNIFORM, 0.7, seed).unwrap();
        let bits = bits_of(&real);
        let mut rng = rng_from_seed(seed ^ 0xabcd);
        let u = rng.random_range(0..6);
        let neighbors: Vec<usize> = (0..6).filter(|&v| bits.present(u, v)).collect();
        if neighbors.is_empty() {
            continue;
        }
        let v = neighbors[rng.random_range(0..neighbors.len())];
        let ranks = draw_ranks(6, seed);
        let m = find_marginal_rank(&inst, bits, &ranks, u, v, THETA_TOL).unwrap();
        let gap = (m.theta - sweep_threshold(&inst, bits, &ranks, u, v)).abs();
        worst_gap = worst_gap.max(gap);
        interior += usize::from(m.theta > 0.0 && m.theta < 1.0);
        let rep = marginal_rank_gain_check(&inst, bits, &m, GAIN_SAMPLES).unwrap();
        gain_violations += rep.violations.len();
        done += 1;
    }
    Outcome {
        pass: worst_gap <= MARGINAL_AGREEMENT && gain_violations == 0,
        detail: format!(
            "{MARGINAL_CONFIGS} configurations ({interior} interior theta); max |theta - sweep| = {worst_gap:.2e} (tol {MARGINAL_AGREEMENT:.0e}); {gain_violations} gain violations"
        ),
    }
}

fn c6() -> Outcome {
    let mut worst = 0.0f64;
    let mut worst_quad = 0.0f64;
    for k in 0..BOUND_POINTS {
        let b = analytic_bound(k as f64 / (BOUND_POINTS - 1) as f64).unwrap();
        worst = worst.max((b.value() - ONE_MINUS_INV_E).abs());
        worst_quad = worst_quad.max(b.residual());
    }
    Outcome {
        pass: worst <= BOUND_TOL && worst_quad <= BOUND_TOL,
        detail: format!(
            "{BOUND_POINTS} theta values; max |bound - (1-1/e)| = {worst:.1e}, max |closed form - quadrature| = {worst_quad:.1e}"
        ),
    }
}

fn c7() -> Outcome {
    let mut mismatches = 0;
    let mut rng = rng_from_seed(7000);
    for i in 0..ORACLE_INSTANCES {
        let nl = rng.random_range(1..=7);
        let nr = rng.random_range(1..=9);
        let p = rng.random::<f64>();
        let (inst, real) = generate_random(nl, nr, &UNIFORM, p, 7100 + i).unwrap();
        let a = max_weight_matching(&inst, bits_of(&real)).unwrap().value;
        let b = brute_force_mwm(&inst, bits_of(&real)).unwrap().value;
        mismatches += usize::from((a - b).abs() > ORACLE_TOL);
    }
    Outcome {
        pass: mismatches == 0,
        detail: format!("{ORACLE_INSTANCES} instances, {mismatches} mismatches"),
    }
}

fn c8() -> Outcome {
    let mut failures = Vec::new();
    let mut min_ratio = f64::INFINITY;
    for i in 0..10 {
        let (inst, probs) = generate_stochastic(10, 10, &UNIFORM, 0.0, 1.0, 8000 + i).unwrap();
        let real = Realization::joint(Comonotone::new(probs).unwrap());
        let est = estimate_ratio(&inst, &real, Algorithm::Ranking, TRIALS, 81 + i).unwrap();
        min_ratio = min_ratio.min(est.ratio);
        if !ratio_ok(&est) || est.conservation_failures > 0 {
            failures.push(i);
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!("10 comonotone 10x10 instances x {TRIALS} trials; min ratio {min_ratio:.4}; failures {failures:?}"),
    }
}

fn c9() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    let inst_s = inst.to_str().unwrap().to_owned();
    let run = |args: &[&str], threads: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_obliv-match"))
            .args(args)
            .env("OBLIV_MATCH_THREADS", threads)
            .output()
            .unwrap();
        (o.status.code(), o.stdout)
    };
    let gen = [
        "gen", "--family", "random", "--nl", "12", "--nr", "9", "--p", "0.6", "--seed", "19",
    ];
    let (code, _) = run(&[&gen[..], &["--out", &inst_s]].concat(), "1");
    assert_eq!(code, Some(0));

    let invocations: Vec<Vec<&str>> = vec![
        gen.to_vec(),
        vec![
            "run",
            "--instance",
            &inst_s,
            "--trials",
            "500",
            "--seed",
            "3",
        ],
        vec![
            "run",
            "--instance",
            &inst_s,
            "--trials",
            "200",
            "--seed",
            "3",
            "--algo",
            "greedy",
            "--format",
            "json",
        ],
        vec![
            "ratio",
            "--instance",
            &inst_s,
            "--trials",
            "2000",
            "--seed",
            "5",
        ],
        vec![
            "ratio",
            "--instance",
            &inst_s,
            "--trials",
            "2000",
            "--seed",
            "5",
            "--format",
            "json",
        ],
        vec![
            "verify",
            "--instance",
            &inst_s,
            "--trials",
            "500",
            "--seed",
            "9",
            "--grid",
            "50",
        ],
    ];
    let mut differing = Vec::new();
    for args in &invocations {
        let reference = run(args, "1");
        for threads in ["1", "8"] {
            if run(args, threads) != reference {
                differing.push(format!("{} @{threads}", args[0]));
            }
        }
    }
    Outcome {
        pass: differing.is_empty(),
        detail: format!(
            "{} invocations x (1,1,8 threads); differing: {differing:?}",
            invocations.len()
        ),
    }
}

fn main() {
    let mut all = true;
    let mut report = |id: &str, title: &str, start: Instant, o: Outcome| {
        all &= o.pass;
        println!(
            "[{}] {id} {title}: {} ({:.1}s)",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
    };

    let t = Instant::now();
    let (o1, o2) = c1_c2();
    report("C1", "ratio >= 1-1/e at 99% confidence", t, o1);
    report("C2", "gain conservation on every trial", t, o2);
    let t = Instant::now();
    report("C3", "dual feasibility on M* edges", t, c3());
    let t = Instant::now();
    report("C4", "monotonicity of matched weight in y_u", t, c4());
    let t = Instant::now();
    report("C5", "marginal rank and gain bounds", t, c5());
    let t = Instant::now();
    report("C6", "analytic bound is theta-independent", t, c6());
    let t = Instant::now();
    report("C7", "Hungarian agrees with brute force", t, c7());
    let t = Instant::now();
    report("C8", "perfectly correlated edges", t, c8());
    let t = Instant::now();
    report(
        "C9",
        "CLI output independent of threads and repeats",
        t,
        c9(),
    );

    if !all {
        std::process::exit(1);
    }
}
