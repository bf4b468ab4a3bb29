//! Monte Carlo estimators over rank vectors and edge realizations.
//!
//! Trials run in parallel on the current rayon pool. Trial `t` draws its edge
//! bits and ranks from seeds derived from `(master seed, t)`, and results are
//! collected in trial order before any reduction, so the output does not
//! depend on the number of threads.

use std::borrow::Cow;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{BipartiteInstance, EdgeBits, Realization};
use crate::oracle::{max_weight_matching, OptimalResult};
use crate::probe::ProbeEnv;
use crate::ranking::{draw_ranks, run_greedy, run_ranking};
use crate::seed::{trial_seed, Stream};

use super::bound::ONE_MINUS_INV_E;
use super::lemmas::{gain_conservation_check, ranking_on_bits};
use super::stats::{mean_and_half_width, ratio_of_means};

/// Minimum number of rank samples for [`estimate_dual_feasibility`].
pub const MIN_DUAL_SAMPLES: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Ranking,
    Greedy,
}

/// Outcome of a single trial.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    /// Seed of the rank vector (ranking) or of the edge bits (greedy).
    pub seed: u64,
    pub alg_weight: f64,
    pub opt_weight: f64,
    pub probes: usize,
    /// `|sum alpha - ALG|`; zero for greedy, which assigns no gains.
    pub conservation_residual: f64,
    pub conservation_pass: bool,
}

fn edge_seed(master: u64, t: u64) -> u64 {
    trial_seed(master, Stream::Edges, t)
}

fn rank_seed(master: u64, t: u64) -> u64 {
    trial_seed(master, Stream::Ranks, t)
}

/// Runs `n_trials` independent trials of `algorithm`.
///
/// Each trial draws fresh edge bits (stochastic realizations) and fresh ranks,
/// and records `W*` of the same bits.
pub fn run_trials(
    instance: &BipartiteInstance,
    realization: &Realization,
    algorithm: Algorithm,
    n_trials: u64,
    master_seed: u64,
) -> Result<Vec<TrialRecord>> {
    if n_trials == 0 {
        return Err(Error::InvalidArgument("n_trials must be >= 1".into()));
    }
    instance.check_dims_pair(realization.dims())?;
    let fixed_opt = match realization {
        Realization::Adversarial(bits) => Some(max_weight_matching(instance, bits)?.value),
        _ => None,
    };
    (0..n_trials)
        .into_par_iter()
        .map(|t| {
            let bits: Cow<'_, EdgeBits> = realization.sample_bits(edge_seed(master_seed, t));
            let opt_weight = match fixed_opt {
                Some(v) => v,
                None => max_weight_matching(instance, &bits)?.value,
            };
            let mut env = ProbeEnv::from_bits(instance, &bits)?;
            let rec = match algorithm {
                Algorithm::Ranking => {
                    let seed = rank_seed(master_seed, t);
                    let out = run_ranking(&mut env, &draw_ranks(instance.n_left(), seed))?;
                    let c = gain_conservation_check(&out.matching, &out.gains);
                    TrialRecord {
                        trial: t,
                        seed,
                        alg_weight: out.matching.total_weight(),
                        opt_weight,
                        probes: env.probes_used(),
                        conservation_residual: c.residual,
                        conservation_pass: c.pass,
                    }
                }
                Algorithm::Greedy => {
                    let m = run_greedy(&mut env)?;
                    TrialRecord {
                        trial: t,
                        seed: edge_seed(master_seed, t),
                        alg_weight: m.total_weight(),
                        opt_weight,
                        probes: env.probes_used(),
                        conservation_residual: 0.0,
                        conservation_pass: true,
                    }
                }
            };
            Ok(rec)
        })
        .collect()
}

/// Monte Carlo estimate of `E[ALG] / E[W*]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RatioEstimate {
    pub n_trials: u64,
    pub alg_mean: f64,
    pub opt_mean: f64,
    pub ratio: f64,
    /// 99% delta-method half-width on `ratio`.
    pub ci_half_width: f64,
    pub conservation_failures: u64,
    pub max_conservation_residual: f64,
}

impl RatioEstimate {
    pub fn lower_bound(&self) -> f64 {
        self.ratio - self.ci_half_width
    }

    /// Whether the lower confidence bound clears `1 - 1/e - slack`.
    pub fn meets_target(&self, slack: f64) -> bool {
        self.lower_bound() >= ONE_MINUS_INV_E - slack
    }
}

/// Reduces trial records in trial order.
pub fn summarize(records: &[TrialRecord]) -> RatioEstimate {
    let alg: Vec<f64> = records.iter().map(|r| r.alg_weight).collect();
    let opt: Vec<f64> = records.iter().map(|r| r.opt_weight).collect();
    let (alg_mean, opt_mean, ratio, ci_half_width) = ratio_of_means(&alg, &opt);
    RatioEstimate {
        n_trials: records.len() as u64,
        alg_mean,
        opt_mean,
        ratio,
        ci_half_width,
        conservation_failures: records.iter().filter(|r| !r.conservation_pass).count() as u64,
        max_conservation_residual: records
            .iter()
            .map(|r| r.conservation_residual)
            .fold(0.0, f64::max),
    }
}

pub fn estimate_ratio(
    instance: &BipartiteInstance,
    realization: &Realization,
    algorithm: Algorithm,
    n_trials: u64,
    master_seed: u64,
) -> Result<RatioEstimate> {
    let records = run_trials(instance, realization, algorithm, n_trials, master_seed)?;
    Ok(summarize(&records))
}

/// Condition-(2) estimate for one edge of `M*`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DualRow {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
    /// Monte Carlo mean of `alpha_u + alpha_v`.
    pub mean_gain: f64,
    pub ci_half_width: f64,
    /// `(1 - 1/e) w_uv`.
    pub target: f64,
    /// `mean_gain - target`.
    pub margin: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualFeasibilityReport {
    pub n_samples: usize,
    pub optimum: f64,
    pub rows: Vec<DualRow>,
}

impl DualFeasibilityReport {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

/// Estimates `E_y[alpha_u + alpha_v]` for every `(u,v)` in the oracle's `M*`.
///
/// Sample `k` uses the same rank seed as trial `k` of [`run_trials`] with the
/// same master seed. An edge passes when
/// `mean + ci >= (1 - 1/e) w_uv - ci`.
pub fn estimate_dual_feasibility(
    instance: &BipartiteInstance,
    bits: &EdgeBits,
    n_rank_samples: usize,
    seed: u64,
) -> Result<DualFeasibilityReport> {
    if n_rank_samples < MIN_DUAL_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_DUAL_SAMPLES} rank samples, got {n_rank_samples}"
        )));
    }
    let OptimalResult {
        matching: opt,
        value,
    } = max_weight_matching(instance, bits)?;
    let pairs = opt.pairs().to_vec();
    let samples: Vec<Vec<f64>> = (0..n_rank_samples as u64)
        .into_par_iter()
        .map(|k| {
            let ranks = draw_ranks(instance.n_left(), rank_seed(seed, k));
            let (out, _) = ranking_on_bits(instance, bits, &ranks)?;
            Ok(pairs
                .iter()
                .map(|&(u, v)| out.gains.alpha_left[u] + out.gains.alpha_right[v])
                .collect())
        })
        .collect::<Result<_>>()?;

    let rows = pairs
        .iter()
        .enumerate()
        .map(|(i, &(u, v))| {
            let column: Vec<f64> = samples.iter().map(|s| s[i]).collect();
            let (mean_gain, ci) = mean_and_half_width(&column);
            let weight = instance.weight(u, v);
            let target = ONE_MINUS_INV_E * weight;
            DualRow {
                u,
                v,
                weight,
                mean_gain,
                ci_half_width: ci,
                target,
                margin: mean_gain - target,
                pass: mean_gain + ci >= target - ci,
            }
        })
        .collect();
    Ok(DualFeasibilityReport {
        n_samples: n_rank_samples,
        optimum: value,
        rows,
    })
}
