//! The full verification suite run by `obliv-match verify`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{BipartiteInstance, EdgeBits, Realization};
use crate::oracle::max_weight_matching;
use crate::ranking::draw_ranks;
use crate::seed::{trial_seed, Stream};

use super::bound::{analytic_bound, ONE_MINUS_INV_E};
use super::estimate::{estimate_dual_feasibility, MIN_DUAL_SAMPLES};
use super::lemmas::{
    find_marginal_rank, gain_conservation_check, gain_split_check, marginal_rank_gain_check,
    monotonicity_check, ranking_on_bits, schedule_conformance_check, WEIGHT_CMP_TOL,
};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteConfig {
    /// Ranking trials for the per-trial checks, and rank samples for dual feasibility.
    pub trials: usize,
    /// Monotonicity grid size.
    pub grid: usize,
    pub seed: u64,
    pub theta_tol: f64,
    /// `y_u` samples per marginal-rank gain check.
    pub gain_samples: usize,
    /// Number of equally spaced `theta` values for the analytic bound.
    pub bound_points: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            trials: 10_000,
            grid: 200,
            seed: 0,
            theta_tol: super::lemmas::THETA_TOL,
            gain_samples: 100,
            bound_points: 101,
        }
    }
}

/// One line of the suite report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRow {
    pub check: &'static str,
    pub subject: String,
    pub observed: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub rows: Vec<CheckRow>,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

fn count_row(check: &'static str, subject: String, failures: usize) -> CheckRow {
    CheckRow {
        check,
        subject,
        observed: failures as f64,
        threshold: 0.0,
        pass: failures == 0,
    }
}

/// Runs every check on `instance`.
///
/// Per-trial checks (conservation, gain split, schedule conformance) draw
/// fresh edge bits and ranks each trial. The per-vertex checks run on the
/// bits and ranks of trial 0.
pub fn run_suite(
    instance: &BipartiteInstance,
    realization: &Realization,
    config: &SuiteConfig,
) -> Result<SuiteReport> {
    if config.trials < MIN_DUAL_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "verify needs at least {MIN_DUAL_SAMPLES} trials, got {}",
            config.trials
        )));
    }
    instance.check_dims_pair(realization.dims())?;
    let mut rows = per_trial_rows(instance, realization, config)?;

    let bits = realization.sample_bits(trial_seed(config.seed, Stream::Edges, 0));
    let ranks = draw_ranks(instance.n_left(), trial_seed(config.seed, Stream::Ranks, 0));
    let opt = max_weight_matching(instance, &bits)?;

    let per_vertex = (0..instance.n_left())
        .into_par_iter()
        .map(|u| {
            let mut out = Vec::new();
            let mono = monotonicity_check(instance, &bits, &ranks, u, config.grid)?;
            let rise = mono
                .sweep
                .windows(2)
                .map(|p| p[1].1 - p[0].1)
                .fold(0.0, f64::max);
            out.push(CheckRow {
                check: "monotonicity",
                subject: format!("u={u}"),
                observed: rise,
                threshold: WEIGHT_CMP_TOL,
                pass: mono.pass(),
            });
            if let Some(v) = reference_partner(instance, &bits, opt.matching.partner_of_left(u), u)
            {
                let row = match find_marginal_rank(instance, &bits, &ranks, u, v, config.theta_tol)
                {
                    Ok(m) => {
                        let r = marginal_rank_gain_check(instance, &bits, &m, config.gain_samples)?;
                        count_row(
                            "marginal-rank-gain",
                            format!("u={u} v={v} theta={:.6}", m.theta),
                            r.violations.len(),
                        )
                    }
                    Err(Error::MonotonicityViolated { .. }) => {
                        count_row("marginal-rank-gain", format!("u={u} v={v} theta=?"), 1)
                    }
                    Err(e) => return Err(e),
                };
                out.push(row);
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    rows.extend(per_vertex.into_iter().flatten());

    let dual = estimate_dual_feasibility(instance, &bits, config.trials, config.seed)?;
    rows.extend(dual.rows.iter().map(|r| CheckRow {
        check: "dual-feasibility",
        subject: format!("u={} v={}", r.u, r.v),
        observed: r.mean_gain,
        threshold: r.target - 2.0 * r.ci_half_width,
        pass: r.pass,
    }));

    rows.push(analytic_row(config.bound_points)?);
    Ok(SuiteReport { rows })
}

/// `M*` partner of `u`, else its heaviest present edge.
fn reference_partner(
    instance: &BipartiteInstance,
    bits: &EdgeBits,
    opt_partner: Option<usize>,
    u: usize,
) -> Option<usize> {
    opt_partner.or_else(|| {
        (0..instance.n_right())
            .filter(|&v| bits.present(u, v) && instance.weight(u, v) > 0.0)
            .fold(None, |best: Option<usize>, v| match best {
                Some(b) if instance.weight(u, b) >= instance.weight(u, v) => Some(b),
                _ => Some(v),
            })
    })
}

fn per_trial_rows(
    instance: &BipartiteInstance,
    realization: &Realization,
    config: &SuiteConfig,
) -> Result<Vec<CheckRow>> {
    let flags = (0..config.trials as u64)
        .into_par_iter()
        .map(|t| {
            let bits = realization.sample_bits(trial_seed(config.seed, Stream::Edges, t));
            let ranks = draw_ranks(instance.n_left(), trial_seed(config.seed, Stream::Ranks, t));
            let (out, log) = ranking_on_bits(instance, &bits, &ranks)?;
            Ok([
                gain_conservation_check(&out.matching, &out.gains).pass,
                gain_split_check(instance, &out.matching, &out.gains),
                schedule_conformance_check(instance, &out.schedule, &log),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let failures = |i: usize| flags.iter().filter(|f| !f[i]).count();
    let subject = format!("{} trials", config.trials);
    Ok(vec![
        count_row("conservation", subject.clone(), failures(0)),
        count_row("gain-split", subject.clone(), failures(1)),
        count_row("schedule-conformance", subject, failures(2)),
    ])
}

fn analytic_row(points: usize) -> Result<CheckRow> {
    let points = points.max(2);
    let mut worst = 0.0f64;
    for k in 0..points {
        let b = analytic_bound(k as f64 / (points - 1) as f64)?;
        worst = worst
            .max((b.value() - ONE_MINUS_INV_E).abs())
            .max(b.residual());
    }
    Ok(CheckRow {
        check: "analytic-bound",
        subject: format!("{points} theta values"),
        observed: worst,
        threshold: 1e-10,
        pass: worst <= 1e-10,
    })
}
