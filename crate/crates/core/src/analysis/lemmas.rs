//! Per-configuration checks of the primal-dual argument.
//!
//! Each check re-runs weighted Ranking on a fixed realized edge set with all
//! ranks held fixed except possibly that of one left vertex `u`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{BipartiteInstance, EdgeBits, GainShares, Matching};
use crate::probe::{ProbeEnv, ProbeRecord};
use crate::ranking::{exp_gain, run_ranking, ProbeSchedule, RankVector, RankingOutcome};

use super::bound::ONE_MINUS_INV_E;

/// Largest `f64` strictly below 1, standing in for `y_u -> 1`.
pub const RANK_SUP: f64 = 1.0 - f64::EPSILON / 2.0;

/// Slack when comparing matched weights across rank values.
pub const WEIGHT_CMP_TOL: f64 = 1e-12;

/// Default bisection tolerance for marginal ranks.
pub const THETA_TOL: f64 = 1e-6;

/// Grid used by the monotonicity pre-check in [`find_marginal_rank`].
pub const MARGINAL_PRECHECK_GRID: usize = 200;

fn rel_tol(scale: f64) -> f64 {
    1e-9 * (1.0 + scale.abs())
}

/// Runs weighted Ranking once on realized bits.
pub fn ranking_on_bits(
    instance: &BipartiteInstance,
    bits: &EdgeBits,
    ranks: &RankVector,
) -> Result<(RankingOutcome, Vec<ProbeRecord>)> {
    let mut env = ProbeEnv::from_bits(instance, bits)?;
    let out = run_ranking(&mut env, ranks)?;
    Ok((out, env.log().to_vec()))
}

fn matched_weight_of(instance: &BipartiteInstance, m: &Matching, u: usize) -> f64 {
    m.partner_of_left(u).map_or(0.0, |v| instance.weight(u, v))
}

/// Weight of the edge `u` is matched with (0 if unmatched) when `y_u = y`.
pub fn left_matched_weight(
    instance: &BipartiteInstance,
    bits: &EdgeBits,
    ranks: &RankVector,
    u: usize,
    y: f64,
) -> Result<f64> {
    let ranks = ranks.with_rank(u, y)?;
    let (out, _) = ranking_on_bits(instance, bits, &ranks)?;
    Ok(matched_weight_of(instance, &out.matching, u))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConservationReport {
    pub residual: f64,
    pub pass: bool,
}

/// Sum of all gains against the matching weight; passes within `1e-9 (1 + W)`.
pub fn gain_conservation_check(matching: &Matching, gains: &GainShares) -> ConservationReport {
    let total = matching.total_weight();
    let residual = (gains.total() - total).abs();
    ConservationReport {
        residual,
        pass: residual <= rel_tol(total),
    }
}

/// Checks the per-vertex gain invariants: unmatched vertices hold zero,
/// matched pairs split `w_uv` with `alpha_u in [w/e, w]` and
/// `alpha_v in [0, w (1 - 1/e)]`.
pub fn gain_split_check(
    instance: &BipartiteInstance,
    matching: &Matching,
    gains: &GainShares,
) -> bool {
    let mut left = vec![false; instance.n_left()];
    let mut right = vec![false; instance.n_right()];
    for &(u, v) in matching.pairs() {
        left[u] = true;
        right[v] = true;
        let w = instance.weight(u, v);
        let (a, b) = (gains.alpha_left[u], gains.alpha_right[v]);
        let tol = rel_tol(w);
        if (a + b - w).abs() > tol
            || a < w * exp_gain(0.0) - tol
            || a > w + tol
            || b < -tol
            || b > w * ONE_MINUS_INV_E + tol
        {
            return false;
        }
    }
    let zero_l = left
        .iter()
        .zip(&gains.alpha_left)
        .all(|(&m, &a)| m || a == 0.0);
    let zero_r = right
        .iter()
        .zip(&gains.alpha_right)
        .all(|(&m, &a)| m || a == 0.0);
    zero_l && zero_r
}

/// Replays `schedule` against `log`: the log must be a subsequence of the
/// schedule and every skipped entry must have had a matched endpoint when its
/// turn came.
pub fn schedule_conformance_check(
    instance: &BipartiteInstance,
    schedule: &ProbeSchedule,
    log: &[ProbeRecord],
) -> bool {
    let mut left = vec![false; instance.n_left()];
    let mut right = vec![false; instance.n_right()];
    let mut next = 0;
    for e in schedule.entries() {
        match log.get(next) {
            Some(r) if r.u == e.u && r.v == e.v => {
                if left[e.u] || right[e.v] {
                    return false;
                }
                if r.outcome == crate::probe::ProbeOutcome::Matched {
                    left[e.u] = true;
                    right[e.v] = true;
                }
                next += 1;
            }
            _ => {
                if !(left[e.u] || right[e.v]) {
                    return false;
                }
            }
        }
    }
    next == log.len()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MonotonicityViolation {
    pub y_before: f64,
    pub weight_before: f64,
    pub y_after: f64,
    pub weight_after: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonotonicityReport {
    pub u: usize,
    /// `(y_u, matched weight)` at each grid point.
    pub sweep: Vec<(f64, f64)>,
    pub first_violation: Option<MonotonicityViolation>,
}

impl MonotonicityReport {
    pub fn pass(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// Sweeps `y_u` over `k / grid` for `k = 0..grid` with the other ranks fixed
/// and checks that the weight matched by `u` never increases.
pub fn monotonicity_check(
    instance: &BipartiteInstance,
    bits: &EdgeBits,
    ranks: &RankVector,
    u: usize,
    grid: usize,
) -> Result<MonotonicityReport> {
    if grid < 2 {
        return Err(Error::InvalidArgument(format!("grid size {grid} < 2")));
    }
    let sweep = (0..grid)
        .map(|k| {
            let y = k as f64 / grid as f64;
            left_matched_weight(instance, bits, ranks, u, y).map(|w| (y, w))
        })
        .collect::<Result<Vec<_>>>()?;
    let first_violation = sweep.windows(2).find_map(|p| {
        (p[1].1 > p[0].1 + WEIGHT_CMP_TOL).then_some(MonotonicityViolation {
            y_before: p[0].0,
            weight_before: p[0].1,
            y_after: p[1].0,
            weight_after: p[1].1,
        })
    });
    Ok(MonotonicityReport {
        u,
        sweep,
        first_violation,
    })
}

/// Threshold rank of `u` relative to the reference pair `(u, v)`.
///
/// `u` matches an edge of weight at least `w_uv` for `y_u < lower` and a
/// lighter edge (or none) for `y_u >= upper`; `upper - lower <= tol`. When the
/// heavy region is empty both ends are 0, and when it covers `[0,1)` both are 1.
#[derive(Clone, Debug, PartialEq)]
pub struct MarginalRank {
    pub theta: f64,
    pub lower: f64,
    pub upper: f64,
    pub u: usize,
    pub v: usize,
    pub ranks: RankVector,
}

/// Bisects for the marginal rank of `u` with respect to `(u, v)`.
pub fn find_marginal_rank(
    instance: &BipartiteInstance,
    bits: &EdgeBits,
    ranks: &RankVector,
    u: usize,
    v: usize,
    tol: f64,
) -> Result<MarginalRank> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance {tol} must be > 0"
        )));
    }
    if u >= instance.n_left() || v >= instance.n_right() {
        return Err(Error::IndexOutOfRange { u, v });
    }
    let mono = monotonicity_check(instance, bits, ranks, u, MARGINAL_PRECHECK_GRID)?;
    if let Some(x) = mono.first_violation {
        return Err(Error::MonotonicityViolated {
            u,
            y_before: x.y_before,
            before: x.weight_before,
            y_after: x.y_after,
            after: x.weight_after,
        });
    }

    let reference = instance.weight(u, v);
    let heavy = |y: f64| left_matched_weight(instance, bits, ranks, u, y).map(|w| w >= reference);
    let done = |lower: f64, upper: f64| MarginalRank {
        theta: 0.5 * (lower + upper),
        lower,
        upper,
        u,
        v,
        ranks: ranks.clone(),
    };

    if !heavy(0.0)? {
        return Ok(done(0.0, 0.0));
    }
    if heavy(RANK_SUP)? {
        return Ok(done(1.0, 1.0));
    }
    let (mut lo, mut hi) = (0.0f64, RANK_SUP);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if heavy(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(done(lo, hi))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum GainBound {
    /// `alpha_u >= g(y_u) w_uv` below the marginal rank.
    LeftBasic,
    /// `alpha_v >= (1 - g(theta)) w_uv` below the marginal rank.
    RightExtra,
    /// `alpha_v >= (1 - g(theta)) w_uv` at or above the marginal rank.
    RightBasic,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GainViolation {
    pub y: f64,
    pub bound: GainBound,
    pub observed: f64,
    pub required: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GainCheckReport {
    pub below: usize,
    pub above: usize,
    /// Samples inside the bisection bracket, where the side is undetermined.
    pub skipped: usize,
    pub violations: Vec<GainViolation>,
}

impl GainCheckReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Samples `y_u = (k + 1/2) / samples` and checks the gain lower bounds on
/// each side of the marginal rank. `(u, v)` must be a present edge.
///
/// The right-vertex bound uses `marginal.upper`, the conservative end of the
/// bracket.
pub fn marginal_rank_gain_check(
    instance: &BipartiteInstance,
    bits: &EdgeBits,
    marginal: &MarginalRank,
    samples: usize,
) -> Result<GainCheckReport> {
    let (u, v) = (marginal.u, marginal.v);
    if u >= instance.n_left() || v >= instance.n_right() {
        return Err(Error::IndexOutOfRange { u, v });
    }
    if !bits.present(u, v) {
        return Err(Error::InvalidArgument(format!(
            "({u},{v}) is not a present edge"
        )));
    }
    let w = instance.weight(u, v);
    let tol = rel_tol(w);
    let right_required = (1.0 - exp_gain(marginal.upper)) * w;

    let mut report = GainCheckReport {
        below: 0,
        above: 0,
        skipped: 0,
        violations: Vec::new(),
    };
    for k in 0..samples {
        let y = (k as f64 + 0.5) / samples as f64;
        let is_below = y < marginal.lower;
        if !is_below && y < marginal.upper {
            report.skipped += 1;
            continue;
        }
        let (out, _) = ranking_on_bits(instance, bits, &marginal.ranks.with_rank(u, y)?)?;
        let alpha_u = out.gains.alpha_left[u];
        let alpha_v = out.gains.alpha_right[v];
        let mut check = |bound, observed: f64, required: f64| {
            if observed < required - tol {
                report.violations.push(GainViolation {
                    y,
                    bound,
                    observed,
                    required,
                });
            }
        };
        if is_below {
            check(GainBound::LeftBasic, alpha_u, exp_gain(y) * w);
            check(GainBound::RightExtra, alpha_v, right_required);
        } else {
            check(GainBound::RightBasic, alpha_v, right_required);
        }
        if is_below {
            report.below += 1;
        } else {
            report.above += 1;
        }
    }
    Ok(report)
}
