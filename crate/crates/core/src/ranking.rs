//! Weighted Ranking and the greedy baseline.
//!
//! Every left vertex `u` draws a rank `y_u` uniformly from `[0,1)`. Pair
//! `(u,v)` gets the perturbed weight `(1 - g(y_u)) * w_uv` with
//! `g(y) = e^(y-1)`, and pairs are probed in descending perturbed weight.
//! When `(u,v)` is committed, `u` keeps `g(y_u) * w_uv` and `v` keeps the rest.

use rand::Rng;

use crate::error::{Error, Result};
use crate::instance::{BipartiteInstance, GainShares, Matching};
use crate::probe::{ProbeEnv, ProbeOutcome};
use crate::seed::rng_from_seed;

/// A non-decreasing map `[0,1] -> [0,1]` used to perturb weights and split gains.
pub type GainFn = fn(f64) -> f64;

/// `e^(y-1)` without a domain check.
#[inline]
pub fn exp_gain(y: f64) -> f64 {
    (y - 1.0).exp()
}

/// `g(y) = e^(y-1)` on `[0,1]`.
pub fn g(y: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::Domain(y));
    }
    Ok(exp_gain(y))
}

/// One rank in `[0,1)` per left vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct RankVector(Vec<f64>);

impl RankVector {
    pub fn new(ranks: Vec<f64>) -> Result<Self> {
        if let Some(&y) = ranks.iter().find(|y| !(0.0..1.0).contains(*y)) {
            return Err(Error::InvalidArgument(format!("rank {y} outside [0,1)")));
        }
        Ok(Self(ranks))
    }

    #[inline]
    pub fn get(&self, u: usize) -> f64 {
        self.0[u]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Copy with the rank of `u` replaced by `y`.
    pub fn with_rank(&self, u: usize, y: f64) -> Result<Self> {
        if u >= self.0.len() {
            return Err(Error::InvalidArgument(format!(
                "left vertex {u} out of range"
            )));
        }
        let mut ranks = self.0.clone();
        ranks[u] = y;
        Self::new(ranks)
    }
}

/// Draws `n_left` i.i.d. uniform ranks from `seed`.
pub fn draw_ranks(n_left: usize, seed: u64) -> RankVector {
    let mut rng = rng_from_seed(seed);
    RankVector((0..n_left).map(|_| rng.random::<f64>()).collect())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScheduleEntry {
    pub u: usize,
    pub v: usize,
    pub perturbed: f64,
}

/// Positive-weight pairs in probe order.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeSchedule(Vec<ScheduleEntry>);

impl ProbeSchedule {
    pub fn entries(&self) -> &[ScheduleEntry] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sorts descending by key, ties by smaller `u` then smaller `v`.
    fn sorted(mut entries: Vec<ScheduleEntry>) -> Self {
        entries.sort_by(|a, b| {
            b.perturbed
                .total_cmp(&a.perturbed)
                .then(a.u.cmp(&b.u))
                .then(a.v.cmp(&b.v))
        });
        Self(entries)
    }
}

/// Result of one Ranking trial.
#[derive(Clone, Debug)]
pub struct RankingOutcome {
    pub matching: Matching,
    pub gains: GainShares,
    pub schedule: ProbeSchedule,
}

/// Weighted Ranking with a configurable gain function (`e^(y-1)` by default).
#[derive(Clone, Copy, Debug)]
pub struct WeightedRanking {
    gain: GainFn,
}

impl Default for WeightedRanking {
    fn default() -> Self {
        Self { gain: exp_gain }
    }
}

impl WeightedRanking {
    pub fn with_gain(gain: GainFn) -> Self {
        Self { gain }
    }

    #[inline]
    pub fn gain(&self, y: f64) -> f64 {
        (self.gain)(y)
    }

    pub fn schedule(
        &self,
        instance: &BipartiteInstance,
        ranks: &RankVector,
    ) -> Result<ProbeSchedule> {
        if ranks.len() != instance.n_left() {
            return Err(Error::DimensionMismatch(format!(
                "{} ranks for {} left vertices",
                ranks.len(),
                instance.n_left()
            )));
        }
        let mut entries = Vec::with_capacity(instance.n_left() * instance.n_right());
        for u in 0..instance.n_left() {
            let keep = 1.0 - self.gain(ranks.get(u));
            for v in 0..instance.n_right() {
                let w = instance.weight(u, v);
                if w > 0.0 {
                    entries.push(ScheduleEntry {
                        u,
                        v,
                        perturbed: keep * w,
                    });
                }
            }
        }
        Ok(ProbeSchedule::sorted(entries))
    }

    /// Runs one trial on a fresh environment.
    pub fn run(&self, env: &mut ProbeEnv<'_>, ranks: &RankVector) -> Result<RankingOutcome> {
        let instance = env.instance();
        let schedule = self.schedule(instance, ranks)?;
        let mut gains = GainShares::zeros(instance.n_left(), instance.n_right());
        for e in schedule.entries() {
            if env.is_left_matched(e.u) || env.is_right_matched(e.v) {
                continue;
            }
            if env.probe(e.u, e.v)? == ProbeOutcome::Matched {
                let w = instance.weight(e.u, e.v);
                let share = self.gain(ranks.get(e.u));
                debug_assert!(gains.alpha_left[e.u] == 0.0 && gains.alpha_right[e.v] == 0.0);
                gains.alpha_left[e.u] = share * w;
                gains.alpha_right[e.v] = (1.0 - share) * w;
            }
        }
        Ok(RankingOutcome {
            matching: env.final_matching(),
            gains,
            schedule,
        })
    }
}

/// Perturbed-weight schedule with `g(y) = e^(y-1)`.
pub fn build_schedule(instance: &BipartiteInstance, ranks: &RankVector) -> Result<ProbeSchedule> {
    WeightedRanking::default().schedule(instance, ranks)
}

/// Weighted Ranking with `g(y) = e^(y-1)`.
pub fn run_ranking(env: &mut ProbeEnv<'_>, ranks: &RankVector) -> Result<RankingOutcome> {
    WeightedRanking::default().run(env, ranks)
}

/// Probes positive-weight pairs by descending raw weight, ties by index.
pub fn run_greedy(env: &mut ProbeEnv<'_>) -> Result<Matching> {
    let instance = env.instance();
    let mut entries = Vec::new();
    for ((u, v), &w) in instance.weights().entries() {
        if w > 0.0 {
            entries.push(ScheduleEntry { u, v, perturbed: w });
        }
    }
    for e in ProbeSchedule::sorted(entries).entries() {
        if env.is_left_matched(e.u) || env.is_right_matched(e.v) {
            continue;
        }
        env.probe(e.u, e.v)?;
    }
    Ok(env.final_matching())
}
