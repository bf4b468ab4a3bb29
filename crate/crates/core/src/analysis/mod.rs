//! Empirical checks of the `1 - 1/e` guarantee and the lemmas behind it.

mod bound;
mod estimate;
mod lemmas;
mod stats;
pub mod suite;

pub use bound::{analytic_bound, AnalyticBound, ONE_MINUS_INV_E};
pub use estimate::{
    estimate_dual_feasibility, estimate_ratio, run_trials, summarize, Algorithm,
    DualFeasibilityReport, DualRow, RatioEstimate, TrialRecord, MIN_DUAL_SAMPLES,
};
pub use lemmas::{
    find_marginal_rank, gain_conservation_check, gain_split_check, left_matched_weight,
    marginal_rank_gain_check, monotonicity_check, ranking_on_bits, schedule_conformance_check,
    ConservationReport, GainBound, GainCheckReport, GainViolation, MarginalRank,
    MonotonicityReport, MonotonicityViolation, MARGINAL_PRECHECK_GRID, RANK_SUP, THETA_TOL,
    WEIGHT_CMP_TOL,
};
pub use stats::{mean_and_half_width, ratio_of_means, Z_99};
