//! Weighted Ranking for edge-weighted oblivious matching on bipartite graphs.
//!
//! The algorithm sees only the vertex sets and a weight for every pair; edges
//! are discovered by probing under query-commit rules. Each left vertex draws a
//! uniform rank `y_u`, pairs are probed in descending `(1 - e^(y_u - 1)) w_uv`,
//! and the result is a `1 - 1/e` approximation of the maximum-weight matching
//! in expectation.
//!
//! Besides the algorithm, the crate ships an exact offline oracle and a set of
//! Monte Carlo checks of the primal-dual argument behind the guarantee. See the
//! `examples/` directory for one runnable program per capability.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod instance;
pub mod io;
pub mod oracle;
pub mod probe;
pub mod ranking;
pub mod seed;

pub use error::{Error, Result};
pub use instance::{
    generate_random, generate_stochastic, generate_upper_triangular, BipartiteInstance, Comonotone,
    EdgeBits, GainShares, Grid, JointLaw, JointSampler, Matching, Probabilities, Realization,
    WeightDist,
};
pub use oracle::{brute_force_mwm, max_weight_matching, OptimalResult};
pub use probe::{ProbeEnv, ProbeOutcome, ProbeRecord};
pub use ranking::{
    build_schedule, draw_ranks, g, run_greedy, run_ranking, ProbeSchedule, RankVector,
    RankingOutcome, WeightedRanking,
};
