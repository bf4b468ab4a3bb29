//! Per-trial seed derivation.
//!
//! Every random draw in a trial is keyed by `(master seed, stream, trial index)`
//! so that serial and parallel runs see identical streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent random streams used within one trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    /// Edge-presence bits of stochastic realizations.
    Edges = 1,
    /// Left-vertex ranks.
    Ranks = 2,
    /// Instance generation and auxiliary sampling.
    Aux = 3,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives the seed of `stream` for trial `trial` from a master seed.
pub fn trial_seed(master: u64, stream: Stream, trial: u64) -> u64 {
    let s = splitmix64(master ^ splitmix64(stream as u64));
    splitmix64(s ^ splitmix64(trial.wrapping_add(0x632b_e59b_d9b4_e019)))
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
