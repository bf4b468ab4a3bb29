//! Instances, realizations, matchings and gain shares.
//!
//! The instance is everything the algorithm is allowed to see: the two vertex
//! sets and a nonnegative weight for every left/right pair. Which pairs are
//! actually edges lives in a separate [`Realization`] that only the probe
//! environment consults.

use std::borrow::Cow;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};

use crate::error::{Error, Result};
use crate::seed::rng_from_seed;

/// Dense row-major `n_left x n_right` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid<T> {
    n_left: usize,
    n_right: usize,
    data: Vec<T>,
}

/// Edge-presence bit per (left, right) pair.
pub type EdgeBits = Grid<bool>;

/// Edge-presence probability per (left, right) pair.
pub type Probabilities = Grid<f64>;

impl<T: Clone> Grid<T> {
    pub fn filled(n_left: usize, n_right: usize, value: T) -> Self {
        Self {
            n_left,
            n_right,
            data: vec![value; n_left * n_right],
        }
    }

    /// Builds a grid from rows; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n_left = rows.len();
        let n_right = rows.first().map_or(0, Vec::len);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n_right) {
            return Err(Error::DimensionMismatch(format!(
                "row {i} has {} entries, expected {n_right}",
                r.len()
            )));
        }
        Ok(Self {
            n_left,
            n_right,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(n_left: usize, n_right: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n_left * n_right);
        for u in 0..n_left {
            for v in 0..n_right {
                data.push(f(u, v));
            }
        }
        Self {
            n_left,
            n_right,
            data,
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        if self.n_right == 0 {
            return vec![Vec::new(); self.n_left];
        }
        self.data.chunks(self.n_right).map(<[T]>::to_vec).collect()
    }
}

impl<T> Grid<T> {
    #[inline]
    pub fn n_left(&self) -> usize {
        self.n_left
    }

    #[inline]
    pub fn n_right(&self) -> usize {
        self.n_right
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.n_left, self.n_right)
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> &T {
        &self.data[u * self.n_right + v]
    }

    #[inline]
    pub fn set(&mut self, u: usize, v: usize, value: T) {
        self.data[u * self.n_right + v] = value;
    }

    /// Entries as `((u, v), value)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &T)> + '_ {
        let nr = self.n_right;
        self.data
            .iter()
            .enumerate()
            .map(move |(k, x)| ((k / nr, k % nr), x))
    }
}

impl EdgeBits {
    #[inline]
    pub fn present(&self, u: usize, v: usize) -> bool {
        *self.get(u, v)
    }

    pub fn count_present(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }
}

/// The known part of an oblivious matching instance.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteInstance {
    weights: Grid<f64>,
}

/// A single problem found by [`BipartiteInstance::validate`].
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    ZeroDimension { n_left: usize, n_right: usize },
    NegativeWeight { u: usize, v: usize, w: f64 },
    NonFiniteWeight { u: usize, v: usize, w: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::ZeroDimension { n_left, n_right } => {
                write!(f, "zero dimension ({n_left}x{n_right})")
            }
            Violation::NegativeWeight { u, v, .. } => write!(f, "negative weight at ({u},{v})"),
            Violation::NonFiniteWeight { u, v, .. } => write!(f, "non-finite weight at ({u},{v})"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl BipartiteInstance {
    /// Builds and validates an instance from weight rows.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::from_weights(Grid::from_rows(rows)?)
    }

    pub fn from_weights(weights: Grid<f64>) -> Result<Self> {
        let inst = Self::from_weights_unchecked(weights);
        let report = inst.validate();
        if report.is_valid() {
            Ok(inst)
        } else {
            Err(Error::InvalidInstance(
                report.violations.iter().map(ToString::to_string).collect(),
            ))
        }
    }

    /// Builds an instance without checking weights. Use [`validate`](Self::validate) afterwards.
    pub fn from_weights_unchecked(weights: Grid<f64>) -> Self {
        Self { weights }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let (n_left, n_right) = self.weights.dims();
        if n_left == 0 || n_right == 0 {
            violations.push(Violation::ZeroDimension { n_left, n_right });
        }
        for ((u, v), &w) in self.weights.entries() {
            if !w.is_finite() {
                violations.push(Violation::NonFiniteWeight { u, v, w });
            } else if w < 0.0 {
                violations.push(Violation::NegativeWeight { u, v, w });
            }
        }
        ValidationReport { violations }
    }

    #[inline]
    pub fn n_left(&self) -> usize {
        self.weights.n_left()
    }

    #[inline]
    pub fn n_right(&self) -> usize {
        self.weights.n_right()
    }

    #[inline]
    pub fn weight(&self, u: usize, v: usize) -> f64 {
        *self.weights.get(u, v)
    }

    pub fn weights(&self) -> &Grid<f64> {
        &self.weights
    }

    /// Returns a copy with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let (nl, nr) = self.weights.dims();
        Self::from_weights(Grid::from_fn(nl, nr, |u, v| self.weight(u, v) * factor))
    }

    pub(crate) fn check_dims<T>(&self, grid: &Grid<T>, what: &str) -> Result<()> {
        if grid.dims() != self.weights.dims() {
            return Err(Error::DimensionMismatch(format!(
                "{what} is {}x{}, instance is {}x{}",
                grid.n_left(),
                grid.n_right(),
                self.n_left(),
                self.n_right()
            )));
        }
        Ok(())
    }

    pub(crate) fn check_dims_pair(&self, dims: (usize, usize)) -> Result<()> {
        if dims != self.weights.dims() {
            return Err(Error::DimensionMismatch(format!(
                "realization is {}x{}, instance is {}x{}",
                dims.0,
                dims.1,
                self.n_left(),
                self.n_right()
            )));
        }
        Ok(())
    }
}

/// A joint law over full edge-presence matrices.
///
/// Implementations must be deterministic functions of the supplied generator.
pub trait JointLaw: Send + Sync + fmt::Debug {
    fn dims(&self) -> (usize, usize);
    fn sample(&self, rng: &mut ChaCha8Rng) -> EdgeBits;

    /// Per-edge probabilities when the law is [`Comonotone`]; used for file output.
    fn comonotone_probabilities(&self) -> Option<&Probabilities> {
        None
    }
}

/// Perfectly correlated edges: a single uniform coin `c` is drawn per trial and
/// edge `(u,v)` is present iff `c < p_uv`. Each edge keeps marginal `p_uv`.
#[derive(Clone, Debug, PartialEq)]
pub struct Comonotone {
    probs: Probabilities,
}

impl Comonotone {
    pub fn new(probs: Probabilities) -> Result<Self> {
        check_probabilities(&probs)?;
        Ok(Self { probs })
    }

    pub fn probabilities(&self) -> &Probabilities {
        &self.probs
    }
}

impl JointLaw for Comonotone {
    fn dims(&self) -> (usize, usize) {
        self.probs.dims()
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> EdgeBits {
        let coin: f64 = rng.random();
        let (nl, nr) = self.probs.dims();
        Grid::from_fn(nl, nr, |u, v| coin < *self.probs.get(u, v))
    }

    fn comonotone_probabilities(&self) -> Option<&Probabilities> {
        Some(&self.probs)
    }
}

/// Shared handle to a joint edge law.
#[derive(Clone, Debug)]
pub struct JointSampler(Arc<dyn JointLaw>);

impl JointSampler {
    pub fn new(law: impl JointLaw + 'static) -> Self {
        Self(Arc::new(law))
    }

    pub fn law(&self) -> &dyn JointLaw {
        &*self.0
    }
}

/// The hidden edge set, or the law it is drawn from.
#[derive(Clone, Debug)]
pub enum Realization {
    /// Edges fixed up front by the adversary.
    Adversarial(EdgeBits),
    /// Each edge present independently with probability `p_uv`.
    IndependentBernoulli(Probabilities),
    /// Arbitrarily correlated edges.
    JointSampler(JointSampler),
}

fn check_probabilities(probs: &Probabilities) -> Result<()> {
    for ((u, v), &p) in probs.entries() {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::ProbabilityOutOfRange { u, v, p });
        }
    }
    Ok(())
}

impl Realization {
    pub fn bernoulli(probs: Probabilities) -> Result<Self> {
        check_probabilities(&probs)?;
        Ok(Realization::IndependentBernoulli(probs))
    }

    pub fn joint(law: impl JointLaw + 'static) -> Self {
        Realization::JointSampler(JointSampler::new(law))
    }

    pub fn dims(&self) -> (usize, usize) {
        match self {
            Realization::Adversarial(bits) => bits.dims(),
            Realization::IndependentBernoulli(p) => p.dims(),
            Realization::JointSampler(s) => s.law().dims(),
        }
    }

    pub fn is_deterministic(&self) -> bool {
        matches!(self, Realization::Adversarial(_))
    }

    /// Draws the edge bits of one trial. Adversarial bits are borrowed.
    pub fn sample_bits(&self, trial_seed: u64) -> Cow<'_, EdgeBits> {
        match self {
            Realization::Adversarial(bits) => Cow::Borrowed(bits),
            Realization::IndependentBernoulli(probs) => {
                let mut rng = rng_from_seed(trial_seed);
                let (nl, nr) = probs.dims();
                Cow::Owned(Grid::from_fn(nl, nr, |u, v| {
                    rng.random::<f64>() < *probs.get(u, v)
                }))
            }
            Realization::JointSampler(s) => {
                let mut rng = rng_from_seed(trial_seed);
                Cow::Owned(s.law().sample(&mut rng))
            }
        }
    }
}

/// A set of vertex-disjoint (left, right) pairs with its total weight.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Matching {
    pairs: Vec<(usize, usize)>,
    total_weight: f64,
}

impl Matching {
    /// Builds a matching, rejecting pairs that reuse a vertex or fall outside the instance.
    pub fn from_pairs(instance: &BipartiteInstance, pairs: Vec<(usize, usize)>) -> Result<Self> {
        let mut left = vec![false; instance.n_left()];
        let mut right = vec![false; instance.n_right()];
        for &(u, v) in &pairs {
            if u >= left.len() || v >= right.len() {
                return Err(Error::IndexOutOfRange { u, v });
            }
            if left[u] || right[v] {
                return Err(Error::VertexReused { u, v });
            }
            left[u] = true;
            right[v] = true;
        }
        let total_weight = pairs.iter().map(|&(u, v)| instance.weight(u, v)).sum();
        Ok(Self {
            pairs,
            total_weight,
        })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Pairs in the order they were added.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn partner_of_left(&self, u: usize) -> Option<usize> {
        self.pairs.iter().find(|p| p.0 == u).map(|p| p.1)
    }

    pub fn partner_of_right(&self, v: usize) -> Option<usize> {
        self.pairs.iter().find(|p| p.1 == v).map(|p| p.0)
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.pairs.contains(&(u, v))
    }
}

/// Dual values assigned to vertices by gain sharing.
#[derive(Clone, Debug, PartialEq)]
pub struct GainShares {
    pub alpha_left: Vec<f64>,
    pub alpha_right: Vec<f64>,
}

impl GainShares {
    pub fn zeros(n_left: usize, n_right: usize) -> Self {
        Self {
            alpha_left: vec![0.0; n_left],
            alpha_right: vec![0.0; n_right],
        }
    }

    pub fn total(&self) -> f64 {
        self.alpha_left.iter().sum::<f64>() + self.alpha_right.iter().sum::<f64>()
    }
}

/// Distribution of i.i.d. instance weights.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WeightDist {
    Uniform { low: f64, high: f64 },
    Constant(f64),
    Exponential { rate: f64 },
}

impl WeightDist {
    fn check(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidDistribution(msg));
        match *self {
            WeightDist::Uniform { low, high } => {
                if !(low.is_finite() && high.is_finite()) || low < 0.0 || high < low {
                    return bad(format!(
                        "uniform needs 0 <= low <= high, got [{low},{high}]"
                    ));
                }
            }
            WeightDist::Constant(c) => {
                if !c.is_finite() || c < 0.0 {
                    return bad(format!("constant weight must be finite and >= 0, got {c}"));
                }
            }
            WeightDist::Exponential { rate } => {
                if !rate.is_finite() || rate <= 0.0 {
                    return bad(format!("exponential rate must be > 0, got {rate}"));
                }
            }
        }
        Ok(())
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        match *self {
            WeightDist::Uniform { low, high } => low + (high - low) * rng.random::<f64>(),
            WeightDist::Constant(c) => c,
            WeightDist::Exponential { rate } => Exp::new(rate).expect("checked rate").sample(rng),
        }
    }
}

impl FromStr for WeightDist {
    type Err = Error;

    /// Parses `uniform:LOW,HIGH`, `constant:C` or `exp:RATE`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidDistribution(format!("cannot parse weight distribution {s:?}"));
        let (kind, args) = s.split_once(':').unwrap_or((s, ""));
        let nums = args
            .split(',')
            .filter(|a| !a.trim().is_empty())
            .map(|a| a.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        let dist = match (kind.trim(), nums.as_slice()) {
            ("uniform", []) => WeightDist::Uniform {
                low: 0.0,
                high: 1.0,
            },
            ("uniform", &[low, high]) => WeightDist::Uniform { low, high },
            ("constant", &[c]) => WeightDist::Constant(c),
            ("exp", &[rate]) => WeightDist::Exponential { rate },
            _ => return Err(bad()),
        };
        dist.check()?;
        Ok(dist)
    }
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Probability(p));
    }
    Ok(())
}

/// Random instance with i.i.d. weights and an adversarial realization in which
/// each edge is present independently with probability `p`.
pub fn generate_random(
    n_left: usize,
    n_right: usize,
    dist: &WeightDist,
    p: f64,
    seed: u64,
) -> Result<(BipartiteInstance, Realization)> {
    check_probability(p)?;
    dist.check()?;
    if n_left == 0 || n_right == 0 {
        return Err(Error::InvalidArgument(
            "both sides need at least one vertex".into(),
        ));
    }
    let mut rng = rng_from_seed(seed);
    let weights = Grid::from_fn(n_left, n_right, |_, _| dist.sample(&mut rng));
    let bits = Grid::from_fn(n_left, n_right, |_, _| rng.random::<f64>() < p);
    Ok((
        BipartiteInstance::from_weights(weights)?,
        Realization::Adversarial(bits),
    ))
}

/// Random weights together with random per-edge probabilities in `[p_low, p_high]`.
pub fn generate_stochastic(
    n_left: usize,
    n_right: usize,
    dist: &WeightDist,
    p_low: f64,
    p_high: f64,
    seed: u64,
) -> Result<(BipartiteInstance, Probabilities)> {
    check_probability(p_low)?;
    check_probability(p_high)?;
    if p_high < p_low {
        return Err(Error::InvalidArgument(format!(
            "empty probability range [{p_low},{p_high}]"
        )));
    }
    dist.check()?;
    if n_left == 0 || n_right == 0 {
        return Err(Error::InvalidArgument(
            "both sides need at least one vertex".into(),
        ));
    }
    let mut rng = rng_from_seed(seed);
    let weights = Grid::from_fn(n_left, n_right, |_, _| dist.sample(&mut rng));
    let probs = Grid::from_fn(n_left, n_right, |_, _| {
        p_low + (p_high - p_low) * rng.random::<f64>()
    });
    Ok((BipartiteInstance::from_weights(weights)?, probs))
}

/// `n x n` unit-weight instance whose edge `(i,j)` exists iff `i <= j`.
pub fn generate_upper_triangular(n: usize) -> Result<(BipartiteInstance, Realization)> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "upper-triangular family needs n >= 1".into(),
        ));
    }
    let weights = Grid::filled(n, n, 1.0);
    let bits = Grid::from_fn(n, n, |i, j| i <= j);
    Ok((
        BipartiteInstance::from_weights(weights)?,
        Realization::Adversarial(bits),
    ))
}
