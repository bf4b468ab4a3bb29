//! Query-commit probing environment.
//!
//! A [`ProbeEnv`] owns the realized edge bits of one trial. Algorithms may only
//! learn about edges by probing a pair of currently unmatched vertices; a
//! present edge is committed on the spot and never removed.

use std::borrow::Cow;
use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{BipartiteInstance, EdgeBits, Grid, Matching, Realization};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ProbeOutcome {
    Matched,
    EdgeAbsent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProbeRecord {
    pub u: usize,
    pub v: usize,
    pub outcome: ProbeOutcome,
}

#[derive(Debug)]
pub struct ProbeEnv<'a> {
    instance: &'a BipartiteInstance,
    bits: Cow<'a, EdgeBits>,
    probed: Grid<bool>,
    left_matched: Vec<bool>,
    right_matched: Vec<bool>,
    committed: Vec<(usize, usize)>,
    log: Vec<ProbeRecord>,
}

impl<'a> ProbeEnv<'a> {
    /// Opens a trial. Stochastic realizations draw their full bit matrix here,
    /// once, from `trial_seed`.
    pub fn new(
        instance: &'a BipartiteInstance,
        realization: &'a Realization,
        trial_seed: u64,
    ) -> Result<Self> {
        instance.check_dims_pair(realization.dims())?;
        Ok(Self::with_bits(
            instance,
            realization.sample_bits(trial_seed),
        ))
    }

    /// Opens a trial on an already realized edge set.
    pub fn from_bits(instance: &'a BipartiteInstance, bits: &'a EdgeBits) -> Result<Self> {
        instance.check_dims(bits, "edge bits")?;
        Ok(Self::with_bits(instance, Cow::Borrowed(bits)))
    }

    fn with_bits(instance: &'a BipartiteInstance, bits: Cow<'a, EdgeBits>) -> Self {
        let (nl, nr) = (instance.n_left(), instance.n_right());
        Self {
            instance,
            bits,
            probed: Grid::filled(nl, nr, false),
            left_matched: vec![false; nl],
            right_matched: vec![false; nr],
            committed: Vec::new(),
            log: Vec::new(),
        }
    }

    pub fn instance(&self) -> &'a BipartiteInstance {
        self.instance
    }

    /// Probes `(u, v)`. Both endpoints must be unmatched and the pair unprobed.
    pub fn probe(&mut self, u: usize, v: usize) -> Result<ProbeOutcome> {
        if u >= self.left_matched.len() || v >= self.right_matched.len() {
            return Err(Error::IndexOutOfRange { u, v });
        }
        if self.left_matched[u] || self.right_matched[v] {
            return Err(Error::ProbeOfMatchedVertex { u, v });
        }
        if *self.probed.get(u, v) {
            return Err(Error::DuplicateProbe { u, v });
        }
        self.probed.set(u, v, true);
        let outcome = if self.bits.present(u, v) {
            self.left_matched[u] = true;
            self.right_matched[v] = true;
            self.committed.push((u, v));
            ProbeOutcome::Matched
        } else {
            ProbeOutcome::EdgeAbsent
        };
        self.log.push(ProbeRecord { u, v, outcome });
        Ok(outcome)
    }

    #[inline]
    pub fn is_left_matched(&self, u: usize) -> bool {
        self.left_matched[u]
    }

    #[inline]
    pub fn is_right_matched(&self, v: usize) -> bool {
        self.right_matched[v]
    }

    /// Whether `(u, v)` can legally be probed right now.
    pub fn is_eligible(&self, u: usize, v: usize) -> bool {
        !self.left_matched[u] && !self.right_matched[v] && !*self.probed.get(u, v)
    }

    pub fn log(&self) -> &[ProbeRecord] {
        &self.log
    }

    pub fn probes_used(&self) -> usize {
        self.log.len()
    }

    /// The realized edge bits of this trial.
    pub fn bits(&self) -> &EdgeBits {
        &self.bits
    }

    /// The committed matching, in commit order.
    pub fn final_matching(&self) -> Matching {
        Matching::from_pairs(self.instance, self.committed.clone())
            .expect("committed pairs are vertex-disjoint")
    }
}

#[derive(Serialize)]
struct ProbeRow {
    trial: u64,
    step: usize,
    u: usize,
    v: usize,
    outcome: ProbeOutcome,
}

/// Writes a probe log as CSV rows `trial,step,u,v,outcome`. The header is
/// emitted only when `header` is true.
pub fn write_probe_log_csv<W: Write>(
    out: W,
    trial: u64,
    log: &[ProbeRecord],
    header: bool,
) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(header)
        .from_writer(out);
    for (step, r) in log.iter().enumerate() {
        w.serialize(ProbeRow {
            trial,
            step,
            u: r.u,
            v: r.v,
            outcome: r.outcome,
        })?;
    }
    w.flush().map_err(|source| Error::Io {
        path: "<probe log>".into(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_by_two() -> (BipartiteInstance, Realization) {
        let inst = BipartiteInstance::from_rows(vec![vec![5.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let bits = Grid::from_rows(vec![vec![true, false], vec![true, true]]).unwrap();
        (inst, Realization::Adversarial(bits))
    }

    #[test]
    fn adversarial_bits_are_copied() {
        let (inst, real) = two_by_two();
        let env = ProbeEnv::new(&inst, &real, 0).unwrap();
        let Realization::Adversarial(bits) = &real else {
            panic!()
        };
        assert_eq!(env.bits(), bits);
    }

    #[test]
    fn bernoulli_bits_reproducible() {
        let inst = BipartiteInstance::from_weights(Grid::filled(6, 6, 1.0)).unwrap();
        let real = Realization::bernoulli(Grid::filled(6, 6, 0.5)).unwrap();
        let a = ProbeEnv::new(&inst, &real, 11).unwrap().bits().clone();
        let b = ProbeEnv::new(&inst, &real, 11).unwrap().bits().clone();
        assert_eq!(a, b);
        let all = Realization::bernoulli(Grid::filled(6, 6, 1.0)).unwrap();
        assert_eq!(
            ProbeEnv::new(&inst, &all, 3)
                .unwrap()
                .bits()
                .count_present(),
            36
        );
    }

    #[test]
    fn query_commit_semantics() {
        let (inst, real) = two_by_two();
        let mut env = ProbeEnv::new(&inst, &real, 0).unwrap();
        assert_eq!(env.final_matching().total_weight(), 0.0);

        assert_eq!(env.probe(0, 1).unwrap(), ProbeOutcome::EdgeAbsent);
        assert!(!env.is_left_matched(0) && !env.is_right_matched(1));

        assert_eq!(env.probe(0, 0).unwrap(), ProbeOutcome::Matched);
        assert!(env.is_left_matched(0) && env.is_right_matched(0));
        assert_eq!(env.final_matching().total_weight(), 5.0);

        assert!(matches!(
            env.probe(1, 0),
            Err(Error::ProbeOfMatchedVertex { u: 1, v: 0 })
        ));
        assert!(matches!(
            env.probe(0, 1),
            Err(Error::ProbeOfMatchedVertex { .. })
        ));
        assert_eq!(env.probe(1, 1).unwrap(), ProbeOutcome::Matched);
        assert_eq!(env.final_matching().total_weight(), 7.0);
        assert_eq!(env.log().len(), 3);
    }

    #[test]
    fn duplicate_probe_rejected() {
        let (inst, real) = two_by_two();
        let mut env = ProbeEnv::new(&inst, &real, 0).unwrap();
        env.probe(0, 1).unwrap();
        assert!(matches!(
            env.probe(0, 1),
            Err(Error::DuplicateProbe { u: 0, v: 1 })
        ));
    }

    #[test]
    fn probe_log_csv() {
        let (inst, real) = two_by_two();
        let mut env = ProbeEnv::new(&inst, &real, 0).unwrap();
        env.probe(0, 1).unwrap();
        env.probe(0, 0).unwrap();
        let mut buf = Vec::new();
        write_probe_log_csv(&mut buf, 4, env.log(), true).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "trial,step,u,v,outcome\n4,0,0,1,EdgeAbsent\n4,1,0,0,Matched\n"
        );
    }
}
