//! JSON instance files.
//!
//! ```json
//! {
//!   "n_left": 2,
//!   "n_right": 2,
//!   "weights": [[2.0, 1.0], [1.0, 2.0]],
//!   "realization": { "type": "adversarial", "edges": [[1, 1], [0, 1]] }
//! }
//! ```
//!
//! The realization is either `{"type": "adversarial", "edges": <0/1 rows>}`,
//! `{"type": "bernoulli", "probs": <rows>}` or `{"type": "comonotone", "probs": <rows>}`.
//! Reals are written in shortest round-trip form.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{BipartiteInstance, Comonotone, Grid, Realization};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    n_left: usize,
    n_right: usize,
    weights: Vec<Vec<f64>>,
    realization: RealizationFile,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum RealizationFile {
    Adversarial { edges: Vec<Vec<u8>> },
    Bernoulli { probs: Vec<Vec<f64>> },
    Comonotone { probs: Vec<Vec<f64>> },
}

fn check_shape<T>(rows: &[Vec<T>], n_left: usize, n_right: usize, what: &str) -> Result<()> {
    if rows.len() != n_left {
        return Err(Error::DimensionMismatch(format!(
            "{what}: {} rows, expected {n_left}",
            rows.len()
        )));
    }
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n_right) {
        return Err(Error::DimensionMismatch(format!(
            "{what}: row {i} has {} entries, expected {n_right}",
            r.len()
        )));
    }
    Ok(())
}

/// Parses an instance file body.
pub fn from_json_str(s: &str) -> Result<(BipartiteInstance, Realization)> {
    let file: InstanceFile = serde_json::from_str(s)?;
    let (nl, nr) = (file.n_left, file.n_right);
    check_shape(&file.weights, nl, nr, "weights")?;
    let instance = BipartiteInstance::from_weights(Grid::from_rows(file.weights)?)?;
    let realization = match file.realization {
        RealizationFile::Adversarial { edges } => {
            check_shape(&edges, nl, nr, "edges")?;
            let mut bits = Grid::filled(nl, nr, false);
            for (u, row) in edges.iter().enumerate() {
                for (v, &b) in row.iter().enumerate() {
                    match b {
                        0 => {}
                        1 => bits.set(u, v, true),
                        _ => {
                            return Err(Error::InvalidArgument(format!(
                                "edge bit at ({u},{v}) must be 0 or 1, got {b}"
                            )))
                        }
                    }
                }
            }
            Realization::Adversarial(bits)
        }
        RealizationFile::Bernoulli { probs } => {
            check_shape(&probs, nl, nr, "probs")?;
            Realization::bernoulli(Grid::from_rows(probs)?)?
        }
        RealizationFile::Comonotone { probs } => {
            check_shape(&probs, nl, nr, "probs")?;
            Realization::joint(Comonotone::new(Grid::from_rows(probs)?)?)
        }
    };
    Ok((instance, realization))
}

/// Serializes an instance and its realization. Only adversarial, Bernoulli and
/// comonotone realizations have a file form.
pub fn to_json_string(instance: &BipartiteInstance, realization: &Realization) -> Result<String> {
    instance.check_dims_pair(realization.dims())?;
    let realization = match realization {
        Realization::Adversarial(bits) => RealizationFile::Adversarial {
            edges: bits
                .to_rows()
                .into_iter()
                .map(|r| r.into_iter().map(u8::from).collect())
                .collect(),
        },
        Realization::IndependentBernoulli(p) => RealizationFile::Bernoulli { probs: p.to_rows() },
        Realization::JointSampler(s) => match s.law().comonotone_probabilities() {
            Some(p) => RealizationFile::Comonotone { probs: p.to_rows() },
            None => return Err(Error::Unserializable),
        },
    };
    let file = InstanceFile {
        n_left: instance.n_left(),
        n_right: instance.n_right(),
        weights: instance.weights().to_rows(),
        realization,
    };
    let mut out = serde_json::to_string_pretty(&file)?;
    out.push('\n');
    Ok(out)
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<(BipartiteInstance, Realization)> {
    let path = path.as_ref();
    let body = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    from_json_str(&body)
}

pub fn write_instance(
    path: impl AsRef<Path>,
    instance: &BipartiteInstance,
    realization: &Realization,
) -> Result<()> {
    let path = path.as_ref();
    let body = to_json_string(instance, realization)?;
    fs::write(path, body).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{generate_random, WeightDist};

    const GOOD: &str = r#"{"n_left":1,"n_right":2,"weights":[[1.5,2]],
        "realization":{"type":"bernoulli","probs":[[0.5,1]]}}"#;

    #[test]
    fn parses_bernoulli() {
        let (inst, r) = from_json_str(GOOD).unwrap();
        assert_eq!(inst.weight(0, 1), 2.0);
        let Realization::IndependentBernoulli(p) = r else {
            panic!()
        };
        assert_eq!(*p.get(0, 0), 0.5);
    }

    #[test]
    fn rejects_out_of_range_probability() {
        let s = GOOD.replace("0.5,1]", "1.5,1]");
        assert!(
            matches!(from_json_str(&s), Err(Error::ProbabilityOutOfRange { p, .. }) if p == 1.5)
        );
    }

    #[test]
    fn rejects_missing_weights_row() {
        let s = r#"{"n_left":2,"n_right":2,"weights":[[1,2]],
            "realization":{"type":"adversarial","edges":[[1,1],[1,1]]}}"#;
        assert!(matches!(from_json_str(s), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn rejects_malformed_and_bad_bits() {
        assert!(matches!(from_json_str("{not json"), Err(Error::Parse(_))));
        let s = r#"{"n_left":1,"n_right":1,"weights":[[1]],
            "realization":{"type":"adversarial","edges":[[2]]}}"#;
        assert!(from_json_str(s).is_err());
        let s = r#"{"n_left":1,"n_right":1,"weights":[[-1]],
            "realization":{"type":"adversarial","edges":[[1]]}}"#;
        assert!(matches!(from_json_str(s), Err(Error::InvalidInstance(_))));
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.json");
        let (inst, real) = generate_random(
            5,
            5,
            &WeightDist::Uniform {
                low: 0.0,
                high: 1.0,
            },
            0.5,
            9,
        )
        .unwrap();
        write_instance(&path, &inst, &real).unwrap();
        let (inst2, real2) = read_instance(&path).unwrap();
        assert_eq!(inst, inst2);
        let (Realization::Adversarial(a), Realization::Adversarial(b)) = (real, real2) else {
            panic!()
        };
        assert_eq!(a, b);
    }
}
