//! Offline maximum-weight matching on a realized edge set.
//!
//! [`max_weight_matching`] is the Hungarian method on the realized subgraph,
//! padded to a square with zero-weight dummies. [`brute_force_mwm`] enumerates
//! every matching and serves as its independent check on small inputs.

use crate::error::{Error, Result};
use crate::instance::{BipartiteInstance, EdgeBits, Matching};

/// Largest smaller side accepted by [`brute_force_mwm`].
pub const BRUTE_FORCE_MAX_SIDE: usize = 10;

/// Optimal matching `M*` and its value `W*`.
#[derive(Clone, Debug, PartialEq)]
pub struct OptimalResult {
    pub matching: Matching,
    pub value: f64,
}

/// Dense Hungarian method (potentials + shortest augmenting path), minimizing
/// cost over a square matrix. Returns `assignment[row] = column`.
fn hungarian_min(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assignment = vec![0usize; n];
    for j in 1..=n {
        if p[j] > 0 {
            assignment[p[j] - 1] = j - 1;
        }
    }
    assignment
}

/// Maximum-weight matching using only edges present in `bits`.
pub fn max_weight_matching(instance: &BipartiteInstance, bits: &EdgeBits) -> Result<OptimalResult> {
    instance.check_dims(bits, "edge bits")?;
    let (nl, nr) = (instance.n_left(), instance.n_right());
    let n = nl.max(nr);
    let cost: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i < nl && j < nr && bits.present(i, j) {
                        -instance.weight(i, j)
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();
    let assignment = hungarian_min(&cost);
    let pairs: Vec<_> = assignment
        .into_iter()
        .enumerate()
        .filter(|&(i, j)| i < nl && j < nr && bits.present(i, j) && instance.weight(i, j) > 0.0)
        .collect();
    let matching = Matching::from_pairs(instance, pairs)?;
    Ok(OptimalResult {
        value: matching.total_weight(),
        matching,
    })
}

/// Exhaustive maximum-weight matching. Requires `min(n_left, n_right) <= 10`.
pub fn brute_force_mwm(instance: &BipartiteInstance, bits: &EdgeBits) -> Result<OptimalResult> {
    instance.check_dims(bits, "edge bits")?;
    let (nl, nr) = (instance.n_left(), instance.n_right());
    let small = nl.min(nr);
    if small > BRUTE_FORCE_MAX_SIDE {
        return Err(Error::TooLarge(small, BRUTE_FORCE_MAX_SIDE));
    }
    // Walk the smaller side; `pair(a, b)` maps (small index, large index) to (left, right).
    let transpose = nr < nl;
    let large = if transpose { nl } else { nr };
    let pair = |a: usize, b: usize| if transpose { (b, a) } else { (a, b) };

    struct Search<'a, F: Fn(usize, usize) -> (usize, usize)> {
        instance: &'a BipartiteInstance,
        bits: &'a EdgeBits,
        pair: F,
        small: usize,
        large: usize,
        used: Vec<bool>,
        current: Vec<(usize, usize)>,
        current_weight: f64,
        best: Vec<(usize, usize)>,
        best_weight: f64,
    }

    impl<F: Fn(usize, usize) -> (usize, usize)> Search<'_, F> {
        fn go(&mut self, a: usize) {
            if a == self.small {
                if self.current_weight > self.best_weight {
                    self.best_weight = self.current_weight;
                    self.best = self.current.clone();
                }
                return;
            }
            self.go(a + 1);
            for b in 0..self.large {
                let (u, v) = (self.pair)(a, b);
                if self.used[b] || !self.bits.present(u, v) {
                    continue;
                }
                let w = self.instance.weight(u, v);
                self.used[b] = true;
                self.current.push((u, v));
                self.current_weight += w;
                self.go(a + 1);
                self.current_weight -= w;
                self.current.pop();
                self.used[b] = false;
            }
        }
    }

    let mut search = Search {
        instance,
        bits,
        pair,
        small,
        large,
        used: vec![false; large],
        current: Vec::new(),
        current_weight: 0.0,
        best: Vec::new(),
        best_weight: 0.0,
    };
    search.go(0);
    let matching = Matching::from_pairs(instance, search.best)?;
    Ok(OptimalResult {
        value: matching.total_weight(),
        matching,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Grid;

    fn bits(rows: Vec<Vec<bool>>) -> EdgeBits {
        Grid::from_rows(rows).unwrap()
    }

    #[test]
    fn single_edge() {
        let inst = BipartiteInstance::from_rows(vec![vec![5.0]]).unwrap();
        let b = bits(vec![vec![true]]);
        assert_eq!(max_weight_matching(&inst, &b).unwrap().value, 5.0);
        assert_eq!(brute_force_mwm(&inst, &b).unwrap().value, 5.0);
    }

    #[test]
    fn two_by_two_examples() {
        let inst = BipartiteInstance::from_rows(vec![vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let all = Grid::filled(2, 2, true);
        let r = max_weight_matching(&inst, &all).unwrap();
        assert_eq!(r.value, 4.0);
        assert!(r.matching.contains(0, 0) && r.matching.contains(1, 1));

        // (0,1) and (1,1) share v=1; the heavier one (w=2) wins
        let some = bits(vec![vec![false, true], vec![false, true]]);
        assert_eq!(max_weight_matching(&inst, &some).unwrap().value, 2.0);
        assert_eq!(brute_force_mwm(&inst, &some).unwrap().value, 2.0);
    }

    #[test]
    fn empty_edge_set() {
        let inst = BipartiteInstance::from_rows(vec![vec![3.0, 1.0, 4.0]]).unwrap();
        let none = Grid::filled(1, 3, false);
        let r = brute_force_mwm(&inst, &none).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.matching.is_empty());
        assert_eq!(max_weight_matching(&inst, &none).unwrap().value, 0.0);
    }

    #[test]
    fn rectangular_never_returns_dummies() {
        let inst = BipartiteInstance::from_rows(vec![vec![1.0], vec![3.0], vec![2.0]]).unwrap();
        let all = Grid::filled(3, 1, true);
        let r = max_weight_matching(&inst, &all).unwrap();
        assert_eq!(r.matching.pairs(), &[(1, 0)]);
        assert_eq!(brute_force_mwm(&inst, &all).unwrap().value, 3.0);
    }

    #[test]
    fn dimension_mismatch() {
        let inst = BipartiteInstance::from_rows(vec![vec![1.0, 1.0]]).unwrap();
        assert!(matches!(
            max_weight_matching(&inst, &Grid::filled(2, 2, true)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn brute_force_size_limit() {
        let inst = BipartiteInstance::from_weights(Grid::filled(11, 11, 1.0)).unwrap();
        assert!(matches!(
            brute_force_mwm(&inst, &Grid::filled(11, 11, true)),
            Err(Error::TooLarge(11, 10))
        ));
    }
}
