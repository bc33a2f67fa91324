//! Finite Markov chains with per-edge rewards: terminal component
//! extraction, stationary distributions, and expected per-step rewards.
//!
//! Chains arising here have at most a few hundred states (four predictor
//! states per pattern prefix), so the stationary distribution is obtained
//! by a dense direct solve of `v (P - I) = 0` with one equation replaced
//! by the normalization `sum v = 1`.

use crate::error::{Error, Result};
use crate::tolerance;

/// A weighted transition: probability of moving to `target`, plus a
/// nonnegative reward collected when the edge is used (misprediction or
/// comparison counts in this crate).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub target: usize,
    pub probability: f64,
    pub reward: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarkovChain {
    rows: Vec<Vec<Edge>>,
}

impl MarkovChain {
    /// Validates that every state's outgoing probabilities sum to 1 (within
    /// the identity tolerance), probabilities lie in [0, 1], rewards are
    /// nonnegative and targets are in range.
    pub fn new(rows: Vec<Vec<Edge>>) -> Result<Self> {
        let n = rows.len();
        for (state, row) in rows.iter().enumerate() {
            let mut sum = 0.0;
            for e in row {
                if e.target >= n {
                    return Err(Error::BadEdge {
                        state,
                        reason: format!("target {} out of range", e.target),
                    });
                }
                if !(0.0..=1.0).contains(&e.probability) {
                    return Err(Error::BadEdge {
                        state,
                        reason: format!("probability {}", e.probability),
                    });
                }
                if e.reward < 0.0 {
                    return Err(Error::BadEdge {
                        state,
                        reason: format!("negative reward {}", e.reward),
                    });
                }
                sum += e.probability;
            }
            if (sum - 1.0).abs() > tolerance::IDENTITY {
                return Err(Error::RowSumNotOne { state, sum });
            }
        }
        Ok(Self { rows })
    }

    pub fn num_states(&self) -> usize {
        self.rows.len()
    }

    pub fn edges(&self, state: usize) -> &[Edge] {
        &self.rows[state]
    }

    /// Strongly connected components in Tarjan order (reverse topological).
    fn sccs(&self) -> Vec<Vec<usize>> {
        let n = self.num_states();
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut comps = Vec::new();
        let mut next_index = 0usize;
        // iterative Tarjan: (state, next edge position)
        let mut call_stack: Vec<(usize, usize)> = Vec::new();
        for root in 0..n {
            if index[root] != usize::MAX {
                continue;
            }
            call_stack.push((root, 0));
            while let Some(&(v, ei)) = call_stack.last() {
                if ei == 0 {
                    index[v] = next_index;
                    low[v] = next_index;
                    next_index += 1;
                    stack.push(v);
                    on_stack[v] = true;
                }
                if let Some(e) = self.rows[v].get(ei) {
                    call_stack.last_mut().expect("frame exists").1 += 1;
                    let w = e.target;
                    if e.probability == 0.0 {
                        continue;
                    }
                    if index[w] == usize::MAX {
                        call_stack.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call_stack.pop();
                    if let Some(&(parent, _)) = call_stack.last() {
                        low[parent] = low[parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().expect("tarjan stack underflow");
                            on_stack[w] = false;
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        comps.push(comp);
                    }
                }
            }
        }
        comps
    }

    /// Restricts the chain to its unique terminal strongly connected
    /// component (the one without outgoing edges). Returns the restricted
    /// chain and, for each new state, its index in the original chain.
    /// More than one terminal component is an error: the chains built by
    /// this crate always have exactly one, so multiplicity signals a
    /// construction bug.
    pub fn terminal_component(&self) -> Result<(MarkovChain, Vec<usize>)> {
        let comps = self.sccs();
        let mut comp_of = vec![0usize; self.num_states()];
        for (i, comp) in comps.iter().enumerate() {
            for &v in comp {
                comp_of[v] = i;
            }
        }
        let mut terminal = Vec::new();
        for (i, comp) in comps.iter().enumerate() {
            let leaves = comp.iter().any(|&v| {
                self.rows[v]
                    .iter()
                    .any(|e| e.probability > 0.0 && comp_of[e.target] != i)
            });
            if !leaves {
                terminal.push(i);
            }
        }
        if terminal.len() != 1 {
            return Err(Error::MultipleTerminalComponents(terminal.len()));
        }
        let mut kept: Vec<usize> = comps[terminal[0]].clone();
        kept.sort_unstable();
        let mut new_index = vec![usize::MAX; self.num_states()];
        for (i, &v) in kept.iter().enumerate() {
            new_index[v] = i;
        }
        let rows = kept
            .iter()
            .map(|&v| {
                self.rows[v]
                    .iter()
                    .map(|e| Edge {
                        target: new_index[e.target],
                        probability: e.probability,
                        reward: e.reward,
                    })
                    .collect()
            })
            .collect();
        Ok((MarkovChain { rows }, kept))
    }

    /// The unique probability vector `v` with `v P = v`. Requires the chain
    /// to be one strongly connected component with at least one self-loop
    /// (the aperiodicity witness present in every chain this crate builds).
    pub fn stationary_distribution(&self) -> Result<Vec<f64>> {
        let n = self.num_states();
        if self.sccs().len() != 1 {
            return Err(Error::NotStronglyConnected);
        }
        if !(0..n).any(|v| {
            self.rows[v]
                .iter()
                .any(|e| e.target == v && e.probability > 0.0)
        }) {
            return Err(Error::NoAperiodicityWitness);
        }

        // rows of (P^T - I), last row replaced by the normalization
        let mut a = vec![vec![0.0f64; n]; n];
        for (v, row) in self.rows.iter().enumerate() {
            for e in row {
                a[e.target][v] += e.probability;
            }
        }
        for (i, row) in a.iter_mut().enumerate() {
            row[i] -= 1.0;
        }
        for x in a[n - 1].iter_mut() {
            *x = 1.0;
        }
        let mut b = vec![0.0; n];
        b[n - 1] = 1.0;

        let mut v = solve_dense(a, b)?;

        // clean up parasitic negatives at rounding scale, then renormalize
        for x in v.iter_mut() {
            if *x < 0.0 {
                if *x < -1e-9 {
                    return Err(Error::StationarySolve(format!(
                        "negative stationary mass {x}"
                    )));
                }
                *x = 0.0;
            }
        }
        let total: f64 = v.iter().sum();
        for x in v.iter_mut() {
            *x /= total;
        }

        let residual = self.stationarity_residual(&v);
        if residual > tolerance::IDENTITY {
            return Err(Error::StationarySolve(format!(
                "residual {residual} above tolerance"
            )));
        }
        Ok(v)
    }

    /// Max-norm of `v P - v`.
    pub fn stationarity_residual(&self, v: &[f64]) -> f64 {
        let mut next = vec![0.0f64; self.num_states()];
        for (s, row) in self.rows.iter().enumerate() {
            for e in row {
                next[e.target] += v[s] * e.probability;
            }
        }
        next.iter()
            .zip(v)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Expected reward of one step from stationarity:
    /// `sum_s v[s] * sum_e p(e) r(e)`.
    pub fn expected_step_reward(&self, stationary: &[f64]) -> f64 {
        self.rows
            .iter()
            .zip(stationary)
            .map(|(row, &pi)| pi * row.iter().map(|e| e.probability * e.reward).sum::<f64>())
            .sum()
    }
}

/// Gaussian elimination with partial pivoting; consumes the inputs.
#[allow(clippy::needless_range_loop)] // index pairs across rows read clearer here
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .expect("nonempty range");
        if a[pivot][col].abs() < 1e-14 {
            return Err(Error::StationarySolve("singular system".to_string()));
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge(target: usize, probability: f64) -> Edge {
        Edge {
            target,
            probability,
            reward: 0.0,
        }
    }

    fn redge(target: usize, probability: f64, reward: f64) -> Edge {
        Edge {
            target,
            probability,
            reward,
        }
    }

    /// Power-iteration oracle, independent of the linear solve.
    fn power_iterate(chain: &MarkovChain, steps: usize) -> Vec<f64> {
        let n = chain.num_states();
        let mut v = vec![1.0 / n as f64; n];
        for _ in 0..steps {
            let mut next = vec![0.0; n];
            for (s, &mass) in v.iter().enumerate() {
                for e in chain.edges(s) {
                    next[e.target] += mass * e.probability;
                }
            }
            v = next;
        }
        v
    }

    #[test]
    fn validation_catches_bad_rows() {
        assert!(matches!(
            MarkovChain::new(vec![vec![edge(0, 0.5)]]),
            Err(Error::RowSumNotOne { state: 0, .. })
        ));
        assert!(matches!(
            MarkovChain::new(vec![vec![edge(3, 1.0)]]),
            Err(Error::BadEdge { .. })
        ));
        assert!(matches!(
            MarkovChain::new(vec![vec![redge(0, 1.0, -2.0)]]),
            Err(Error::BadEdge { .. })
        ));
    }

    #[test]
    fn absorbing_state_is_the_terminal_component() {
        // states 0,1 both lead to 2; 2 loops
        let chain = MarkovChain::new(vec![
            vec![edge(1, 0.5), edge(2, 0.5)],
            vec![edge(2, 1.0)],
            vec![edge(2, 1.0)],
        ])
        .unwrap();
        let (term, kept) = chain.terminal_component().unwrap();
        assert_eq!(kept, vec![2]);
        assert_eq!(term.num_states(), 1);
        let v = term.stationary_distribution().unwrap();
        assert_eq!(v, vec![1.0]);
    }

    #[test]
    fn two_disjoint_cycles_are_rejected() {
        let chain = MarkovChain::new(vec![vec![edge(0, 1.0)], vec![edge(1, 1.0)]]).unwrap();
        assert_eq!(
            chain.terminal_component().unwrap_err(),
            Error::MultipleTerminalComponents(2)
        );
    }

    #[test]
    fn terminal_component_is_idempotent() {
        let chain = MarkovChain::new(vec![
            vec![edge(1, 1.0)],
            vec![edge(1, 0.25), edge(2, 0.75)],
            vec![edge(1, 0.5), edge(2, 0.5)],
        ])
        .unwrap();
        let (t1, kept1) = chain.terminal_component().unwrap();
        let (t2, kept2) = t1.terminal_component().unwrap();
        assert_eq!(t1, t2);
        assert_eq!(kept1, vec![1, 2]);
        assert_eq!(kept2, vec![0, 1]);
    }

    #[test]
    fn two_state_saturation_chain_has_known_stationary() {
        // the merged-state chain for a doubled letter: stay probabilities
        // 1 - p^4 and p^3
        for p in [0.2f64, 0.5, 0.8] {
            let p4 = p.powi(4);
            let p3 = p.powi(3);
            let chain = MarkovChain::new(vec![
                vec![edge(0, 1.0 - p4), edge(1, p4)],
                vec![edge(0, 1.0 - p3), edge(1, p3)],
            ])
            .unwrap();
            let v = chain.stationary_distribution().unwrap();
            let denom = 1.0 - p3 + p4;
            assert!((v[0] - (1.0 - p3) / denom).abs() < 1e-14, "p={p}");
            assert!((v[1] - p4 / denom).abs() < 1e-14, "p={p}");
        }
    }

    #[test]
    fn symmetric_two_cycle_with_self_loops() {
        let chain = MarkovChain::new(vec![
            vec![edge(0, 0.5), edge(1, 0.5)],
            vec![edge(0, 0.5), edge(1, 0.5)],
        ])
        .unwrap();
        let v = chain.stationary_distribution().unwrap();
        assert!((v[0] - 0.5).abs() < 1e-15);
        assert!((v[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn stationary_requires_connectivity_and_a_self_loop() {
        // strongly connected 2-cycle without self-loops: periodic
        let cycle = MarkovChain::new(vec![vec![edge(1, 1.0)], vec![edge(0, 1.0)]]).unwrap();
        assert_eq!(
            cycle.stationary_distribution().unwrap_err(),
            Error::NoAperiodicityWitness
        );
        // not strongly connected
        let line = MarkovChain::new(vec![vec![edge(1, 1.0)], vec![edge(1, 1.0)]]).unwrap();
        assert_eq!(
            line.stationary_distribution().unwrap_err(),
            Error::NotStronglyConnected
        );
    }

    #[test]
    fn stationary_matches_power_iteration_on_random_chains() {
        let mut rng = crate::text::SplitMix64::new(7);
        for _ in 0..50 {
            let n = 2 + rng.next_below(8);
            let mut rows = Vec::with_capacity(n);
            for s in 0..n {
                // dense strictly positive rows: irreducible and aperiodic
                let mut weights: Vec<f64> = (0..n).map(|_| 0.05 + rng.next_f64()).collect();
                let total: f64 = weights.iter().sum();
                for w in weights.iter_mut() {
                    *w /= total;
                }
                let row: Vec<Edge> = weights
                    .iter()
                    .enumerate()
                    .map(|(t, &w)| edge(t, w))
                    .collect();
                let _ = s;
                rows.push(row);
            }
            let chain = MarkovChain::new(rows).unwrap();
            let v = chain.stationary_distribution().unwrap();
            let w = power_iterate(&chain, 1024);
            for (a, b) in v.iter().zip(&w) {
                assert!((a - b).abs() < 1e-10, "{a} vs {b}");
            }
            assert!(chain.stationarity_residual(&v) <= tolerance::IDENTITY);
            assert!((v.iter().sum::<f64>() - 1.0).abs() <= tolerance::IDENTITY);
        }
    }

    #[test]
    fn expected_reward_is_a_weighted_mean() {
        // two states, uniform stationary, self-loop rewards 1 and 3
        let chain = MarkovChain::new(vec![
            vec![redge(0, 0.5, 1.0), redge(1, 0.5, 1.0)],
            vec![redge(0, 0.5, 3.0), redge(1, 0.5, 3.0)],
        ])
        .unwrap();
        let v = chain.stationary_distribution().unwrap();
        assert!((chain.expected_step_reward(&v) - 2.0).abs() < 1e-14);

        let zero = MarkovChain::new(vec![vec![edge(0, 1.0)]]).unwrap();
        assert_eq!(zero.expected_step_reward(&[1.0]), 0.0);
    }
}
