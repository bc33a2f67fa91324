//! Asymptotic per-symbol rates: expected letter comparisons, counter-,
//! guard- and comparison-branch misprediction rates, and the aggregate
//! report.
//!
//! Once the matcher has read at least one pattern length of text, the
//! probability of sitting in a given prefix state no longer depends on the
//! position, and it has the closed form
//! `p(u) = P(u) - sum of P(v) over prefixes v whose longest border is u`
//! (probabilities of the prefix words themselves). Everything per-symbol
//! follows from that distribution:
//!
//! * comparisons per symbol: expected output length of the comparison
//!   transducer, between 1 and 2;
//! * guard mispredictions: once the guard predictor saturates taken, it
//!   mispredicts exactly when the failure chain falls off the bottom,
//!   i.e. on non-accepting transitions into the empty-prefix state;
//! * counter mispredictions: one per pattern occurrence when the pattern
//!   has two distinct letters; for single-letter powers the counter
//!   predictor oscillates and the rate has its own closed forms;
//! * comparison mispredictions: stationary per-step reward of the product
//!   of the transducer with the 2-bit predictor, restricted to its unique
//!   terminal strongly connected component.

use crate::automata::{ComparisonTransducer, PrefixAutomaton};
use crate::borders::{FailureTable, Variant};
use crate::error::Result;
use crate::markov::{Edge, MarkovChain};
use crate::predictor::{PredictorState, TWO_BIT_STATES};
use crate::text::{Pattern, SymbolDistribution};
use serde::Serialize;

/// Constant bound on main-loop branch mispredictions for any text length:
/// its outcome word is all-taken then one not-taken, so a 2-bit counter
/// can miss at most thrice.
pub const MAINLOOP_MISPREDICTION_BOUND: u8 = 3;

/// Per-branch asymptotic misprediction rates, per text symbol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchRates {
    pub counter: f64,
    pub guard: f64,
    pub comparison: f64,
    pub total: f64,
}

/// The full analytic result for one (pattern, distribution, variant).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MispredictionReport {
    pub pattern: String,
    pub alphabet: String,
    pub probs: Vec<f64>,
    pub variant: Variant,
    pub rates: BranchRates,
    pub expected_comparisons: f64,
    pub mainloop_bound: u8,
}

/// Stationary probability of each prefix state of the pattern automaton,
/// by the closed form above. Exact (up to rounding) for every position at
/// least one pattern length into the text.
pub fn stationary_prefix_distribution(
    pattern: &Pattern,
    dist: &SymbolDistribution,
) -> Result<Vec<f64>> {
    pattern.check_alphabet(dist.alphabet())?;
    let m = pattern.len();
    let x = pattern.symbols();

    // prefix_prob[i] = probability of the length-i prefix as a word
    let mut prefix_prob = vec![1.0f64; m + 1];
    for i in 0..m {
        prefix_prob[i + 1] = prefix_prob[i] * dist.prob_of(x[i])?;
    }

    let mp = FailureTable::mp(pattern);
    let mut p = prefix_prob[..m].to_vec();
    for v in 1..m {
        p[mp.get(v) as usize] -= prefix_prob[v];
    }
    Ok(p)
}

/// Expected letter comparisons per text symbol (between 1 and 2).
pub fn expected_comparisons_rate(
    pattern: &Pattern,
    dist: &SymbolDistribution,
    variant: Variant,
) -> Result<f64> {
    let transducer = ComparisonTransducer::build(pattern, dist.alphabet(), variant)?;
    expected_comparisons_of(&transducer, dist, pattern)
}

fn expected_comparisons_of(
    transducer: &ComparisonTransducer,
    dist: &SymbolDistribution,
    pattern: &Pattern,
) -> Result<f64> {
    let p = stationary_prefix_distribution(pattern, dist)?;
    let mut c = 0.0;
    for (u, &pu) in p.iter().enumerate() {
        for s in 0..dist.alphabet().len() {
            c += pu * dist.prob(s) * f64::from(transducer.output(u, s).len());
        }
    }
    Ok(c)
}

/// Counter-branch misprediction rate per symbol for a single-letter power
/// of length `m` whose letter has probability `p`.
pub fn kappa(m: usize, p: f64) -> f64 {
    match m {
        0 => 0.0,
        1 => p * (1.0 - p) / (1.0 - 2.0 * p * (1.0 - p)),
        2 => {
            p * p * (1.0 - p) * (1.0 + 2.0 * p + p * p - p * p * p) / (1.0 - p.powi(3) + p.powi(4))
        }
        _ => p.powi(m as i32) * (1.0 - p) * (1.0 + p) * (1.0 + p),
    }
}

/// Asymptotic misprediction rate of the occurrence-counter branch. With
/// two distinct pattern letters occurrences are never adjacent, so the
/// predictor pays exactly one miss per occurrence and the rate is the
/// pattern's word probability. Single-letter powers dispatch to `kappa`.
pub fn counter_rate(pattern: &Pattern, dist: &SymbolDistribution) -> Result<f64> {
    pattern.check_alphabet(dist.alphabet())?;
    if pattern.is_single_letter() {
        Ok(kappa(pattern.len(), dist.prob_of(pattern.symbols()[0])?))
    } else {
        dist.word_probability(pattern.as_str())
    }
}

/// Asymptotic misprediction rate of the `i >= 0` guard: the stationary
/// probability mass of non-accepting transitions into the empty-prefix
/// state. Identical for MP and KMP.
pub fn guard_rate(pattern: &Pattern, dist: &SymbolDistribution) -> Result<f64> {
    let automaton = PrefixAutomaton::build(pattern, dist.alphabet())?;
    let p = stationary_prefix_distribution(pattern, dist)?;
    let mut g = 0.0;
    for (u, &pu) in p.iter().enumerate() {
        for s in 0..dist.alphabet().len() {
            if automaton.step(u, s) == 0 && !automaton.is_accepting(u, s) {
                g += pu * dist.prob(s);
            }
        }
    }
    Ok(g)
}

/// The product of the comparison transducer with the 2-bit predictor,
/// as a Markov chain. State `(u, s)` pairs a prefix state with a predictor
/// state; reading a symbol moves both components in lockstep and the edge
/// reward is the number of mispredictions the predictor pays while
/// consuming that transition's comparison output.
#[derive(Debug, Clone)]
pub struct ProductChain {
    chain: MarkovChain,
    pattern_len: usize,
    transducer: ComparisonTransducer,
}

impl ProductChain {
    pub fn state_index(&self, prefix_state: usize, predictor: PredictorState) -> usize {
        prefix_state * 4 + predictor.value() as usize
    }

    pub fn state_of(&self, index: usize) -> (usize, PredictorState) {
        (index / 4, TWO_BIT_STATES[index % 4])
    }

    pub fn num_states(&self) -> usize {
        self.pattern_len * 4
    }

    pub fn chain(&self) -> &MarkovChain {
        &self.chain
    }

    pub fn transducer(&self) -> &ComparisonTransducer {
        &self.transducer
    }

    /// The edge leaving `(prefix_state, predictor)` on the given symbol:
    /// `(target prefix state, target predictor, probability, reward)`.
    pub fn edge(
        &self,
        prefix_state: usize,
        predictor: PredictorState,
        symbol_index: usize,
    ) -> (usize, PredictorState, f64, f64) {
        let e = self.chain.edges(self.state_index(prefix_state, predictor))[symbol_index];
        let (u, lambda) = self.state_of(e.target);
        (u, lambda, e.probability, e.reward)
    }

    pub fn to_dot(&self) -> String {
        let a = self.transducer.automaton();
        let mut out = String::from("digraph predictor_product {\n  rankdir=LR;\n");
        for i in 0..self.num_states() {
            let (u, lambda) = self.state_of(i);
            out.push_str(&format!(
                "  {i} [label=\"{},{}\"];\n",
                a.state_label(u),
                lambda
            ));
        }
        for i in 0..self.num_states() {
            for (s, &c) in a.alphabet().symbols().iter().enumerate() {
                let e = self.chain.edges(i)[s];
                out.push_str(&format!(
                    "  {i} -> {} [label=\"{c}:{}\"];\n",
                    e.target, e.reward
                ));
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Builds the predictor product chain for one matcher variant.
pub fn build_predictor_product(
    pattern: &Pattern,
    dist: &SymbolDistribution,
    variant: Variant,
) -> Result<ProductChain> {
    let transducer = ComparisonTransducer::build(pattern, dist.alphabet(), variant)?;
    let m = pattern.len();
    let k = dist.alphabet().len();
    let mut rows = Vec::with_capacity(m * 4);
    for u in 0..m {
        for lambda in TWO_BIT_STATES {
            let mut row = Vec::with_capacity(k);
            for s in 0..k {
                let output = transducer.output(u, s);
                let (end, misses) = lambda.run(&output.to_trace());
                row.push(Edge {
                    target: transducer.automaton().step(u, s) * 4 + end.value() as usize,
                    probability: dist.prob(s),
                    reward: misses as f64,
                });
            }
            rows.push(row);
        }
    }
    Ok(ProductChain {
        chain: MarkovChain::new(rows)?,
        pattern_len: m,
        transducer,
    })
}

/// Asymptotic misprediction rate of the letter-comparison branch: the
/// expected per-step reward of the product chain under the stationary
/// distribution of its unique terminal component. Independent of the
/// predictor's initial state.
pub fn comparison_misprediction_rate(
    pattern: &Pattern,
    dist: &SymbolDistribution,
    variant: Variant,
) -> Result<f64> {
    let product = build_predictor_product(pattern, dist, variant)?;
    let (terminal, _) = product.chain().terminal_component()?;
    let stationary = terminal.stationary_distribution()?;
    Ok(terminal.expected_step_reward(&stationary))
}

/// Computes every analytic rate for one (pattern, distribution, variant).
pub fn analyze(
    pattern: &Pattern,
    dist: &SymbolDistribution,
    variant: Variant,
) -> Result<MispredictionReport> {
    pattern.check_alphabet(dist.alphabet())?;
    let transducer = ComparisonTransducer::build(pattern, dist.alphabet(), variant)?;
    let counter = counter_rate(pattern, dist)?;
    let guard = guard_rate(pattern, dist)?;
    let comparison = comparison_misprediction_rate(pattern, dist, variant)?;
    let expected_comparisons = expected_comparisons_of(&transducer, dist, pattern)?;
    Ok(MispredictionReport {
        pattern: pattern.as_str().to_string(),
        alphabet: dist.alphabet().as_string(),
        probs: dist.probs().to_vec(),
        variant,
        rates: BranchRates {
            counter,
            guard,
            comparison,
            total: counter + guard + comparison,
        },
        expected_comparisons,
        mainloop_bound: MAINLOOP_MISPREDICTION_BOUND,
    })
}
