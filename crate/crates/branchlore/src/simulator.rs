//! An instrumented run of the matcher that records every branch outcome,
//! plus Monte Carlo estimation of empirical misprediction rates.
//!
//! The matcher is the classic table-driven scan:
//!
//! ```text
//! i, j, nb = 0, 0, 0
//! while j < n:                     # main-loop branch
//!     while i >= 0 and X[i] != W[j]:   # guard branch, comparison branch
//!         i = B[i]
//!     i, j = i + 1, j + 1
//!     if i == m:                   # counter branch
//!         i = B[i]; nb += 1
//! ```
//!
//! The two tests of the inner `while` compile to separate jumps under
//! short-circuit evaluation, so four branches are tracked. Outcomes are
//! recorded in evaluation order: the main-loop test once per iteration
//! (plus its final failing evaluation), then alternating guard/comparison
//! evaluations — including the guard's failing evaluation when `i`
//! reaches -1, which is not followed by a comparison — and finally the
//! counter test.

use crate::automata::BranchTrace;
use crate::borders::{FailureTable, Variant};
use crate::error::{Error, Result};
use crate::predictor::PredictorState;
use crate::text::{Pattern, SymbolDistribution};

/// The four conditional branches of the matcher, in source order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    MainLoop,
    Guard,
    Comparison,
    Counter,
}

impl Branch {
    pub const ALL: [Branch; 4] = [
        Branch::MainLoop,
        Branch::Guard,
        Branch::Comparison,
        Branch::Counter,
    ];

    pub fn index(self) -> usize {
        match self {
            Branch::MainLoop => 0,
            Branch::Guard => 1,
            Branch::Comparison => 2,
            Branch::Counter => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Branch::MainLoop => "mainloop",
            Branch::Guard => "guard",
            Branch::Comparison => "comparison",
            Branch::Counter => "counter",
        }
    }
}

/// Everything one matcher run produced: occurrence count, comparison
/// count, and the exact outcome sequence of each branch.
#[derive(Debug, Clone, PartialEq)]
pub struct FindRun {
    pub occurrences: usize,
    pub comparisons: usize,
    traces: [BranchTrace; 4],
}

impl FindRun {
    pub fn trace(&self, branch: Branch) -> &BranchTrace {
        &self.traces[branch.index()]
    }
}

/// Runs the matcher on `text` using the failure table of `variant`.
pub fn run_find(pattern: &Pattern, text: &str, variant: Variant) -> FindRun {
    run_find_with_table(pattern, text, &FailureTable::build(pattern, variant))
}

/// Runs the matcher with an explicit table. Exposed so verification can
/// feed in deliberately corrupted tables; entries must stay in `[-1, i)`.
pub fn run_find_with_table(pattern: &Pattern, text: &str, table: &FailureTable) -> FindRun {
    let x = pattern.symbols();
    let w: Vec<char> = text.chars().collect();
    let m = x.len() as i64;

    let mut mainloop = BranchTrace::new();
    let mut guard = BranchTrace::new();
    let mut comparison = BranchTrace::new();
    let mut counter = BranchTrace::new();

    let mut i: i64 = 0;
    let mut occurrences = 0usize;
    let mut comparisons = 0usize;
    for &symbol in &w {
        mainloop.push_taken(true);
        loop {
            guard.push_taken(i >= 0);
            if i < 0 {
                break;
            }
            let differs = x[i as usize] != symbol;
            comparison.push_taken(differs);
            comparisons += 1;
            if !differs {
                break;
            }
            i = table.get(i as usize);
        }
        i += 1;
        let found = i == m;
        counter.push_taken(found);
        if found {
            i = table.get(i as usize);
            occurrences += 1;
        }
    }
    mainloop.push_taken(false);

    FindRun {
        occurrences,
        comparisons,
        traces: [mainloop, guard, comparison, counter],
    }
}

/// Per-branch aggregate over one or more trials.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BranchStats {
    /// Mispredictions per trial, averaged.
    pub mean_count: f64,
    /// Mispredictions per text symbol, averaged over trials.
    pub mean_rate: f64,
    /// Sample standard error of the per-trial rate (0 for a single trial).
    pub stderr_rate: f64,
    /// Largest per-trial misprediction count seen.
    pub max_count: u64,
}

/// Empirical misprediction estimates from seeded random texts.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalReport {
    pub text_len: usize,
    pub trials: usize,
    pub seeds: Vec<u64>,
    /// Indexed by `Branch::index()`.
    pub branches: [BranchStats; 4],
    /// Mean over trials of (total misprediction count across the counter,
    /// guard and comparison branches) / text length.
    pub total_rate: f64,
    pub total_stderr: f64,
    /// Mean over trials of comparisons / text length.
    pub comparison_evals_rate: f64,
}

impl EmpiricalReport {
    pub fn branch(&self, branch: Branch) -> &BranchStats {
        &self.branches[branch.index()]
    }
}

/// Outcome of a single seeded trial.
#[derive(Debug, Clone, Copy)]
struct Trial {
    counts: [u64; 4],
    comparisons: usize,
}

fn run_trial(
    pattern: &Pattern,
    dist: &SymbolDistribution,
    variant: Variant,
    n: usize,
    seed: u64,
    initial_states: &[PredictorState; 4],
) -> Trial {
    let text = dist.sample_text(n, seed);
    let run = run_find(pattern, &text, variant);
    let mut counts = [0u64; 4];
    for branch in Branch::ALL {
        let (_, misses) = initial_states[branch.index()].run(run.trace(branch));
        counts[branch.index()] = misses;
    }
    Trial {
        counts,
        comparisons: run.comparisons,
    }
}

/// One seeded trial: samples a text, runs the matcher, and folds each
/// branch trace through its own 2-bit predictor.
pub fn simulate_mispredictions(
    pattern: &Pattern,
    dist: &SymbolDistribution,
    variant: Variant,
    n: usize,
    seed: u64,
    initial_states: &[PredictorState; 4],
) -> Result<EmpiricalReport> {
    if n == 0 {
        return Err(Error::EmptyText);
    }
    pattern.check_alphabet(dist.alphabet())?;
    let trial = run_trial(pattern, dist, variant, n, seed, initial_states);
    Ok(aggregate(n, vec![seed], &[trial]))
}

/// Runs `trials` independent trials with seeds `master_seed + 1 ..=
/// master_seed + trials` and aggregates mean rates and standard errors.
/// Trials fan out over at most `threads` worker threads (1 = serial); the
/// result does not depend on the thread count because each trial derives
/// its text from its own seed and aggregation sums per-trial counts in
/// trial order.
#[allow(clippy::too_many_arguments)]
pub fn monte_carlo(
    pattern: &Pattern,
    dist: &SymbolDistribution,
    variant: Variant,
    n: usize,
    trials: usize,
    master_seed: u64,
    initial_states: &[PredictorState; 4],
    threads: usize,
) -> Result<EmpiricalReport> {
    if n == 0 {
        return Err(Error::EmptyText);
    }
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    pattern.check_alphabet(dist.alphabet())?;

    let seeds: Vec<u64> = (1..=trials as u64)
        .map(|t| master_seed.wrapping_add(t))
        .collect();
    let workers = threads.max(1).min(trials);
    let mut results: Vec<Option<Trial>> = vec![None; trials];

    if workers == 1 {
        for (t, slot) in results.iter_mut().enumerate() {
            *slot = Some(run_trial(
                pattern,
                dist,
                variant,
                n,
                seeds[t],
                initial_states,
            ));
        }
    } else {
        let chunk = trials.div_ceil(workers);
        std::thread::scope(|scope| {
            for (chunk_index, slots) in results.chunks_mut(chunk).enumerate() {
                let seeds = &seeds;
                scope.spawn(move || {
                    for (offset, slot) in slots.iter_mut().enumerate() {
                        let t = chunk_index * chunk + offset;
                        *slot = Some(run_trial(
                            pattern,
                            dist,
                            variant,
                            n,
                            seeds[t],
                            initial_states,
                        ));
                    }
                });
            }
        });
    }

    let trials_vec: Vec<Trial> = results.into_iter().map(|t| t.expect("trial ran")).collect();
    Ok(aggregate(n, seeds, &trials_vec))
}

fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let k = values.len();
    let mean = values.iter().sum::<f64>() / k as f64;
    if k < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (k - 1) as f64;
    (mean, (var / k as f64).sqrt())
}

fn aggregate(n: usize, seeds: Vec<u64>, trials: &[Trial]) -> EmpiricalReport {
    let mut branches = [BranchStats::default(); 4];
    for branch in Branch::ALL {
        let i = branch.index();
        let rates: Vec<f64> = trials
            .iter()
            .map(|t| t.counts[i] as f64 / n as f64)
            .collect();
        let (mean_rate, stderr_rate) = mean_and_stderr(&rates);
        branches[i] = BranchStats {
            mean_count: trials.iter().map(|t| t.counts[i] as f64).sum::<f64>()
                / trials.len() as f64,
            mean_rate,
            stderr_rate,
            max_count: trials.iter().map(|t| t.counts[i]).max().unwrap_or(0),
        };
    }
    let totals: Vec<f64> = trials
        .iter()
        .map(|t| {
            (t.counts[Branch::Guard.index()]
                + t.counts[Branch::Comparison.index()]
                + t.counts[Branch::Counter.index()]) as f64
                / n as f64
        })
        .collect();
    let (total_rate, total_stderr) = mean_and_stderr(&totals);
    let comparison_evals_rate = trials
        .iter()
        .map(|t| t.comparisons as f64 / n as f64)
        .sum::<f64>()
        / trials.len() as f64;
    EmpiricalReport {
        text_len: n,
        trials: trials.len(),
        seeds,
        branches,
        total_rate,
        total_stderr,
        comparison_evals_rate,
    }
}

/// Default initial predictor states: strongly not-taken everywhere.
pub fn default_initial_states() -> [PredictorState; 4] {
    [PredictorState::strongly_not_taken(); 4]
}
