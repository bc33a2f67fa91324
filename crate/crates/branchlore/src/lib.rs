//! Exact branch-misprediction rates for the Morris-Pratt and
//! Knuth-Morris-Pratt matchers under local saturating-counter predictors.
//!
//! For a fixed pattern and a memoryless random text, the matcher's four
//! conditional branches (main loop, the `i >= 0` guard, the letter
//! comparison, and the occurrence counter) each drive their own k-bit
//! saturating predictor. This crate computes the asymptotic expected number
//! of mispredictions per text symbol for every branch, exactly, and checks
//! the numbers against an instrumented simulator of the matcher.
//!
//! The analytic route goes through a small zoo of finite-state machines:
//!
//! * [`automata::PrefixAutomaton`] — the deterministic, complete automaton
//!   over the strict prefixes of the pattern that tracks the matcher's
//!   state once per text symbol;
//! * [`automata::ComparisonTransducer`] — the same automaton with each
//!   transition annotated by the exact taken/not-taken word the letter
//!   comparison emits during that step (one word per failure chain);
//! * [`analysis::ProductChain`] — the synchronized product of the
//!   transducer with the 2-bit predictor, turned into a Markov chain whose
//!   stationary per-step reward is the comparison misprediction rate.
//!
//! Counter and guard rates admit closed forms and are computed directly;
//! the Markov machinery lives in [`markov`]. The instrumented matcher in
//! [`simulator`] records the outcome sequence of all four branches so the
//! transducer outputs can be validated exactly (trace equality, not just
//! rate agreement), and supports Monte Carlo estimation with reproducible
//! seeds. [`verify`] bundles those cross-checks into self-test suites.
//!
//! # Quick start
//!
//! ```
//! use branchlore::analysis::analyze;
//! use branchlore::borders::Variant;
//! use branchlore::text::{Alphabet, Pattern, SymbolDistribution};
//!
//! let alphabet = Alphabet::new("ab")?;
//! let dist = SymbolDistribution::uniform(alphabet);
//! let pattern = Pattern::new("aba")?;
//! let report = analyze(&pattern, &dist, Variant::Kmp)?;
//! assert!((report.rates.total - 0.946).abs() < 5e-4);
//! # Ok::<(), branchlore::Error>(())
//! ```
//!
//! Runnable walkthroughs live in `examples/`; the `branchlore` binary
//! exposes the same functionality as `analyze`, `simulate`, `sweep` and
//! `verify` subcommands.

pub mod analysis;
pub mod automata;
pub mod borders;
pub mod cli;
mod error;
pub mod markov;
pub mod predictor;
pub mod simulator;
pub mod text;
pub mod tolerance;
pub mod verify;

pub use borders::Variant;
pub use error::{Error, Result};
