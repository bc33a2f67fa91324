//! Self-check suites: trace equivalence between the instrumented matcher
//! and the transducers, the closed-form stationary distribution against
//! power iteration, and the engine against independently written rate
//! formulas and reference values for small patterns.
//!
//! These run behind the `verify` CLI subcommand. Each suite returns a
//! pass/fail result with the first counterexample when one exists, and a
//! fault can be injected into the matcher's failure table to demonstrate
//! that the trace suite actually detects corruption.

use crate::analysis;
use crate::automata::{build_guard_transducer, ComparisonTransducer, PrefixAutomaton};
use crate::borders::{FailureTable, Variant};
use crate::simulator::{run_find_with_table, Branch};
use crate::text::{Alphabet, Pattern, SplitMix64, SymbolDistribution};

/// Independently written formulas for the per-branch rates of every
/// normalized pattern of length 2 and 3 over a binary alphabet with
/// `p` = probability of `a`. These act as oracles for the numeric engine.
pub mod closed_forms {
    use crate::borders::Variant;

    /// Patterns covered by the formula set.
    pub const PATTERNS: [&str; 6] = ["aa", "ab", "aaa", "aab", "aba", "abb"];

    pub fn counter(pattern: &str, p: f64) -> Option<f64> {
        let q = 1.0 - p;
        Some(match pattern {
            "aa" => crate::analysis::kappa(2, p),
            "ab" => p * q,
            "aaa" => crate::analysis::kappa(3, p),
            "aab" | "aba" => p * p * q,
            "abb" => p * q * q,
            _ => return None,
        })
    }

    pub fn guard(pattern: &str, p: f64) -> Option<f64> {
        let q = 1.0 - p;
        Some(match pattern {
            "aa" | "aaa" => q,
            "ab" | "aba" => q * q,
            "aab" => q * q * (1.0 + p),
            "abb" => q * q * q,
            _ => return None,
        })
    }

    pub fn comparison(pattern: &str, variant: Variant, p: f64) -> Option<f64> {
        let q = 1.0 - p;
        let ab_both = p * (3.0 - 7.0 * p + 7.0 * p * p - 2.0 * p.powi(3))
            / (1.0 - p + 2.0 * p * p - p.powi(3));
        Some(match (pattern, variant) {
            ("aa", Variant::Mp) => p * q * (1.0 + 2.0 * p) / (1.0 - p * p + p.powi(3)),
            ("aa", Variant::Kmp) | ("aaa", Variant::Kmp) => p * q / (1.0 - 2.0 * p + 2.0 * p * p),
            ("ab", _) | ("aba", Variant::Kmp) => ab_both,
            ("aaa", Variant::Mp) => p * q * (1.0 + p) * (1.0 + p),
            ("aab", Variant::Mp) => {
                p * (1.0 + 2.0 * p - p.powi(2) - 8.0 * p.powi(3)
                    + 6.0 * p.powi(4)
                    + 5.0 * p.powi(5)
                    - 5.0 * p.powi(6)
                    + p.powi(7))
            }
            ("aab", Variant::Kmp) => {
                p * (1.0 - 2.0 * p.powi(2) - p.powi(3) + 5.0 * p.powi(4) - 3.0 * p.powi(5)
                    + p.powi(6))
                    / (1.0 - 2.0 * p + 3.0 * p.powi(2) - 2.0 * p.powi(3) + p.powi(4))
            }
            ("aba", Variant::Mp) => {
                p * (3.0 - 7.0 * p + 8.0 * p.powi(2) - 4.0 * p.powi(3) + p.powi(4))
                    / (1.0 - p + p * p)
            }
            ("abb", _) => {
                p * (4.0 - 13.0 * p + 21.0 * p.powi(2) - 16.0 * p.powi(3) + 6.0 * p.powi(4)
                    - p.powi(5))
            }
            _ => return None,
        })
    }

    /// Comparison misprediction rate for the pattern `abab` as an explicit
    /// rational function of the two symbol probabilities.
    pub fn comparison_abab(pa: f64, pb: f64) -> f64 {
        let num = pa
            * (-pa.powi(3) * pb
                + 2.0 * pa.powi(2) * pb.powi(3)
                + 4.0 * pa.powi(2) * pb.powi(2)
                + 3.0 * pa.powi(2) * pb
                + pa.powi(2)
                - 5.0 * pa * pb.powi(2)
                - 4.0 * pa * pb
                - 2.0 * pa
                + 2.0 * pb
                + 1.0);
        let den = (1.0 - pa) * (pa.powi(2) * pb.powi(2) + pa.powi(2) * pb - pa * pb - pa + 1.0);
        num / den
    }
}

/// One row of the reference table of per-branch misprediction rates for
/// uniform sources: values exactly as printed in the table this library
/// reproduces, at their original (mixed 2- and 3-decimal) precision.
#[derive(Debug, Clone, Copy)]
pub struct ReferenceRow {
    pub pattern: &'static str,
    pub alphabet_size: usize,
    pub variant: Variant,
    pub counter: &'static str,
    pub guard: &'static str,
    pub comparison: &'static str,
    pub total: &'static str,
}

const fn row(
    pattern: &'static str,
    alphabet_size: usize,
    variant: Variant,
    counter: &'static str,
    guard: &'static str,
    comparison: &'static str,
    total: &'static str,
) -> ReferenceRow {
    ReferenceRow {
        pattern,
        alphabet_size,
        variant,
        counter,
        guard,
        comparison,
        total,
    }
}

/// Reference rates for uniform sources over alphabets of size 2 and 4.
pub const REFERENCE_TABLE: [ReferenceRow; 24] = [
    row("aa", 2, Variant::Mp, "0.283", "0.5", "0.571", "1.353"),
    row("aa", 2, Variant::Kmp, "0.283", "0.5", "0.5", "1.283"),
    row("ab", 2, Variant::Mp, "0.25", "0.25", "0.571", "1.321"),
    row("ab", 2, Variant::Kmp, "0.25", "0.25", "0.571", "1.321"),
    row("aaa", 2, Variant::Mp, "0.14", "0.5", "0.563", "1.202"),
    row("aaa", 2, Variant::Kmp, "0.14", "0.5", "0.5", "1.14"),
    row("aab", 2, Variant::Mp, "0.125", "0.375", "0.605", "1.23"),
    row("aab", 2, Variant::Kmp, "0.125", "0.375", "0.542", "1.166"),
    row("aba", 2, Variant::Mp, "0.125", "0.25", "0.708", "1.083"),
    row("aba", 2, Variant::Kmp, "0.125", "0.25", "0.571", "0.946"),
    row("abb", 2, Variant::Mp, "0.125", "0.125", "0.547", "0.921"),
    row("abb", 2, Variant::Kmp, "0.125", "0.125", "0.547", "0.921"),
    row("aa", 4, Variant::Mp, "0.073", "0.75", "0.295", "1.117"),
    row("aa", 4, Variant::Kmp, "0.073", "0.75", "0.3", "1.123"),
    row("ab", 4, Variant::Mp, "0.062", "0.688", "0.375", "1.186"),
    row("ab", 4, Variant::Kmp, "0.062", "0.688", "0.375", "1.186"),
    row("aaa", 4, Variant::Mp, "0.018", "0.75", "0.293", "1.06"),
    row("aaa", 4, Variant::Kmp, "0.018", "0.75", "0.3", "1.068"),
    row("aab", 4, Variant::Mp, "0.015", "0.734", "0.322", "1.086"),
    row("aab", 4, Variant::Kmp, "0.015", "0.734", "0.322", "1.086"),
    row("aba", 4, Variant::Mp, "0.015", "0.688", "0.367", "1.068"),
    row("aba", 4, Variant::Kmp, "0.015", "0.688", "0.375", "1.076"),
    row("abb", 4, Variant::Mp, "0.015", "0.672", "0.397", "1.098"),
    row("abb", 4, Variant::Kmp, "0.015", "0.672", "0.397", "1.098"),
];

/// Parses a printed decimal back to f64.
pub fn printed_value(s: &str) -> f64 {
    s.parse().expect("reference value parses")
}

/// Number of digits after the decimal point in a printed value.
pub fn printed_decimals(s: &str) -> usize {
    s.split_once('.').map_or(0, |(_, frac)| frac.len())
}

/// One unit in the last printed digit: the widest error a value printed at
/// that precision can carry, whether it was rounded or truncated.
pub fn printed_ulp(s: &str) -> f64 {
    10f64.powi(-(printed_decimals(s) as i32))
}

/// Options for the verification run.
#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Exhaustive trace equivalence covers all binary patterns up to this
    /// length (and all texts up to length 10).
    pub max_pattern_len: usize,
    /// Number of randomized trace-equivalence cases on top.
    pub random_trials: usize,
    /// When set, corrupts the named variant's failure table inside the
    /// matcher to prove the trace suite notices.
    pub fault: Option<Variant>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            max_pattern_len: 4,
            random_trials: 1000,
            fault: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Runs every suite. All pass on an intact build; an injected fault makes
/// the trace suite fail with its smallest counterexample.
pub fn run_all(options: &VerifyOptions) -> Vec<SuiteResult> {
    vec![
        suite_trace_equivalence(options),
        suite_stationary_closed_form(),
        suite_closed_form_grid(),
        suite_reference_rates(),
    ]
}

fn all_binary_words(len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    for _ in 0..len {
        out = out
            .iter()
            .flat_map(|w| ['a', 'b'].iter().map(move |&c| format!("{w}{c}")))
            .collect();
    }
    out
}

fn check_traces(
    pattern: &Pattern,
    alphabet: &Alphabet,
    text: &str,
    variant: Variant,
    fault: Option<Variant>,
) -> Result<(), String> {
    let good_table = FailureTable::build(pattern, variant);
    let table = match fault {
        Some(v) if v == variant => good_table.with_corrupted_entry(),
        _ => good_table,
    };
    let run = run_find_with_table(pattern, text, &table);
    let cmp = ComparisonTransducer::build(pattern, alphabet, variant).map_err(|e| e.to_string())?;
    let (_, cmp_trace) = cmp.transduce(text).map_err(|e| e.to_string())?;
    if run.trace(Branch::Comparison) != &cmp_trace {
        return Err(format!(
            "comparison trace mismatch for pattern {pattern}, text {text:?}, {variant}: \
             matcher {} vs transducer {cmp_trace}",
            run.trace(Branch::Comparison)
        ));
    }
    let guard = build_guard_transducer(&cmp);
    let (_, guard_trace) = guard.transduce(text).map_err(|e| e.to_string())?;
    if run.trace(Branch::Guard) != &guard_trace {
        return Err(format!(
            "guard trace mismatch for pattern {pattern}, text {text:?}, {variant}: \
             matcher {} vs transducer {guard_trace}",
            run.trace(Branch::Guard)
        ));
    }
    Ok(())
}

/// Matcher vs transducer traces: exhaustive over small binary inputs, then
/// randomized over alphabets up to size 3, patterns up to length 6 and
/// texts up to length 50.
fn suite_trace_equivalence(options: &VerifyOptions) -> SuiteResult {
    let name = "trace-equivalence";
    let binary = Alphabet::new("ab").unwrap();
    let mut cases = 0usize;
    for m in 1..=options.max_pattern_len {
        for pattern_text in all_binary_words(m) {
            let pattern = Pattern::new(&pattern_text).unwrap();
            for n in 0..=10usize {
                for text in all_binary_words(n) {
                    for variant in Variant::BOTH {
                        cases += 1;
                        if let Err(detail) =
                            check_traces(&pattern, &binary, &text, variant, options.fault)
                        {
                            return SuiteResult {
                                name,
                                passed: false,
                                detail,
                            };
                        }
                    }
                }
            }
        }
    }

    let mut rng = SplitMix64::new(0xB10C);
    for _ in 0..options.random_trials {
        let alphabet_size = 2 + rng.next_below(2);
        let symbols: String = ('a'..).take(alphabet_size).collect();
        let alphabet = Alphabet::new(&symbols).unwrap();
        let m = 1 + rng.next_below(6);
        let n = rng.next_below(51);
        let pattern_text: String = (0..m)
            .map(|_| alphabet.symbol(rng.next_below(alphabet_size)))
            .collect();
        let text: String = (0..n)
            .map(|_| alphabet.symbol(rng.next_below(alphabet_size)))
            .collect();
        let pattern = Pattern::new(&pattern_text).unwrap();
        for variant in Variant::BOTH {
            cases += 1;
            if let Err(detail) = check_traces(&pattern, &alphabet, &text, variant, options.fault) {
                return SuiteResult {
                    name,
                    passed: false,
                    detail,
                };
            }
        }
    }
    SuiteResult {
        name,
        passed: true,
        detail: format!("{cases} matcher runs reproduced by the transducers exactly"),
    }
}

/// The closed-form prefix-state distribution against power iteration of
/// the automaton dynamics, on random patterns and distributions.
fn suite_stationary_closed_form() -> SuiteResult {
    let name = "stationary-closed-form";
    let mut rng = SplitMix64::new(0x5EED);
    let cases = 200;
    for _ in 0..cases {
        let alphabet_size = 2 + rng.next_below(2);
        let symbols: String = ('a'..).take(alphabet_size).collect();
        let alphabet = Alphabet::new(&symbols).unwrap();
        let mut probs: Vec<f64> = (0..alphabet_size).map(|_| 0.1 + rng.next_f64()).collect();
        let total: f64 = probs.iter().sum();
        for p in probs.iter_mut() {
            *p /= total;
        }
        let dist = SymbolDistribution::new(alphabet.clone(), probs).unwrap();
        let m = 1 + rng.next_below(5);
        let pattern = Pattern::new(
            &(0..m)
                .map(|_| alphabet.symbol(rng.next_below(alphabet_size)))
                .collect::<String>(),
        )
        .unwrap();

        let closed = analysis::stationary_prefix_distribution(&pattern, &dist).unwrap();
        let automaton = PrefixAutomaton::build(&pattern, &alphabet).unwrap();
        let mut v = vec![0.0; automaton.num_states()];
        v[0] = 1.0;
        for _ in 0..64.max(m) {
            let mut next = vec![0.0; automaton.num_states()];
            for (u, &pu) in v.iter().enumerate() {
                for s in 0..alphabet.len() {
                    next[automaton.step(u, s)] += pu * dist.prob(s);
                }
            }
            v = next;
        }
        for (state, (c, i)) in closed.iter().zip(&v).enumerate() {
            if (c - i).abs() > 1e-10 {
                return SuiteResult {
                    name,
                    passed: false,
                    detail: format!(
                        "pattern {pattern}, state {state}: closed form {c} vs iterated {i}"
                    ),
                };
            }
        }
    }
    SuiteResult {
        name,
        passed: true,
        detail: format!("{cases} random (pattern, distribution) pairs agree to 1e-10"),
    }
}

/// Engine rates against the independent closed forms on a probability
/// grid, to 1e-9.
fn suite_closed_form_grid() -> SuiteResult {
    let name = "closed-form-grid";
    let alphabet = Alphabet::new("ab").unwrap();
    let mut checks = 0usize;
    for pattern_text in closed_forms::PATTERNS {
        let pattern = Pattern::new(pattern_text).unwrap();
        for step in 1..=9usize {
            let p = step as f64 / 10.0;
            let dist = SymbolDistribution::new(alphabet.clone(), vec![p, 1.0 - p]).unwrap();
            let checks_for_point: [(&str, f64, f64); 2] = [
                (
                    "counter",
                    analysis::counter_rate(&pattern, &dist).unwrap(),
                    closed_forms::counter(pattern_text, p).unwrap(),
                ),
                (
                    "guard",
                    analysis::guard_rate(&pattern, &dist).unwrap(),
                    closed_forms::guard(pattern_text, p).unwrap(),
                ),
            ];
            for (what, engine, form) in checks_for_point {
                checks += 1;
                if (engine - form).abs() > 1e-9 {
                    return SuiteResult {
                        name,
                        passed: false,
                        detail: format!(
                            "{what} rate for {pattern_text} at p={p}: engine {engine} vs form {form}"
                        ),
                    };
                }
            }
            for variant in Variant::BOTH {
                checks += 1;
                let engine =
                    analysis::comparison_misprediction_rate(&pattern, &dist, variant).unwrap();
                let form = closed_forms::comparison(pattern_text, variant, p).unwrap();
                if (engine - form).abs() > 1e-9 {
                    return SuiteResult {
                        name,
                        passed: false,
                        detail: format!(
                            "comparison rate for {pattern_text} {variant} at p={p}: \
                             engine {engine} vs form {form}"
                        ),
                    };
                }
            }
        }
    }
    SuiteResult {
        name,
        passed: true,
        detail: format!("{checks} grid points match the closed forms to 1e-9"),
    }
}

/// Engine per-branch rates against the reference table, to one unit in
/// the last printed digit of each entry (the table mixes 2- and 3-decimal
/// prints, some of them truncated rather than rounded).
fn suite_reference_rates() -> SuiteResult {
    let name = "reference-rates";
    let mut checks = 0usize;
    for row in REFERENCE_TABLE {
        let symbols: String = ('a'..).take(row.alphabet_size).collect();
        let dist = SymbolDistribution::uniform(Alphabet::new(&symbols).unwrap());
        let pattern = Pattern::new(row.pattern).unwrap();
        let report = analysis::analyze(&pattern, &dist, row.variant).unwrap();
        let cells = [
            ("counter", report.rates.counter, row.counter),
            ("guard", report.rates.guard, row.guard),
            ("comparison", report.rates.comparison, row.comparison),
        ];
        for (what, engine, printed) in cells {
            checks += 1;
            let reference = printed_value(printed);
            let tolerance = printed_ulp(printed);
            if (engine - reference).abs() > tolerance {
                return SuiteResult {
                    name,
                    passed: false,
                    detail: format!(
                        "{what} rate for {} |A|={} {}: engine {engine} vs reference {printed}",
                        row.pattern, row.alphabet_size, row.variant
                    ),
                };
            }
        }
    }
    SuiteResult {
        name,
        passed: true,
        detail: format!("{checks} per-branch reference cells reproduced at print precision"),
    }
}
