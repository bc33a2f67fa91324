//! The prefix automaton of a pattern and its comparison/guard transducers.
//!
//! States are the strict prefixes of the pattern, identified by length, so
//! state `i` means "the longest pattern prefix matching a suffix of the
//! text read so far has length `i`". The automaton is deterministic and
//! complete over the chosen alphabet; the unique transition that reads the
//! whole pattern is the accepting transition and its target is the longest
//! border of the pattern.
//!
//! The comparison transducer annotates every transition with the exact
//! word of taken/not-taken outcomes the matcher's letter comparison emits
//! while reading that symbol: `N` on a straight match, or one `T` per
//! failure-chain hop, ending with `N` if a match stops the chain. Outputs
//! therefore lie in `T*N` or `T+`, which is compactly stored as a count of
//! leading `T`s plus a final-`N` flag. The guard transducer for the
//! `i >= 0` test shares the transitions and rewrites each output `s` to
//! `T^|s|` (chain stopped by a match) or `T^|s| N` (chain fell off the
//! bottom).

use crate::borders::{FailureTable, Variant};
use crate::error::{Error, Result};
use crate::text::{Alphabet, Pattern};

/// One evaluation of a conditional branch: taken means the condition held.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BranchOutcome {
    Taken,
    NotTaken,
}

impl BranchOutcome {
    pub fn as_char(self) -> char {
        match self {
            BranchOutcome::Taken => 'T',
            BranchOutcome::NotTaken => 'N',
        }
    }
}

/// A finite sequence of branch outcomes, printable as e.g. `TTN`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BranchTrace(Vec<BranchOutcome>);

impl BranchTrace {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    pub fn push(&mut self, outcome: BranchOutcome) {
        self.0.push(outcome);
    }

    pub fn push_taken(&mut self, taken: bool) {
        self.0.push(if taken {
            BranchOutcome::Taken
        } else {
            BranchOutcome::NotTaken
        });
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = BranchOutcome> + '_ {
        self.0.iter().copied()
    }

    pub fn taken_count(&self) -> usize {
        self.0
            .iter()
            .filter(|&&o| o == BranchOutcome::Taken)
            .count()
    }

    pub fn outcomes(&self) -> &[BranchOutcome] {
        &self.0
    }
}

impl std::fmt::Display for BranchTrace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for o in &self.0 {
            write!(f, "{}", o.as_char())?;
        }
        Ok(())
    }
}

impl std::str::FromStr for BranchTrace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                'T' => Ok(BranchOutcome::Taken),
                'N' => Ok(BranchOutcome::NotTaken),
                other => Err(Error::BadTraceChar(other)),
            })
            .collect()
    }
}

impl FromIterator<BranchOutcome> for BranchTrace {
    fn from_iter<I: IntoIterator<Item = BranchOutcome>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

/// A transducer output word: `t_count` leading `T`s, optionally closed by
/// one `N`. Comparison outputs are `T*N` or `T+` (so `t_count >= 1` when
/// there is no final `N`); guard outputs are `T+` or `T+N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CmpOutput {
    t_count: u32,
    ends_with_n: bool,
}

impl CmpOutput {
    pub(crate) fn new(t_count: u32, ends_with_n: bool) -> Self {
        debug_assert!(t_count >= 1 || ends_with_n);
        Self {
            t_count,
            ends_with_n,
        }
    }

    pub fn t_count(&self) -> u32 {
        self.t_count
    }

    pub fn ends_with_n(&self) -> bool {
        self.ends_with_n
    }

    pub fn len(&self) -> u32 {
        self.t_count + u32::from(self.ends_with_n)
    }

    pub fn is_empty(&self) -> bool {
        false // outputs always contain at least one outcome
    }

    /// The guard word for this comparison word: the `i >= 0` test holds
    /// once per comparison, plus one failing evaluation when the failure
    /// chain fell off the bottom (no final `N` in the comparison word).
    pub fn guard_output(&self) -> CmpOutput {
        CmpOutput {
            t_count: self.len(),
            ends_with_n: !self.ends_with_n,
        }
    }

    pub fn to_trace(self) -> BranchTrace {
        let mut trace = BranchTrace::new();
        for _ in 0..self.t_count {
            trace.push(BranchOutcome::Taken);
        }
        if self.ends_with_n {
            trace.push(BranchOutcome::NotTaken);
        }
        trace
    }
}

impl std::fmt::Display for CmpOutput {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_trace())
    }
}

/// Deterministic complete automaton over the strict prefixes of a pattern.
#[derive(Debug, Clone)]
pub struct PrefixAutomaton {
    pattern: Pattern,
    alphabet: Alphabet,
    /// delta[state][symbol index]
    delta: Vec<Vec<usize>>,
}

impl PrefixAutomaton {
    pub fn build(pattern: &Pattern, alphabet: &Alphabet) -> Result<Self> {
        pattern.check_alphabet(alphabet)?;
        let m = pattern.len();
        let x = pattern.symbols();
        let mp = FailureTable::mp(pattern);
        let border_of_pattern = mp.get(m) as usize;
        let mut delta = vec![vec![0usize; alphabet.len()]; m];
        for state in 0..m {
            for (s, &c) in alphabet.symbols().iter().enumerate() {
                delta[state][s] = if x[state] == c {
                    if state + 1 == m {
                        border_of_pattern // accepting transition
                    } else {
                        state + 1
                    }
                } else if state == 0 {
                    0
                } else {
                    // mismatch: defer to the failure state, already filled
                    // for all strictly smaller states
                    delta[mp.get(state) as usize][s]
                };
            }
        }
        Ok(Self {
            pattern: pattern.clone(),
            alphabet: alphabet.clone(),
            delta,
        })
    }

    pub fn pattern(&self) -> &Pattern {
        &self.pattern
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    pub fn step(&self, state: usize, symbol_index: usize) -> usize {
        self.delta[state][symbol_index]
    }

    /// True for the unique transition whose use marks a pattern occurrence.
    pub fn is_accepting(&self, state: usize, symbol_index: usize) -> bool {
        state == self.pattern.len() - 1
            && self.alphabet.symbol(symbol_index) == self.pattern.symbols()[state]
    }

    /// Walks `word` from the initial state; returns the final state and
    /// how often the accepting transition was used (= occurrences of the
    /// pattern in `word`).
    pub fn scan(&self, word: &str) -> Result<(usize, usize)> {
        let mut state = 0;
        let mut occurrences = 0;
        for c in word.chars() {
            let s = self.alphabet.index_of(c)?;
            if self.is_accepting(state, s) {
                occurrences += 1;
            }
            state = self.step(state, s);
        }
        Ok((state, occurrences))
    }

    /// Label for state `i`: its prefix, or `ε` for the initial state.
    pub fn state_label(&self, state: usize) -> String {
        if state == 0 {
            "ε".to_string()
        } else {
            self.pattern.symbols()[..state].iter().collect()
        }
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph prefix_automaton {\n  rankdir=LR;\n");
        for state in 0..self.num_states() {
            out.push_str(&format!(
                "  {state} [label=\"{}\"];\n",
                self.state_label(state)
            ));
        }
        for state in 0..self.num_states() {
            for (s, &c) in self.alphabet.symbols().iter().enumerate() {
                let style = if self.is_accepting(state, s) {
                    ", style=bold"
                } else {
                    ""
                };
                out.push_str(&format!(
                    "  {state} -> {} [label=\"{c}\"{style}];\n",
                    self.step(state, s)
                ));
            }
        }
        out.push_str("}\n");
        out
    }
}

/// The prefix automaton with per-transition comparison outputs for one
/// matcher variant. MP and KMP share the transition function; only the
/// outputs differ.
#[derive(Debug, Clone)]
pub struct ComparisonTransducer {
    automaton: PrefixAutomaton,
    variant: Variant,
    /// out[state][symbol index]
    out: Vec<Vec<CmpOutput>>,
}

impl ComparisonTransducer {
    pub fn build(pattern: &Pattern, alphabet: &Alphabet, variant: Variant) -> Result<Self> {
        let automaton = PrefixAutomaton::build(pattern, alphabet)?;
        let table = FailureTable::build(pattern, variant);
        let x = pattern.symbols();
        let m = pattern.len();
        let mut out = vec![Vec::with_capacity(alphabet.len()); m];
        for (state, row) in out.iter_mut().enumerate() {
            for &c in alphabet.symbols() {
                row.push(Self::output_for(x, &table, state, c));
            }
        }
        Ok(Self {
            automaton,
            variant,
            out,
        })
    }

    /// Output word for reading `c` in `state`: `N` on a match, otherwise
    /// one `T` per failure-chain hop, closed by `N` if a hop matches or
    /// left open when the chain bottoms out at the missing value.
    fn output_for(x: &[char], table: &FailureTable, state: usize, c: char) -> CmpOutput {
        if x[state] == c {
            return CmpOutput::new(0, true);
        }
        let mut t_count = 1u32;
        let mut u = state;
        loop {
            let f = table.get(u);
            if f < 0 {
                return CmpOutput::new(t_count, false);
            }
            let f = f as usize;
            if x[f] == c {
                return CmpOutput::new(t_count, true);
            }
            t_count += 1;
            u = f;
        }
    }

    pub fn automaton(&self) -> &PrefixAutomaton {
        &self.automaton
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn output(&self, state: usize, symbol_index: usize) -> CmpOutput {
        self.out[state][symbol_index]
    }

    /// Runs `word` through the transducer, concatenating per-transition
    /// outputs; returns the final state and the full trace.
    pub fn transduce(&self, word: &str) -> Result<(usize, BranchTrace)> {
        let mut state = 0;
        let mut trace = BranchTrace::new();
        for c in word.chars() {
            let s = self.automaton.alphabet().index_of(c)?;
            let out = self.output(state, s);
            for _ in 0..out.t_count() {
                trace.push(BranchOutcome::Taken);
            }
            if out.ends_with_n() {
                trace.push(BranchOutcome::NotTaken);
            }
            state = self.automaton.step(state, s);
        }
        Ok((state, trace))
    }

    pub fn to_dot(&self) -> String {
        self.dot_with(
            |state, s| self.output(state, s).to_string(),
            "comparison_transducer",
        )
    }

    fn dot_with(&self, label: impl Fn(usize, usize) -> String, name: &str) -> String {
        let a = &self.automaton;
        let mut out = format!("digraph {name} {{\n  rankdir=LR;\n");
        for state in 0..a.num_states() {
            out.push_str(&format!(
                "  {state} [label=\"{}\"];\n",
                a.state_label(state)
            ));
        }
        for state in 0..a.num_states() {
            for (s, &c) in a.alphabet().symbols().iter().enumerate() {
                let style = if a.is_accepting(state, s) {
                    ", style=bold"
                } else {
                    ""
                };
                out.push_str(&format!(
                    "  {state} -> {} [label=\"{c}:{}\"{style}];\n",
                    a.step(state, s),
                    label(state, s)
                ));
            }
        }
        out.push_str("}\n");
        out
    }
}

/// The transducer for the `i >= 0` guard test: same transitions as the
/// comparison transducer, outputs rewritten transition by transition.
#[derive(Debug, Clone)]
pub struct GuardTransducer {
    cmp: ComparisonTransducer,
}

impl GuardTransducer {
    pub fn output(&self, state: usize, symbol_index: usize) -> CmpOutput {
        self.cmp.output(state, symbol_index).guard_output()
    }

    pub fn automaton(&self) -> &PrefixAutomaton {
        self.cmp.automaton()
    }

    pub fn variant(&self) -> Variant {
        self.cmp.variant()
    }

    pub fn transduce(&self, word: &str) -> Result<(usize, BranchTrace)> {
        let a = self.cmp.automaton();
        let mut state = 0;
        let mut trace = BranchTrace::new();
        for c in word.chars() {
            let s = a.alphabet().index_of(c)?;
            let out = self.output(state, s);
            for _ in 0..out.t_count() {
                trace.push(BranchOutcome::Taken);
            }
            if out.ends_with_n() {
                trace.push(BranchOutcome::NotTaken);
            }
            state = a.step(state, s);
        }
        Ok((state, trace))
    }

    pub fn to_dot(&self) -> String {
        self.cmp.dot_with(
            |state, s| self.output(state, s).to_string(),
            "guard_transducer",
        )
    }
}

/// Builds the guard transducer from a comparison transducer.
pub fn build_guard_transducer(cmp: &ComparisonTransducer) -> GuardTransducer {
    GuardTransducer { cmp: cmp.clone() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new("ab").unwrap()
    }

    fn pat(s: &str) -> Pattern {
        Pattern::new(s).unwrap()
    }

    /// Brute-force transition oracle: the longest suffix of `u . c` that is
    /// a strict prefix of the pattern.
    fn delta_oracle(x: &[char], state: usize, c: char) -> usize {
        let mut w: Vec<char> = x[..state].to_vec();
        w.push(c);
        for l in (0..=w.len().min(x.len() - 1)).rev() {
            if w[w.len() - l..] == x[..l] {
                return l;
            }
        }
        0
    }

    /// Independent output oracle: direct recursion on Eq-style cases using
    /// brute-force border computation on the prefix strings themselves.
    fn output_oracle(x: &[char], variant: Variant, state: usize, c: char) -> (u32, bool) {
        fn brute_border(w: &[char]) -> usize {
            (1..w.len())
                .rev()
                .find(|&l| w[..l] == w[w.len() - l..])
                .unwrap_or(0)
        }
        fn fail(x: &[char], variant: Variant, u: usize) -> i64 {
            match variant {
                Variant::Mp => {
                    if u == 0 {
                        -1
                    } else {
                        brute_border(&x[..u]) as i64
                    }
                }
                Variant::Kmp => {
                    if u == 0 {
                        return -1;
                    }
                    let mut l = brute_border(&x[..u]);
                    loop {
                        if x[l] != x[u] {
                            return l as i64;
                        }
                        if l == 0 {
                            return -1;
                        }
                        l = brute_border(&x[..l]);
                    }
                }
            }
        }
        if x[state] == c {
            return (0, true);
        }
        let f = fail(x, variant, state);
        if f < 0 {
            return (1, false);
        }
        let (t, e) = output_oracle(x, variant, f as usize, c);
        (t + 1, e)
    }

    fn all_patterns(k: usize, max_len: usize) -> Vec<Pattern> {
        let syms: Vec<char> = ('a'..).take(k).collect();
        let mut out = Vec::new();
        for len in 1..=max_len {
            let mut idx = vec![0usize; len];
            loop {
                out.push(Pattern::new(&idx.iter().map(|&i| syms[i]).collect::<String>()).unwrap());
                let mut j = 0;
                loop {
                    if j == len {
                        break;
                    }
                    idx[j] += 1;
                    if idx[j] < k {
                        break;
                    }
                    idx[j] = 0;
                    j += 1;
                }
                if j == len {
                    break;
                }
            }
        }
        out
    }

    #[test]
    fn prefix_automaton_for_ababb_matches_known_graph() {
        let a = PrefixAutomaton::build(&pat("ababb"), &ab()).unwrap();
        // (state, symbol, target); symbol 0 = 'a', 1 = 'b'
        let expected = [
            (0, 0, 1),
            (0, 1, 0),
            (1, 0, 1),
            (1, 1, 2),
            (2, 0, 3),
            (2, 1, 0),
            (3, 0, 1),
            (3, 1, 4),
            (4, 0, 3),
            (4, 1, 0),
        ];
        for (state, sym, target) in expected {
            assert_eq!(a.step(state, sym), target, "state {state} sym {sym}");
        }
        assert!(a.is_accepting(4, 1));
    }

    #[test]
    fn single_state_automaton() {
        let a = PrefixAutomaton::build(&pat("a"), &ab()).unwrap();
        assert_eq!(a.num_states(), 1);
        assert_eq!(a.step(0, 0), 0); // accepting, target = border of "a" = 0
        assert_eq!(a.step(0, 1), 0);
        assert!(a.is_accepting(0, 0));
        assert!(!a.is_accepting(0, 1));
    }

    #[test]
    fn delta_matches_brute_force_oracle() {
        for k in 2..=3usize {
            let symbols: String = ('a'..).take(k).collect();
            let alphabet = Alphabet::new(&symbols).unwrap();
            for p in all_patterns(k, 6) {
                let a = PrefixAutomaton::build(&p, &alphabet).unwrap();
                for state in 0..a.num_states() {
                    for (s, &c) in alphabet.symbols().iter().enumerate() {
                        assert_eq!(
                            a.step(state, s),
                            delta_oracle(p.symbols(), state, c),
                            "pattern {p} state {state} symbol {c}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn known_outputs_for_ababb() {
        let mp = ComparisonTransducer::build(&pat("ababb"), &ab(), Variant::Mp).unwrap();
        let kmp = ComparisonTransducer::build(&pat("ababb"), &ab(), Variant::Kmp).unwrap();
        // the transition aba --a--> a: MP pays an extra comparison
        assert_eq!(mp.output(3, 0).to_string(), "TTN");
        assert_eq!(kmp.output(3, 0).to_string(), "TN");
        // mismatch at the initial state falls straight off the chain
        assert_eq!(mp.output(0, 1).to_string(), "T");
        assert_eq!(kmp.output(0, 1).to_string(), "T");
        // forward matches output a single N everywhere
        assert_eq!(mp.output(0, 0).to_string(), "N");
        assert_eq!(mp.output(4, 1).to_string(), "N"); // accepting
                                                      // ab --b--> ε: MP re-checks at ε, KMP's failure value is missing
        assert_eq!(mp.output(2, 1).to_string(), "TT");
        assert_eq!(kmp.output(2, 1).to_string(), "T");
        // MP and KMP share the transition function
        for state in 0..5 {
            for s in 0..2 {
                assert_eq!(
                    mp.automaton().step(state, s),
                    kmp.automaton().step(state, s)
                );
            }
        }
    }

    #[test]
    fn outputs_match_independent_recursion() {
        for k in 2..=3usize {
            let symbols: String = ('a'..).take(k).collect();
            let alphabet = Alphabet::new(&symbols).unwrap();
            for p in all_patterns(k, 6) {
                for variant in Variant::BOTH {
                    let t = ComparisonTransducer::build(&p, &alphabet, variant).unwrap();
                    for state in 0..p.len() {
                        for (s, &c) in alphabet.symbols().iter().enumerate() {
                            let got = t.output(state, s);
                            let (tc, e) = output_oracle(p.symbols(), variant, state, c);
                            assert_eq!(
                                (got.t_count(), got.ends_with_n()),
                                (tc, e),
                                "pattern {p} {variant} state {state} symbol {c}"
                            );
                            // output shape: T*N or T+
                            assert!(got.ends_with_n() || got.t_count() >= 1);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn guard_outputs_follow_comparison_outputs() {
        let cmp = ComparisonTransducer::build(&pat("ababb"), &ab(), Variant::Mp).unwrap();
        let guard = build_guard_transducer(&cmp);
        // comparison N -> guard T
        assert_eq!(guard.output(0, 0).to_string(), "T");
        // comparison T (fall off the chain) -> guard TN
        assert_eq!(guard.output(0, 1).to_string(), "TN");
        // comparison TTN -> guard TTT
        assert_eq!(guard.output(3, 0).to_string(), "TTT");
        for state in 0..5 {
            for s in 0..2 {
                let g = guard.output(state, s);
                // guard outputs lie in T+ or T+N
                assert!(g.t_count() >= 1);
                assert_eq!(g.t_count(), cmp.output(state, s).len());
                assert_eq!(g.ends_with_n(), !cmp.output(state, s).ends_with_n());
            }
        }
    }

    #[test]
    fn transduce_follows_paths() {
        let kmp = ComparisonTransducer::build(&pat("ababb"), &ab(), Variant::Kmp).unwrap();
        let (state, trace) = kmp.transduce("abaab").unwrap();
        assert_eq!(state, 2); // "ab"
        assert_eq!(trace.to_string(), "NNNTNN");

        let mp = ComparisonTransducer::build(&pat("ababb"), &ab(), Variant::Mp).unwrap();
        let (state, trace) = mp.transduce("abaab").unwrap();
        assert_eq!(state, 2);
        assert_eq!(trace.to_string(), "NNNTTNN");

        let (state, trace) = mp.transduce("").unwrap();
        assert_eq!(state, 0);
        assert!(trace.is_empty());

        assert_eq!(
            kmp.transduce("abx").unwrap_err(),
            Error::SymbolNotInAlphabet('x')
        );
    }

    #[test]
    fn scan_counts_occurrences() {
        let a = PrefixAutomaton::build(&pat("ab"), &ab()).unwrap();
        assert_eq!(a.scan("abab").unwrap(), (0, 2));
        assert_eq!(a.scan("bbbb").unwrap(), (0, 0));
        let a = PrefixAutomaton::build(&pat("aa"), &ab()).unwrap();
        assert_eq!(a.scan("aaaa").unwrap().1, 3); // overlapping occurrences
    }

    #[test]
    fn scan_matches_naive_substring_count() {
        let mut rng = crate::text::SplitMix64::new(2024);
        let alphabet = Alphabet::new("abc").unwrap();
        for _ in 0..200 {
            let m = 1 + rng.next_below(5);
            let n = rng.next_below(51);
            let p: String = (0..m).map(|_| alphabet.symbol(rng.next_below(3))).collect();
            let w: String = (0..n).map(|_| alphabet.symbol(rng.next_below(3))).collect();
            let pattern = Pattern::new(&p).unwrap();
            let a = PrefixAutomaton::build(&pattern, &alphabet).unwrap();
            let wc: Vec<char> = w.chars().collect();
            let naive = if wc.len() >= m {
                (0..=wc.len() - m)
                    .filter(|&i| wc[i..i + m] == *pattern.symbols())
                    .count()
            } else {
                0
            };
            assert_eq!(a.scan(&w).unwrap().1, naive, "pattern {p} text {w}");
        }
    }

    #[test]
    fn trace_parsing_round_trips() {
        let t: BranchTrace = "TNTTN".parse().unwrap();
        assert_eq!(t.to_string(), "TNTTN");
        assert_eq!(t.len(), 5);
        assert_eq!(t.taken_count(), 3);
        assert!(matches!(
            "TNX".parse::<BranchTrace>(),
            Err(Error::BadTraceChar('X'))
        ));
    }

    #[test]
    fn dot_output_mentions_labels() {
        let cmp = ComparisonTransducer::build(&pat("ab"), &ab(), Variant::Kmp).unwrap();
        let dot = cmp.to_dot();
        assert!(dot.contains("digraph comparison_transducer"));
        assert!(dot.contains("a:N"));
        assert!(dot.contains("ε"));
        let auto_dot = cmp.automaton().to_dot();
        assert!(auto_dot.contains("style=bold")); // accepting edge marked
    }
}
