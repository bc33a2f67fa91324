//! Alphabets, memoryless symbol distributions, patterns, and reproducible
//! random-text generation.
//!
//! Everything here is immutable after construction. Sampling takes an
//! explicit seed, so there is no hidden generator state; two calls with the
//! same arguments produce the same text on every platform.

use crate::error::{Error, Result};
use crate::tolerance;

/// An ordered set of at least two distinct single-character symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(symbols: &str) -> Result<Self> {
        let symbols: Vec<char> = symbols.chars().collect();
        if symbols.len() < 2 {
            return Err(Error::AlphabetTooSmall(symbols.len()));
        }
        for (i, &c) in symbols.iter().enumerate() {
            if symbols[..i].contains(&c) {
                return Err(Error::DuplicateSymbol(c));
            }
        }
        Ok(Self { symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction requires two symbols
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn symbol(&self, index: usize) -> char {
        self.symbols[index]
    }

    pub fn index_of(&self, symbol: char) -> Result<usize> {
        self.symbols
            .iter()
            .position(|&c| c == symbol)
            .ok_or(Error::SymbolNotInAlphabet(symbol))
    }

    pub fn contains(&self, symbol: char) -> bool {
        self.symbols.contains(&symbol)
    }

    /// The alphabet as a plain string, in symbol order.
    pub fn as_string(&self) -> String {
        self.symbols.iter().collect()
    }
}

/// A memoryless source: one probability per alphabet symbol, each strictly
/// inside (0, 1), summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolDistribution {
    alphabet: Alphabet,
    probs: Vec<f64>,
}

impl SymbolDistribution {
    pub fn new(alphabet: Alphabet, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != alphabet.len() {
            return Err(Error::ProbabilityCount {
                expected: alphabet.len(),
                got: probs.len(),
            });
        }
        for &p in &probs {
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::ProbabilityOutOfRange(p));
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > tolerance::INPUT_PROBABILITY_SUM {
            return Err(Error::ProbabilitySum(sum));
        }
        Ok(Self { alphabet, probs })
    }

    pub fn uniform(alphabet: Alphabet) -> Self {
        let p = 1.0 / alphabet.len() as f64;
        let probs = vec![p; alphabet.len()];
        Self { alphabet, probs }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Probability of the symbol at `index` in the alphabet order.
    pub fn prob(&self, index: usize) -> f64 {
        self.probs[index]
    }

    pub fn prob_of(&self, symbol: char) -> Result<f64> {
        Ok(self.probs[self.alphabet.index_of(symbol)?])
    }

    /// Product of per-symbol probabilities; the empty word has probability 1.
    pub fn word_probability(&self, word: &str) -> Result<f64> {
        let mut p = 1.0;
        for c in word.chars() {
            p *= self.prob_of(c)?;
        }
        Ok(p)
    }

    /// Draws `n` independent symbols. The generator is SplitMix64 seeded
    /// with `seed`; callers running several trials should use
    /// `master_seed + t` for trial `t` so streams never overlap by
    /// convention.
    pub fn sample_text(&self, n: usize, seed: u64) -> String {
        let mut rng = SplitMix64::new(seed);
        let mut out = String::with_capacity(n);
        for _ in 0..n {
            let u = rng.next_f64();
            out.push(self.alphabet.symbol(self.pick(u)));
        }
        out
    }

    fn pick(&self, u: f64) -> usize {
        let mut acc = 0.0;
        for (i, &p) in self.probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return i;
            }
        }
        self.probs.len() - 1
    }
}

/// A nonempty word over some alphabet. Membership in a concrete alphabet is
/// checked by the operations that pair a pattern with a distribution or an
/// automaton, since the same pattern may be analyzed over alphabets of
/// different sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    symbols: Vec<char>,
    text: String,
}

impl Pattern {
    pub fn new(text: &str) -> Result<Self> {
        let symbols: Vec<char> = text.chars().collect();
        if symbols.is_empty() {
            return Err(Error::EmptyPattern);
        }
        Ok(Self {
            symbols,
            text: text.to_string(),
        })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty patterns
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    /// True when the pattern is a power of a single letter.
    pub fn is_single_letter(&self) -> bool {
        self.symbols.iter().all(|&c| c == self.symbols[0])
    }

    /// Checks that every pattern symbol belongs to `alphabet`.
    pub fn check_alphabet(&self, alphabet: &Alphabet) -> Result<()> {
        for &c in &self.symbols {
            if !alphabet.contains(c) {
                return Err(Error::SymbolNotInAlphabet(c));
            }
        }
        Ok(())
    }
}

impl std::fmt::Display for Pattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.text)
    }
}

/// SplitMix64 (Steele, Lea & Flood's mix of Stafford's MurmurHash3
/// finalizer). Fixed algorithm, 64-bit state, bit-identical everywhere.
#[derive(Debug, Clone)]
pub(crate) struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub(crate) fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub(crate) fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1) with 53 random bits.
    pub(crate) fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in 0..bound (bound > 0), by rejection-free modulo; bias is
    /// negligible for the small bounds used in randomized tests.
    pub(crate) fn next_below(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound as u64) as usize
    }
}
