//! Borders and the MP/KMP failure tables consumed by the matcher.
//!
//! A border of a word is a strict prefix that is also a strict suffix. The
//! MP table maps each pattern prefix to its longest border; the KMP table
//! refines it by skipping borders whose extension by the next pattern
//! letter would fail again immediately. Missing borders are encoded as -1.

use crate::error::{Error, Result};
use crate::text::Pattern;
use serde::{Deserialize, Serialize};

/// Which failure function the matcher uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Mp,
    Kmp,
}

impl Variant {
    pub const BOTH: [Variant; 2] = [Variant::Mp, Variant::Kmp];
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Variant::Mp => "mp",
            Variant::Kmp => "kmp",
        })
    }
}

impl std::str::FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "mp" => Ok(Variant::Mp),
            "kmp" => Ok(Variant::Kmp),
            other => Err(format!("unknown variant {other:?} (expected mp or kmp)")),
        }
    }
}

/// Length of the longest border of `word`; 0 when only the empty word
/// qualifies. Errors on the empty word, which has no strict prefix at all.
pub fn longest_border(word: &[char]) -> Result<usize> {
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    // classic prefix-function chain over growing prefixes
    let table = border_lengths(word);
    Ok(table[word.len()])
}

/// `result[i]` = longest border length of the prefix of length `i`
/// (`result[0] = 0` by convention; the empty word is handled by callers).
fn border_lengths(word: &[char]) -> Vec<usize> {
    let n = word.len();
    let mut b = vec![0usize; n + 1];
    for i in 1..n {
        let mut k = b[i];
        while k > 0 && word[k] != word[i] {
            k = b[k];
        }
        if word[k] == word[i] {
            k += 1;
        }
        b[i + 1] = k;
    }
    b
}

/// The precomputed integer table `B` driving the matcher: `entries[i]` is
/// the length of the failure target for the prefix of length `i`, with the
/// missing value encoded as -1. Indices run from 0 to the pattern length
/// inclusive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailureTable {
    variant: Variant,
    entries: Vec<i64>,
}

impl FailureTable {
    /// MP table: `entries[i]` is the longest border of the length-`i`
    /// prefix for `i >= 1`, and -1 at index 0.
    pub fn mp(pattern: &Pattern) -> Self {
        let b = border_lengths(pattern.symbols());
        let mut entries = vec![-1i64];
        entries.extend((1..=pattern.len()).map(|i| b[i] as i64));
        Self {
            variant: Variant::Mp,
            entries,
        }
    }

    /// KMP table: for each strict prefix `u` followed in the pattern by the
    /// letter `a`, the longest border `v` of `u` such that `va` is not a
    /// pattern prefix (-1 when none qualifies); the final entry equals the
    /// MP value.
    pub fn kmp(pattern: &Pattern) -> Self {
        let x = pattern.symbols();
        let m = pattern.len();
        let b = border_lengths(x);
        let mut entries = vec![-1i64; m + 1];
        for i in 1..m {
            // walk the border chain of the length-i prefix, longest first
            let mut k = b[i];
            entries[i] = loop {
                if x[k] != x[i] {
                    break k as i64;
                }
                if k == 0 {
                    break -1;
                }
                k = b[k];
            };
        }
        entries[m] = b[m] as i64;
        Self {
            variant: Variant::Kmp,
            entries,
        }
    }

    pub fn build(pattern: &Pattern, variant: Variant) -> Self {
        match variant {
            Variant::Mp => Self::mp(pattern),
            Variant::Kmp => Self::kmp(pattern),
        }
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> i64 {
        self.entries[i]
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false // always has at least entries for indices 0 and 1
    }

    /// Test hook: returns a copy with one entry replaced. The replacement
    /// must stay in the legal range [-1, i) so the matcher still
    /// terminates; used to demonstrate that the verification suites catch
    /// corrupted tables.
    pub fn with_corrupted_entry(&self) -> Self {
        let mut entries = self.entries.clone();
        for (i, entry) in entries.iter_mut().enumerate().skip(1) {
            let wrong = if *entry == -1 { 0 } else { *entry - 1 };
            if wrong < i as i64 {
                *entry = wrong;
                break;
            }
        }
        Self {
            variant: self.variant,
            entries,
        }
    }
}
