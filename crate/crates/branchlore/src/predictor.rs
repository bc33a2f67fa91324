//! Local k-bit saturating-counter branch predictors.
//!
//! A k-bit counter holds a value in `0..2^k` and predicts "taken" in the
//! upper half of its range. Every observed outcome nudges the value one
//! step toward the matching end, clamped at the extremes. A misprediction
//! is an outcome that disagrees with the current prediction.

use crate::automata::{BranchOutcome, BranchTrace};
use crate::error::{Error, Result};

/// State of a k-bit saturating counter, k in {1, 2}. All analysis uses the
/// 2-bit counter; the 1-bit flavor exists for experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PredictorState {
    bits: u8,
    value: u8,
}

/// 2-bit states in value order: strongly not-taken, weakly not-taken,
/// weakly taken, strongly taken.
pub const TWO_BIT_STATES: [PredictorState; 4] = [
    PredictorState { bits: 2, value: 0 },
    PredictorState { bits: 2, value: 1 },
    PredictorState { bits: 2, value: 2 },
    PredictorState { bits: 2, value: 3 },
];

impl PredictorState {
    pub fn new(bits: u8, value: u8) -> Result<Self> {
        if bits == 0 || bits > 2 {
            return Err(Error::BadPredictorWidth(bits));
        }
        if value >= 1 << bits {
            return Err(Error::BadPredictorValue { bits, value });
        }
        Ok(Self { bits, value })
    }

    /// 2-bit counter at its "strongly not taken" end, the default initial
    /// state for simulations. The asymptotic rates do not depend on this
    /// choice, which is why it is configurable rather than fixed.
    pub fn strongly_not_taken() -> Self {
        TWO_BIT_STATES[0]
    }

    pub fn weakly_not_taken() -> Self {
        TWO_BIT_STATES[1]
    }

    pub fn weakly_taken() -> Self {
        TWO_BIT_STATES[2]
    }

    pub fn strongly_taken() -> Self {
        TWO_BIT_STATES[3]
    }

    pub fn bits(&self) -> u8 {
        self.bits
    }

    pub fn value(&self) -> u8 {
        self.value
    }

    pub fn predicts_taken(&self) -> bool {
        self.value >= 1 << (self.bits - 1)
    }

    /// One outcome: saturating move plus whether it was mispredicted.
    pub fn step(self, outcome: BranchOutcome) -> (Self, bool) {
        let top = (1 << self.bits) - 1;
        let (value, mispredicted) = match outcome {
            BranchOutcome::Taken => ((self.value + 1).min(top), !self.predicts_taken()),
            BranchOutcome::NotTaken => (self.value.saturating_sub(1), self.predicts_taken()),
        };
        (
            Self {
                bits: self.bits,
                value,
            },
            mispredicted,
        )
    }

    /// Folds a whole trace; returns the final state and the misprediction
    /// count.
    pub fn run(self, trace: &BranchTrace) -> (Self, u64) {
        let mut state = self;
        let mut mispredictions = 0;
        for outcome in trace.iter() {
            let (next, miss) = state.step(outcome);
            state = next;
            mispredictions += u64::from(miss);
        }
        (state, mispredictions)
    }

    /// Short display name, e.g. `snt` / `wnt` / `wt` / `st` for 2-bit.
    pub fn short_name(&self) -> &'static str {
        match (self.bits, self.value) {
            (1, 0) => "nt",
            (1, 1) => "t",
            (2, 0) => "snt",
            (2, 1) => "wnt",
            (2, 2) => "wt",
            _ => "st",
        }
    }

    /// Parses the 2-bit state names accepted on the command line.
    pub fn parse_two_bit(name: &str) -> std::result::Result<Self, String> {
        match name.to_ascii_lowercase().as_str() {
            "snt" | "strongly-not-taken" => Ok(Self::strongly_not_taken()),
            "wnt" | "weakly-not-taken" => Ok(Self::weakly_not_taken()),
            "wt" | "weakly-taken" => Ok(Self::weakly_taken()),
            "st" | "strongly-taken" => Ok(Self::strongly_taken()),
            other => Err(format!(
                "unknown predictor state {other:?} (expected snt, wnt, wt or st)"
            )),
        }
    }
}

impl std::fmt::Display for PredictorState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.short_name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::BranchTrace;

    fn trace(s: &str) -> BranchTrace {
        s.parse().unwrap()
    }

    #[test]
    fn construction_bounds() {
        assert!(PredictorState::new(2, 3).is_ok());
        assert_eq!(
            PredictorState::new(3, 0).unwrap_err(),
            Error::BadPredictorWidth(3)
        );
        assert_eq!(
            PredictorState::new(2, 4).unwrap_err(),
            Error::BadPredictorValue { bits: 2, value: 4 }
        );
    }

    #[test]
    fn single_steps() {
        // weakly not-taken sees a taken branch: misprediction, move right
        let (s, miss) = PredictorState::weakly_not_taken().step(BranchOutcome::Taken);
        assert_eq!(s, PredictorState::weakly_taken());
        assert!(miss);
        // saturated left end stays put and predicts correctly
        let (s, miss) = PredictorState::strongly_not_taken().step(BranchOutcome::NotTaken);
        assert_eq!(s, PredictorState::strongly_not_taken());
        assert!(!miss);
        // strongly taken sees not-taken: misprediction, weaken
        let (s, miss) = PredictorState::strongly_taken().step(BranchOutcome::NotTaken);
        assert_eq!(s, PredictorState::weakly_taken());
        assert!(miss);
    }

    #[test]
    fn run_examples() {
        let (state, misses) = PredictorState::weakly_not_taken().run(&trace("NNNTT"));
        assert_eq!(state, PredictorState::weakly_taken());
        assert_eq!(misses, 2);

        let (state, misses) = PredictorState::strongly_taken().run(&trace(""));
        assert_eq!(state, PredictorState::strongly_taken());
        assert_eq!(misses, 0);

        let (state, misses) = PredictorState::strongly_not_taken().run(&trace("TTTTT"));
        assert_eq!(state, PredictorState::strongly_taken());
        assert_eq!(misses, 2);
    }

    #[test]
    fn saturation_silences_repeats() {
        for bits in [1u8, 2] {
            for value in 0..1u8 << bits {
                let start = PredictorState::new(bits, value).unwrap();
                let warmup = (1usize << bits) - 1;
                for outcome in [BranchOutcome::Taken, BranchOutcome::NotTaken] {
                    let mut s = start;
                    for _ in 0..warmup {
                        s = s.step(outcome).0;
                    }
                    // saturated: same outcome never mispredicts again
                    let (next, miss) = s.step(outcome);
                    assert!(!miss);
                    assert_eq!(next, s);
                }
            }
        }
    }
}
