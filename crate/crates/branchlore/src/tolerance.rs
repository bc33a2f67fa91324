//! Numeric tolerances used across the crate, in one place.

/// Validation slack for user-supplied probability vectors: the sum must be
/// within this distance of 1. Wide enough to absorb decimal input like
/// `0.1,0.2,0.7`, far tighter than any rate the crate reports.
pub const INPUT_PROBABILITY_SUM: f64 = 1e-9;

/// Internal identities (row sums of stochastic matrices, stationarity
/// residuals, probability mass checks). These are exact up to f64
/// rounding, so the budget is a few hundred ulps.
pub const IDENTITY: f64 = 1e-12;
