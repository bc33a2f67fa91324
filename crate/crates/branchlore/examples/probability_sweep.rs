//! Per-branch rates as a function of the source skew, as CSV on stdout.
//!
//! Usage: cargo run --example probability_sweep [PATTERN]
//! (default aaab; pipe the output into any plotter)

use branchlore::analysis::analyze;
use branchlore::borders::Variant;
use branchlore::text::{Alphabet, Pattern, SymbolDistribution};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let pattern_text = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "aaab".to_string());
    let pattern = Pattern::new(&pattern_text)?;
    let alphabet = Alphabet::new("ab")?;

    println!("p,variant,counter,guard,comparison,total");
    for step in 1..=99 {
        let p = step as f64 / 100.0;
        let dist = SymbolDistribution::new(alphabet.clone(), vec![p, 1.0 - p])?;
        for variant in Variant::BOTH {
            let r = analyze(&pattern, &dist, variant)?;
            println!(
                "{p},{variant},{:.12},{:.12},{:.12},{:.12}",
                r.rates.counter, r.rates.guard, r.rates.comparison, r.rates.total
            );
        }
    }
    Ok(())
}
