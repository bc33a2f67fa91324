//! Rate table for all normalized patterns of length 2 and 3 over uniform
//! alphabets of size 2 and 4, MP vs KMP side by side.
//!
//! The guard and counter branches do not depend on the failure function;
//! the comparison branch is where KMP's refined table pays off (or, for
//! some patterns, makes no difference at all).

use branchlore::analysis::analyze;
use branchlore::borders::{FailureTable, Variant};
use branchlore::text::{Alphabet, Pattern, SymbolDistribution};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let patterns = ["aa", "ab", "aaa", "aab", "aba", "abb"];
    for alphabet_text in ["ab", "abcd"] {
        let alphabet = Alphabet::new(alphabet_text)?;
        let dist = SymbolDistribution::uniform(alphabet);
        println!("uniform source over {{{alphabet_text}}}");
        println!(
            "{:>8} {:>5} {:>9} {:>9} {:>11} {:>9}",
            "pattern", "algo", "counter", "guard", "comparison", "total"
        );
        for pattern_text in patterns {
            let pattern = Pattern::new(pattern_text)?;
            let same_table =
                FailureTable::mp(&pattern).entries() == FailureTable::kmp(&pattern).entries();
            for variant in Variant::BOTH {
                let r = analyze(&pattern, &dist, variant)?;
                let tag = if same_table {
                    "both"
                } else {
                    &variant.to_string()
                };
                println!(
                    "{:>8} {:>5} {:>9.3} {:>9.3} {:>11.3} {:>9.3}",
                    pattern_text,
                    tag,
                    r.rates.counter,
                    r.rates.guard,
                    r.rates.comparison,
                    r.rates.total
                );
                if same_table {
                    break; // identical failure tables, identical behavior
                }
            }
        }
        println!();
    }
    Ok(())
}
