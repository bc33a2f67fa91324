//! Dump the machines behind the analysis as Graphviz DOT.
//!
//! Usage: cargo run --example emit_dot [PATTERN] | dot -Tsvg > machines.svg

use branchlore::analysis::build_predictor_product;
use branchlore::automata::{build_guard_transducer, ComparisonTransducer};
use branchlore::borders::Variant;
use branchlore::text::{Alphabet, Pattern, SymbolDistribution};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let pattern_text = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "ababb".to_string());
    let pattern = Pattern::new(&pattern_text)?;
    let alphabet = Alphabet::new("ab")?;
    let dist = SymbolDistribution::uniform(alphabet.clone());

    let cmp = ComparisonTransducer::build(&pattern, &alphabet, Variant::Kmp)?;
    print!("{}", cmp.automaton().to_dot());
    print!("{}", cmp.to_dot());
    print!("{}", build_guard_transducer(&cmp).to_dot());
    print!(
        "{}",
        build_predictor_product(&pattern, &dist, Variant::Kmp)?.to_dot()
    );
    Ok(())
}
