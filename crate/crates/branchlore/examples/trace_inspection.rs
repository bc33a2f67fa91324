//! Watch the matcher's four branches on a concrete input, and check the
//! comparison/guard traces against the transducer route.
//!
//! Usage: cargo run --example trace_inspection [PATTERN] [TEXT]

use branchlore::automata::{build_guard_transducer, ComparisonTransducer};
use branchlore::borders::{FailureTable, Variant};
use branchlore::predictor::PredictorState;
use branchlore::simulator::{run_find, Branch};
use branchlore::text::{Alphabet, Pattern};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let pattern_text = args.next().unwrap_or_else(|| "ababb".to_string());
    let text = args.next().unwrap_or_else(|| "abaababbabb".to_string());

    let pattern = Pattern::new(&pattern_text)?;
    let mut symbols: Vec<char> = pattern_text.chars().chain(text.chars()).collect();
    symbols.sort_unstable();
    symbols.dedup();
    let alphabet = Alphabet::new(&symbols.iter().collect::<String>())?;

    println!("pattern {pattern_text}, text {text:?}\n");
    println!("mp  table: {:?}", FailureTable::mp(&pattern).entries());
    println!("kmp table: {:?}\n", FailureTable::kmp(&pattern).entries());

    for variant in Variant::BOTH {
        let run = run_find(&pattern, &text, variant);
        println!(
            "{variant}: {} occurrence(s), {} letter comparisons",
            run.occurrences, run.comparisons
        );
        for branch in Branch::ALL {
            let trace = run.trace(branch);
            let (_, misses) = PredictorState::strongly_not_taken().run(trace);
            println!(
                "  {:<11} {:<24} {} misprediction(s) from snt",
                branch.name(),
                trace.to_string(),
                misses
            );
        }
        // the transducers replay the comparison and guard branches exactly
        let cmp = ComparisonTransducer::build(&pattern, &alphabet, variant)?;
        let (_, cmp_trace) = cmp.transduce(&text)?;
        let (_, guard_trace) = build_guard_transducer(&cmp).transduce(&text)?;
        assert_eq!(run.trace(Branch::Comparison), &cmp_trace);
        assert_eq!(run.trace(Branch::Guard), &guard_trace);
        println!("  transducer outputs match both traces exactly\n");
    }
    Ok(())
}
