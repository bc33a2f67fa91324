//! Step the saturating counters through a branch-outcome word by hand,
//! showing where 2 bits beat 1 bit.

use branchlore::automata::BranchTrace;
use branchlore::predictor::PredictorState;

fn walk(label: &str, mut state: PredictorState, trace: &BranchTrace) {
    print!("{label}: {state}");
    let mut misses = 0;
    for outcome in trace.iter() {
        let (next, miss) = state.step(outcome);
        print!(
            " -{}-> {}{}",
            outcome.as_char(),
            next,
            if miss { "*" } else { "" }
        );
        misses += u32::from(miss);
        state = next;
    }
    println!("   ({misses} mispredictions, * marks them)");
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // a branch that is mostly taken, with isolated not-taken outcomes
    let trace: BranchTrace = "TTTNTTTNTT".parse()?;
    println!("outcome word {trace}:\n");
    walk("2-bit", PredictorState::weakly_not_taken(), &trace);
    walk("1-bit", PredictorState::new(1, 0)?, &trace);
    println!(
        "\nthe 2-bit counter needs two consecutive deviations before its\n\
         prediction flips, so isolated N's cost it one miss each; the 1-bit\n\
         counter pays twice per deviation."
    );
    Ok(())
}
