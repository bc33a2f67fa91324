//! Analytic rates against a seeded Monte Carlo simulation of the matcher.
//!
//! Every trial samples its own text (trial t uses seed master + t), runs
//! the instrumented matcher and feeds each branch's outcome sequence to
//! its own 2-bit predictor. The empirical means land within a few
//! standard errors of the analytic values.

use branchlore::analysis::analyze;
use branchlore::borders::Variant;
use branchlore::simulator::{default_initial_states, monte_carlo, Branch};
use branchlore::text::{Alphabet, Pattern, SymbolDistribution};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let pattern = Pattern::new("aba")?;
    let dist = SymbolDistribution::uniform(Alphabet::new("ab")?);
    let n = 100_000;
    let trials = 20;

    for variant in Variant::BOTH {
        let report = analyze(&pattern, &dist, variant)?;
        let empirical = monte_carlo(
            &pattern,
            &dist,
            variant,
            n,
            trials,
            42,
            &default_initial_states(),
            4,
        )?;
        println!("pattern aba, uniform {{a,b}}, {variant}: {trials} trials at n = {n}");
        println!(
            "{:>12} {:>12} {:>12} {:>10} {:>10}",
            "branch", "analytic", "empirical", "stderr", "|diff|"
        );
        for (branch, analytic) in [
            (Branch::Counter, report.rates.counter),
            (Branch::Guard, report.rates.guard),
            (Branch::Comparison, report.rates.comparison),
        ] {
            let stats = empirical.branch(branch);
            println!(
                "{:>12} {:>12.6} {:>12.6} {:>10.6} {:>10.6}",
                branch.name(),
                analytic,
                stats.mean_rate,
                stats.stderr_rate,
                (stats.mean_rate - analytic).abs()
            );
        }
        println!(
            "{:>12} {:>12.6} {:>12.6} {:>10.6} {:>10.6}",
            "total",
            report.rates.total,
            empirical.total_rate,
            empirical.total_stderr,
            (empirical.total_rate - report.rates.total).abs()
        );
        println!(
            "{:>12} worst trial paid {} mispredictions (bound {})\n",
            "mainloop",
            empirical.branch(Branch::MainLoop).max_count,
            report.mainloop_bound
        );
    }
    Ok(())
}
