//! Command-line front end: `analyze`, `simulate`, `sweep` and `verify`.
//!
//! Exit codes: 0 on success, 1 when verification finds a failure, 2 on
//! usage or validation errors. All numeric output is serialized with 12
//! significant digits and a dot decimal separator, so identical
//! invocations produce byte-identical output.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::analysis::{self, MispredictionReport};
use crate::automata::{build_guard_transducer, ComparisonTransducer};
use crate::borders::Variant;
use crate::predictor::PredictorState;
use crate::simulator::{self, Branch};
use crate::text::{Alphabet, Pattern, SymbolDistribution};
use crate::verify::{self, VerifyOptions};

/// Environment variable capping worker threads for Monte Carlo trials
/// (0 or unset means one worker per available CPU).
pub const THREADS_ENV: &str = "BRANCHLORE_THREADS";

#[derive(Parser)]
#[command(
    name = "branchlore",
    version,
    about = "Branch misprediction rates for MP/KMP pattern matching on random text"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the analytic misprediction report as JSON
    Analyze(AnalyzeArgs),
    /// Compare analytic rates against a seeded Monte Carlo simulation
    Simulate(SimulateArgs),
    /// Emit per-branch rates as CSV over a grid of symbol probabilities
    Sweep(SweepArgs),
    /// Run the self-check suites
    Verify(VerifyArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Mp,
    Kmp,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Mp => Variant::Mp,
            VariantArg::Kmp => Variant::Kmp,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum VariantChoice {
    Mp,
    Kmp,
    Both,
}

impl VariantChoice {
    fn variants(self) -> Vec<Variant> {
        match self {
            VariantChoice::Mp => vec![Variant::Mp],
            VariantChoice::Kmp => vec![Variant::Kmp],
            VariantChoice::Both => vec![Variant::Mp, Variant::Kmp],
        }
    }
}

#[derive(Args)]
struct InputArgs {
    /// Pattern to search for
    #[arg(long)]
    pattern: String,
    /// Alphabet as a string of distinct symbols
    #[arg(long, default_value = "ab")]
    alphabet: String,
    /// Comma-separated per-symbol probabilities (same order as --alphabet)
    #[arg(long, value_delimiter = ',', conflicts_with = "uniform")]
    probs: Option<Vec<f64>>,
    /// Use the uniform distribution over the alphabet
    #[arg(long)]
    uniform: bool,
}

impl InputArgs {
    fn build(&self) -> Result<(Pattern, SymbolDistribution), String> {
        let alphabet = Alphabet::new(&self.alphabet).map_err(|e| e.to_string())?;
        let dist = match (&self.probs, self.uniform) {
            (Some(probs), _) => {
                SymbolDistribution::new(alphabet, probs.clone()).map_err(|e| e.to_string())?
            }
            (None, true) => SymbolDistribution::uniform(alphabet),
            (None, false) => {
                return Err("specify either --probs or --uniform".to_string());
            }
        };
        let pattern = Pattern::new(&self.pattern).map_err(|e| e.to_string())?;
        pattern
            .check_alphabet(dist.alphabet())
            .map_err(|e| e.to_string())?;
        Ok((pattern, dist))
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Failure function variant
    #[arg(long, value_enum)]
    variant: VariantArg,
    /// Dump the automaton, transducers and predictor product as DOT
    /// graphs instead of the JSON report
    #[arg(long)]
    emit_dot: bool,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum)]
    variant: VariantArg,
    /// Length of each sampled text
    #[arg(long)]
    text_len: usize,
    /// Number of independent trials (trial t uses seed = seed + t)
    #[arg(long, default_value_t = 1)]
    trials: usize,
    /// Master seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Initial predictor state per branch, e.g. --init-state guard=st
    /// (branches: mainloop, guard, comparison, counter; states: snt, wnt,
    /// wt, st). Defaults to snt everywhere.
    #[arg(long = "init-state", value_name = "BRANCH=STATE")]
    init_state: Vec<String>,
}

#[derive(Args)]
struct SweepArgs {
    /// Pattern to sweep
    #[arg(long)]
    pattern: String,
    /// Binary alphabet to sweep over (exactly two symbols)
    #[arg(long, default_value = "ab")]
    alphabet: String,
    /// Grid start:stop:step over the first symbol's probability,
    /// e.g. 0.01:0.99:0.01; all points must lie strictly inside (0,1)
    #[arg(long, conflicts_with = "probs")]
    grid: Option<String>,
    /// A single explicit probability vector instead of a grid
    #[arg(long, value_delimiter = ',')]
    probs: Option<Vec<f64>>,
    /// Which variants to emit rows for
    #[arg(long, value_enum, default_value_t = VariantChoice::Both)]
    variant: VariantChoice,
}

#[derive(Args)]
struct VerifyArgs {
    /// Exhaustive trace equivalence covers binary patterns up to this length
    #[arg(long, default_value_t = 4)]
    max_pattern_len: usize,
    /// Number of randomized trace-equivalence trials
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Corrupt a failure table to demonstrate fault detection
    #[arg(long, value_enum, hide = true)]
    inject_fault: Option<VariantArg>,
}

/// Rounds to 12 significant digits so serialized output is stable and
/// readable.
fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}")
        .parse()
        .expect("round-trip of finite float")
}

/// CSV cell with 12 significant digits, dot decimal separator.
fn csv_cell(x: f64) -> String {
    format!("{}", sig12(x))
}

fn rounded_report_json(report: &MispredictionReport) -> serde_json::Value {
    json!({
        "pattern": report.pattern,
        "alphabet": report.alphabet,
        "probs": report.probs.iter().map(|&p| sig12(p)).collect::<Vec<_>>(),
        "variant": report.variant,
        "rates": {
            "counter": sig12(report.rates.counter),
            "guard": sig12(report.rates.guard),
            "comparison": sig12(report.rates.comparison),
            "total": sig12(report.rates.total),
        },
        "expected_comparisons": sig12(report.expected_comparisons),
        "mainloop_bound": report.mainloop_bound,
    })
}

fn cmd_analyze(args: &AnalyzeArgs, out: &mut dyn Write) -> Result<(), String> {
    let (pattern, dist) = args.input.build()?;
    let variant = Variant::from(args.variant);
    if args.emit_dot {
        let cmp = ComparisonTransducer::build(&pattern, dist.alphabet(), variant)
            .map_err(|e| e.to_string())?;
        let product = analysis::build_predictor_product(&pattern, &dist, variant)
            .map_err(|e| e.to_string())?;
        let text = format!(
            "{}{}{}{}",
            cmp.automaton().to_dot(),
            cmp.to_dot(),
            build_guard_transducer(&cmp).to_dot(),
            product.to_dot()
        );
        write!(out, "{text}").map_err(|e| e.to_string())?;
        return Ok(());
    }
    let report = analysis::analyze(&pattern, &dist, variant).map_err(|e| e.to_string())?;
    let value = rounded_report_json(&report);
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(&value).expect("serializable")
    )
    .map_err(|e| e.to_string())?;
    Ok(())
}

fn parse_init_states(specs: &[String]) -> Result<[PredictorState; 4], String> {
    let mut states = simulator::default_initial_states();
    for spec in specs {
        let (branch, state) = spec
            .split_once('=')
            .ok_or_else(|| format!("bad --init-state {spec:?}, expected BRANCH=STATE"))?;
        let state = PredictorState::parse_two_bit(state.trim())?;
        let index = match branch.trim().to_ascii_lowercase().as_str() {
            "mainloop" => Branch::MainLoop,
            "guard" => Branch::Guard,
            "comparison" => Branch::Comparison,
            "counter" => Branch::Counter,
            other => return Err(format!("unknown branch {other:?}")),
        }
        .index();
        states[index] = state;
    }
    Ok(states)
}

fn worker_threads() -> usize {
    let configured = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(0);
    if configured > 0 {
        configured
    } else {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    }
}

fn cmd_simulate(args: &SimulateArgs, out: &mut dyn Write) -> Result<(), String> {
    let (pattern, dist) = args.input.build()?;
    let variant = Variant::from(args.variant);
    let initial = parse_init_states(&args.init_state)?;
    let report = analysis::analyze(&pattern, &dist, variant).map_err(|e| e.to_string())?;
    let empirical = simulator::monte_carlo(
        &pattern,
        &dist,
        variant,
        args.text_len,
        args.trials,
        args.seed,
        &initial,
        worker_threads(),
    )
    .map_err(|e| e.to_string())?;

    let branch_json = |branch: Branch, analytic: f64| {
        let stats = empirical.branch(branch);
        json!({
            "analytic": sig12(analytic),
            "empirical_mean": sig12(stats.mean_rate),
            "stderr": sig12(stats.stderr_rate),
            "abs_diff": sig12((stats.mean_rate - analytic).abs()),
        })
    };
    let mainloop = empirical.branch(Branch::MainLoop);
    let value = json!({
        "pattern": report.pattern,
        "alphabet": report.alphabet,
        "probs": report.probs.iter().map(|&p| sig12(p)).collect::<Vec<_>>(),
        "variant": report.variant,
        "text_len": args.text_len,
        "trials": args.trials,
        "seed": args.seed,
        "seeds": empirical.seeds,
        "init_states": {
            "mainloop": initial[Branch::MainLoop.index()].short_name(),
            "guard": initial[Branch::Guard.index()].short_name(),
            "comparison": initial[Branch::Comparison.index()].short_name(),
            "counter": initial[Branch::Counter.index()].short_name(),
        },
        "branches": {
            "counter": branch_json(Branch::Counter, report.rates.counter),
            "guard": branch_json(Branch::Guard, report.rates.guard),
            "comparison": branch_json(Branch::Comparison, report.rates.comparison),
            "total": {
                "analytic": sig12(report.rates.total),
                "empirical_mean": sig12(empirical.total_rate),
                "stderr": sig12(empirical.total_stderr),
                "abs_diff": sig12((empirical.total_rate - report.rates.total).abs()),
            },
            "mainloop": {
                "bound": analysis::MAINLOOP_MISPREDICTION_BOUND,
                "max_count": mainloop.max_count,
                "mean_count": sig12(mainloop.mean_count),
            },
        },
        "expected_comparisons": {
            "analytic": sig12(report.expected_comparisons),
            "empirical_mean": sig12(empirical.comparison_evals_rate),
        },
    });
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(&value).expect("serializable")
    )
    .map_err(|e| e.to_string())?;
    Ok(())
}

fn parse_grid(spec: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("bad --grid {spec:?}, expected start:stop:step"));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|s| {
            s.parse::<f64>()
                .map_err(|e| format!("bad --grid number {s:?}: {e}"))
        })
        .collect::<Result<_, _>>()?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if step <= 0.0 || stop < start {
        return Err(format!(
            "bad --grid {spec:?}: need start <= stop and step > 0"
        ));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize;
    let points: Vec<f64> = (0..=count).map(|i| start + i as f64 * step).collect();
    for &p in &points {
        if !(p > 0.0 && p < 1.0) {
            return Err(format!(
                "grid point {p} is outside the open interval (0, 1)"
            ));
        }
    }
    Ok(points)
}

fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write) -> Result<(), String> {
    let alphabet = Alphabet::new(&args.alphabet).map_err(|e| e.to_string())?;
    let pattern = Pattern::new(&args.pattern).map_err(|e| e.to_string())?;
    pattern
        .check_alphabet(&alphabet)
        .map_err(|e| e.to_string())?;

    let prob_vectors: Vec<Vec<f64>> = match (&args.grid, &args.probs) {
        (Some(grid), None) => {
            if alphabet.len() != 2 {
                return Err("--grid sweeps require a binary alphabet".to_string());
            }
            parse_grid(grid)?
                .into_iter()
                .map(|p| vec![p, 1.0 - p])
                .collect()
        }
        (None, Some(probs)) => vec![probs.clone()],
        (None, None) => return Err("specify either --grid or --probs".to_string()),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };

    let mut text = String::from("p,variant,counter,guard,comparison,total\n");
    for probs in prob_vectors {
        let dist = SymbolDistribution::new(alphabet.clone(), probs).map_err(|e| e.to_string())?;
        for variant in args.variant.variants() {
            let report = analysis::analyze(&pattern, &dist, variant).map_err(|e| e.to_string())?;
            text.push_str(&format!(
                "{},{},{},{},{},{}\n",
                csv_cell(dist.prob(0)),
                variant,
                csv_cell(report.rates.counter),
                csv_cell(report.rates.guard),
                csv_cell(report.rates.comparison),
                csv_cell(report.rates.total),
            ));
        }
    }
    write!(out, "{text}").map_err(|e| e.to_string())?;
    Ok(())
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<bool, String> {
    let options = VerifyOptions {
        max_pattern_len: args.max_pattern_len,
        random_trials: args.trials,
        fault: args.inject_fault.map(Variant::from),
    };
    let results = verify::run_all(&options);
    let mut all_passed = true;
    for r in &results {
        let status = if r.passed { "pass" } else { "FAIL" };
        writeln!(out, "{}: {} ({})", r.name, status, r.detail).map_err(|e| e.to_string())?;
        all_passed &= r.passed;
    }
    writeln!(
        out,
        "{}",
        if all_passed {
            "all suites passed"
        } else {
            "verification failed"
        }
    )
    .map_err(|e| e.to_string())?;
    Ok(all_passed)
}

/// Runs the CLI against explicit arguments and streams; returns the exit
/// code. `args` must include the program name.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // help and version requests are successes going to stdout
            let is_help = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            if is_help {
                let _ = write!(out, "{e}");
                return 0;
            }
            let _ = write!(err, "{e}");
            return 2;
        }
    };
    let outcome = match &cli.command {
        Command::Analyze(args) => cmd_analyze(args, out).map(|()| 0),
        Command::Simulate(args) => cmd_simulate(args, out).map(|()| 0),
        Command::Sweep(args) => cmd_sweep(args, out).map(|()| 0),
        Command::Verify(args) => cmd_verify(args, out).map(|ok| if ok { 0 } else { 1 }),
    };
    match outcome {
        Ok(code) => code,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            2
        }
    }
}

/// Entry point for the binary.
pub fn main_entry() -> i32 {
    let mut out = std::io::stdout();
    let mut err = std::io::stderr();
    run(std::env::args_os(), &mut out, &mut err)
}
