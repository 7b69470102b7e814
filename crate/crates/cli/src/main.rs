//! `coupon`: run, replay and sweep the mixed-state coupon collector.
//!
//! Exit codes: 0 success, 1 decode failure, 2 configuration error.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};

use coupon_core::bell::{read_records, write_records, StateSampler};
use coupon_core::decoder::decode_records;
use coupon_core::harness::{
    self, parse_sigma, run_baseline, run_experiment, ExperimentConfig, InstanceSize, SweepConfig,
    DEFAULT_MAX_ROUNDS,
};
use coupon_core::{estimate_pauli_sq, expected_draws, BellRecord, DecodeResult};

#[derive(Parser, Debug)]
#[command(name = "coupon", version, about = "Mixed-state quantum coupon collector simulator")]
struct Cli {
    /// Worker threads for parallel trials (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Prepare one instance, collect Bell rounds and decode the missing element.
    Run(RunArgs),
    /// Replay the fixed 6-round worked example.
    Example,
    /// Sweep register sizes and write per-size statistics as CSV.
    Sweep(SweepArgs),
    /// Estimate |tr(σρ)|² for a chosen Z-string from Bell rounds.
    Estimate(EstimateArgs),
    /// Classical coupon collector draw counts.
    Baseline(BaselineArgs),
    /// Decode a previously written Bell record log.
    Replay(ReplayArgs),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct SizeArgs {
    /// Number of elements; qubits = ceil(log2 n).
    #[arg(long)]
    n: Option<u64>,
    /// Number of qubits; universe of 2^b elements.
    #[arg(long = "qubits", short = 'b')]
    qubits: Option<usize>,
}

impl SizeArgs {
    fn size(&self) -> InstanceSize {
        match (self.n, self.qubits) {
            (Some(n), _) => InstanceSize::Elements(n),
            (None, Some(b)) => InstanceSize::Qubits(b),
            (None, None) => unreachable!("clap enforces the group"),
        }
    }
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    size: SizeArgs,
    /// Missing element: decimal index or `0b`-prefixed bitstring.
    #[arg(long)]
    missing: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_ROUNDS)]
    max_rounds: usize,
    /// Write the Bell record log here.
    #[arg(long)]
    records_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, default_value_t = 4)]
    b_min: usize,
    #[arg(long, default_value_t = 12)]
    b_max: usize,
    #[arg(long, default_value_t = 500)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Round budget per trial (default: b + 10).
    #[arg(long)]
    max_rounds: Option<usize>,
    /// CSV destination (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Fill the wall_time column with measured seconds.
    #[arg(long)]
    timing: bool,
}

#[derive(Args, Debug)]
struct EstimateArgs {
    #[command(flatten)]
    size: SizeArgs,
    #[arg(long)]
    missing: String,
    /// Candidate Z-string: `01110`, `0b01110` or `IZZZI`.
    #[arg(long)]
    sigma: String,
    #[arg(long, default_value_t = 10_000)]
    rounds: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct BaselineArgs {
    #[arg(long)]
    n: u64,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct ReplayArgs {
    /// Bell record log, one round per line.
    #[arg(long)]
    log: PathBuf,
}

enum Failure {
    Config(anyhow::Error),
    Decode(DecodeResult),
    Example,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Config(e)
    }
}

impl From<coupon_core::Error> for Failure {
    fn from(e: coupon_core::Error) -> Self {
        Failure::Config(e.into())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Config(e.into())
    }
}

type CmdResult = Result<(), Failure>;

fn cmd_run(args: &RunArgs, out: &mut impl Write) -> CmdResult {
    let mut cfg = ExperimentConfig::new(args.size.size(), &args.missing)?;
    cfg.seed = args.seed;
    cfg.max_rounds = args.max_rounds;
    let mut log: Vec<BellRecord> = Vec::new();
    let outcome = run_experiment(&cfg, |r| log.push(r.clone()))?;
    if let Some(path) = &args.records_out {
        let f = File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
        write_records(BufWriter::new(f), &log)?;
    }
    writeln!(out, "{}", outcome.result)?;
    writeln!(out, "encoded {} element {}", outcome.encoded, outcome.encoded.element())?;
    if let Some(p) = &outcome.result.solution {
        writeln!(out, "pauli {}", p.tensor_label())?;
    }
    writeln!(out, "rounds {}", outcome.result.rounds_used)?;
    writeln!(out, "copies {}", outcome.result.copies_used())?;
    writeln!(out, "prep_attempts {}", outcome.prep_attempts)?;
    if outcome.result.is_unique() {
        Ok(())
    } else {
        Err(Failure::Decode(outcome.result))
    }
}

fn cmd_example(out: &mut impl Write) -> CmdResult {
    let report = harness::worked_example();
    writeln!(out, "G =\n{}", report.g)?;
    writeln!(out, "G' =\n{}", report.reduced)?;
    writeln!(out, "{}", report.result)?;
    if let Some(p) = &report.result.solution {
        for (i, x) in p.mask().iter().enumerate() {
            writeln!(out, "x{} = {}", i + 1, u8::from(x))?;
        }
        writeln!(out, "P = {}", p.tensor_label())?;
    }
    writeln!(out, "reduced form matches: {}", report.reduced_matches())?;
    writeln!(out, "solution matches: {}", report.solution_matches())?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Example)
    }
}

fn cmd_sweep(args: &SweepArgs, out: &mut impl Write) -> CmdResult {
    let cfg = SweepConfig {
        b_min: args.b_min,
        b_max: args.b_max,
        trials: args.trials,
        seed: args.seed,
        max_rounds: args.max_rounds,
        timing: args.timing,
    };
    cfg.validate()?;
    // open the destination first so a bad path fails before the work
    let sink: Option<File> = match &args.out {
        Some(path) => Some(File::create(path).with_context(|| format!("cannot write {}", path.display()))?),
        None => None,
    };
    let rows = harness::run_sweep(&cfg)?;
    match sink {
        Some(f) => harness::write_csv(BufWriter::new(f), &rows)?,
        None => harness::write_csv(out, &rows)?,
    }
    Ok(())
}

fn cmd_estimate(args: &EstimateArgs, out: &mut impl Write) -> CmdResult {
    let mut cfg = ExperimentConfig::new(args.size.size(), &args.missing)?;
    cfg.seed = args.seed;
    let sigma = parse_sigma(&args.sigma, cfg.num_qubits())?;
    if args.rounds == 0 {
        return Err(Failure::Config(anyhow!("--rounds must be at least 1")));
    }
    let mut rng = harness::trial_rng(cfg.seed, 0);
    let prep = coupon_core::prepare_coupon_state(&cfg.missing, coupon_core::prep::DEFAULT_MAX_ATTEMPTS, &mut rng)?;
    let sampler = StateSampler::new(&prep.state);
    let records: Vec<BellRecord> = (0..args.rounds as u64).map(|k| sampler.measure(k, &mut rng)).collect();
    let estimate = estimate_pauli_sq(&records, &sigma)?;
    writeln!(out, "sigma {} ({})", sigma, sigma.label())?;
    writeln!(out, "rounds {}", records.len())?;
    writeln!(out, "estimate {estimate:.6}")?;
    Ok(())
}

fn cmd_baseline(args: &BaselineArgs, out: &mut impl Write) -> CmdResult {
    if args.trials == 0 {
        return Err(Failure::Config(anyhow!("--trials must be at least 1")));
    }
    let draws = run_baseline(args.n, args.trials, args.seed)?;
    let mean = draws.iter().sum::<u64>() as f64 / draws.len() as f64;
    writeln!(out, "n {}", args.n)?;
    writeln!(out, "trials {}", args.trials)?;
    writeln!(out, "mean_draws {mean:.4}")?;
    writeln!(out, "expected_n_h_n {:.4}", expected_draws(args.n))?;
    Ok(())
}

fn cmd_replay(args: &ReplayArgs, out: &mut impl Write) -> CmdResult {
    let f = File::open(&args.log).with_context(|| format!("cannot read {}", args.log.display()))?;
    let records = read_records(BufReader::new(f))?;
    let result = decode_records(&records)?;
    writeln!(out, "{result}")?;
    if result.is_unique() {
        Ok(())
    } else {
        Err(Failure::Decode(result))
    }
}

fn dispatch(cli: &Cli) -> CmdResult {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match &cli.command {
        Command::Run(a) => cmd_run(a, &mut out),
        Command::Example => cmd_example(&mut out),
        Command::Sweep(a) => cmd_sweep(a, &mut out),
        Command::Estimate(a) => cmd_estimate(a, &mut out),
        Command::Baseline(a) => cmd_baseline(a, &mut out),
        Command::Replay(a) => cmd_replay(a, &mut out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.threads {
        Some(0) => Err(Failure::Config(anyhow!("--threads must be at least 1"))),
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(Failure::Config(e.into())),
        },
        None => dispatch(&cli),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Decode(r)) => {
            eprintln!("decode failed: {}", r.status);
            ExitCode::from(1)
        }
        Err(Failure::Example) => {
            eprintln!("worked example does not match the reference matrices");
            ExitCode::from(1)
        }
        Err(Failure::Config(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
