//! End-to-end trials, parameter sweeps and the fixed worked example.
//!
//! All randomness derives from one 64-bit seed. Trial `t` at register size
//! `b` reads ChaCha8 stream `(b << 40) | t`, so results do not depend on how
//! trials are scheduled across threads.

use std::io::{Read, Write};
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baseline::classical_baseline_with;
use crate::decoder::{collect_and_decode_with, decode, DecodeResult};
use crate::encoding::{encode_element, qubits_for, PauliZString, EXPLICIT_MAX_QUBITS};
use crate::error::{Error, Result};
use crate::gf2::{Gf2Matrix, Gf2Vector};
use crate::prep::{prepare_coupon_state, DEFAULT_MAX_ATTEMPTS};

/// Default round budget for single runs.
pub const DEFAULT_MAX_ROUNDS: usize = 64;

/// The classical baseline is only simulated up to `n = 2^16`.
pub const BASELINE_MAX_QUBITS: usize = 16;

const BASELINE_STREAM_FLAG: u64 = 1 << 63;

/// Worked-example constraint matrix, one row per Bell round.
pub const WORKED_EXAMPLE_G: [&str; 6] = ["01101", "01010", "11010", "00001", "00000", "11101"];

/// Its reduced row-echelon form.
pub const WORKED_EXAMPLE_G_REDUCED: [&str; 6] = ["10000", "01010", "00110", "00001", "00000", "00000"];

/// The code the worked example decodes to (`I⊗Z⊗Z⊗Z⊗I`).
pub const WORKED_EXAMPLE_SOLUTION: &str = "01110";

pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn trial_stream(num_qubits: usize, trial: u64) -> u64 {
    ((num_qubits as u64) << 40) | trial
}

/// Uniform nonzero `b`-bit code.
pub fn random_code<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> Result<PauliZString> {
    let s = if num_qubits == 64 {
        rng.random_range(1..=u64::MAX)
    } else {
        rng.random_range(1..1u64 << num_qubits)
    };
    encode_element(s, num_qubits)
}

/// Size of the coupon universe, given either as `n` or as a qubit count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InstanceSize {
    Elements(u64),
    Qubits(usize),
}

impl InstanceSize {
    pub fn num_qubits(&self) -> Result<usize> {
        let b = match *self {
            Self::Elements(n) if n < 2 => {
                return Err(Error::InvalidInstance(format!("n = {n} leaves no nonzero element")))
            }
            Self::Elements(n) => qubits_for(n),
            Self::Qubits(b) => b,
        };
        if !(1..=crate::gf2::MAX_WIDTH).contains(&b) {
            return Err(Error::UnsupportedWidth(b));
        }
        Ok(b)
    }

    /// Exclusive upper bound on element labels.
    pub fn element_bound(&self) -> Result<u64> {
        match *self {
            Self::Elements(n) => {
                self.num_qubits()?;
                Ok(n)
            }
            Self::Qubits(b) => {
                self.num_qubits()?;
                Ok(if b == 64 { u64::MAX } else { 1u64 << b })
            }
        }
    }
}

/// Parses a missing-element spec: decimal (`14`) or binary (`0b01110`).
pub fn parse_missing(text: &str, size: InstanceSize) -> Result<PauliZString> {
    let b = size.num_qubits()?;
    let value = if let Some(bin) = text.strip_prefix("0b") {
        if bin.is_empty() || bin.len() > b {
            return Err(Error::Parse(format!("bitstring {text:?} does not fit {b} qubits")));
        }
        u64::from_str_radix(bin, 2).map_err(|e| Error::Parse(format!("{text:?}: {e}")))?
    } else {
        text.parse::<u64>().map_err(|e| Error::Parse(format!("{text:?}: {e}")))?
    };
    let bound = size.element_bound()?;
    if value >= bound && !(b == 64 && value == u64::MAX) {
        return Err(Error::InvalidInstance(format!("element {value} is not below {bound}")));
    }
    encode_element(value, b)
}

/// Parses a candidate string of exactly `b` qubits: `01110`, `0b01110` or `IZZZI`.
pub fn parse_sigma(text: &str, num_qubits: usize) -> Result<PauliZString> {
    let sigma = PauliZString::parse(text.strip_prefix("0b").unwrap_or(text))?;
    if sigma.num_qubits() != num_qubits {
        return Err(Error::LengthMismatch { expected: num_qubits, found: sigma.num_qubits() });
    }
    Ok(sigma)
}

/// Settings shared by `run` and `estimate`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub size: InstanceSize,
    pub missing: PauliZString,
    pub trials: usize,
    pub seed: u64,
    pub max_rounds: usize,
}

impl ExperimentConfig {
    pub fn new(size: InstanceSize, missing: &str) -> Result<Self> {
        Ok(Self {
            size,
            missing: parse_missing(missing, size)?,
            trials: 1,
            seed: 0,
            max_rounds: DEFAULT_MAX_ROUNDS,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.missing.num_qubits()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialOutcome {
    pub encoded: PauliZString,
    pub result: DecodeResult,
    pub prep_attempts: usize,
}

impl TrialOutcome {
    pub fn correct(&self) -> bool {
        self.result.solution == Some(self.encoded)
    }
}

/// Prepares the state through the post-selection circuit, then collects and
/// decodes Bell rounds. The same `rng` drives both stages.
pub fn run_trial<R, F>(code: &PauliZString, max_rounds: usize, rng: &mut R, on_record: F) -> Result<TrialOutcome>
where
    R: Rng + ?Sized,
    F: FnMut(&crate::bell::BellRecord),
{
    let prep = prepare_coupon_state(code, DEFAULT_MAX_ATTEMPTS, rng)?;
    let result = collect_and_decode_with(&prep.state, max_rounds, rng, on_record)?;
    Ok(TrialOutcome { encoded: *code, result, prep_attempts: prep.attempts })
}

/// End-to-end `run`: deterministic in `cfg.seed`.
pub fn run_experiment<F>(cfg: &ExperimentConfig, on_record: F) -> Result<TrialOutcome>
where
    F: FnMut(&crate::bell::BellRecord),
{
    let mut rng = trial_rng(cfg.seed, trial_stream(cfg.num_qubits(), 0));
    run_trial(&cfg.missing, cfg.max_rounds, &mut rng, on_record)
}

/// `trials` independent decodes with uniformly random nonzero codes.
pub fn run_trials(num_qubits: usize, trials: usize, seed: u64, max_rounds: usize) -> Result<Vec<TrialOutcome>> {
    (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, trial_stream(num_qubits, t));
            let code = random_code(num_qubits, &mut rng)?;
            run_trial(&code, max_rounds, &mut rng, |_| {})
        })
        .collect()
}

/// Classical draw counts at `n`, `trials` times.
pub fn run_baseline(n: u64, trials: usize, seed: u64) -> Result<Vec<u64>> {
    (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, BASELINE_STREAM_FLAG | (n.min((1 << 40) - 1) << 20) | t);
            classical_baseline_with(n, &mut rng)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub b_min: usize,
    pub b_max: usize,
    pub trials: usize,
    pub seed: u64,
    /// Round budget; `None` means `b + 10`.
    pub max_rounds: Option<usize>,
    /// Record wall-clock time per row. Off by default so output is reproducible.
    pub timing: bool,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1 <= self.b_min && self.b_min <= self.b_max && self.b_max <= EXPLICIT_MAX_QUBITS) {
            return Err(Error::InvalidArgument(format!(
                "need 1 <= b_min <= b_max <= {EXPLICIT_MAX_QUBITS}, got {}..={}",
                self.b_min, self.b_max
            )));
        }
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if self.max_rounds == Some(0) {
            return Err(Error::InvalidArgument("max_rounds must be at least 1".into()));
        }
        Ok(())
    }
}

/// One CSV row of a sweep. Column order follows field order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub b: usize,
    pub n: u64,
    pub trials: usize,
    pub mean_rounds: f64,
    pub stddev_rounds: f64,
    pub mean_copies: f64,
    pub success_rate: f64,
    /// Seconds spent simulating this row, or 0 when timing is off.
    pub wall_time: f64,
    pub mean_prep_attempts: f64,
    /// Mean classical draws at `n`; empty above [`BASELINE_MAX_QUBITS`].
    pub classical_mean: Option<f64>,
}

fn mean_std(xs: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = xs.clone().count() as f64;
    let mean = xs.clone().sum::<f64>() / n;
    let var = if n > 1.0 { xs.map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    (mean, var.sqrt())
}

/// Summarises one register size.
pub fn sweep_row(num_qubits: usize, outcomes: &[TrialOutcome], classical: Option<&[u64]>) -> SweepRow {
    let (mean_rounds, stddev_rounds) = mean_std(outcomes.iter().map(|o| o.result.rounds_used as f64));
    let (mean_prep_attempts, _) = mean_std(outcomes.iter().map(|o| o.prep_attempts as f64));
    let successes = outcomes.iter().filter(|o| o.correct()).count();
    SweepRow {
        b: num_qubits,
        n: 1u64 << num_qubits,
        trials: outcomes.len(),
        mean_rounds,
        stddev_rounds,
        mean_copies: 2.0 * mean_rounds,
        success_rate: successes as f64 / outcomes.len() as f64,
        wall_time: 0.0,
        mean_prep_attempts,
        classical_mean: classical.map(|c| c.iter().sum::<u64>() as f64 / c.len() as f64),
    }
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    (cfg.b_min..=cfg.b_max)
        .map(|b| {
            let start = Instant::now();
            let max_rounds = cfg.max_rounds.unwrap_or(b + 10);
            let outcomes = run_trials(b, cfg.trials, cfg.seed, max_rounds)?;
            let classical = if b <= BASELINE_MAX_QUBITS {
                Some(run_baseline(1u64 << b, cfg.trials, cfg.seed)?)
            } else {
                None
            };
            let mut row = sweep_row(b, &outcomes, classical.as_deref());
            if cfg.timing {
                row.wall_time = start.elapsed().as_secs_f64();
            }
            Ok(row)
        })
        .collect()
}

pub fn write_csv<W: Write>(out: W, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| Error::InvalidArgument(format!("csv write: {e}")))?;
    }
    w.flush().map_err(|e| Error::InvalidArgument(format!("csv write: {e}")))?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<SweepRow>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .map(|r| r.map_err(|e| Error::Parse(format!("csv: {e}"))))
        .collect()
}

/// Least-squares fit `y = intercept + slope * x`.
pub fn linear_fit(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Outcome of replaying the fixed worked example.
#[derive(Clone, Debug)]
pub struct ExampleReport {
    pub g: Gf2Matrix,
    pub reduced: Gf2Matrix,
    pub expected_reduced: Gf2Matrix,
    pub result: DecodeResult,
    pub expected_solution: Gf2Vector,
}

impl ExampleReport {
    pub fn reduced_matches(&self) -> bool {
        self.reduced == self.expected_reduced
    }

    pub fn solution_matches(&self) -> bool {
        self.result.solution.map(|p| p.mask()) == Some(self.expected_solution)
    }

    pub fn passed(&self) -> bool {
        self.reduced_matches() && self.solution_matches()
    }
}

pub fn worked_example() -> ExampleReport {
    let g = Gf2Matrix::from_bitstrings(5, &WORKED_EXAMPLE_G).expect("fixture");
    let expected_reduced = Gf2Matrix::from_bitstrings(5, &WORKED_EXAMPLE_G_REDUCED).expect("fixture");
    ExampleReport {
        reduced: g.row_reduce(),
        result: decode(&g),
        g,
        expected_reduced,
        expected_solution: WORKED_EXAMPLE_SOLUTION.parse().expect("fixture"),
    }
}
