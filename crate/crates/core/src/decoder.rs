//! Recovering the missing element from Bell records.
//!
//! Each round contributes one linear constraint `<g_k, x> = 0 (mod 2)` where
//! `g_k` marks the pairs that landed in `Ψ±`. The encoded code satisfies all
//! of them, so once the constraints cut the solution space down to
//! `{0, x*}` the answer is determined.

use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bell::{BellRecord, StateSampler};
use crate::encoding::{CouponState, PauliZString};
use crate::error::{Error, Result};
use crate::gf2::{Gf2Matrix, Gf2Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DecodeStatus {
    /// Null space is one-dimensional.
    Unique,
    /// More than one nonzero candidate remains.
    Ambiguous,
    /// Only the zero vector solves the system; the records were corrupted.
    Inconsistent,
}

impl fmt::Display for DecodeStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Unique => "Unique",
            Self::Ambiguous => "Ambiguous",
            Self::Inconsistent => "Inconsistent",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeResult {
    pub status: DecodeStatus,
    /// Set only when `status` is `Unique`.
    pub solution: Option<PauliZString>,
    pub rounds_used: usize,
    /// Null-space basis of the collected constraints.
    pub candidates: Vec<Gf2Vector>,
}

impl DecodeResult {
    pub fn is_unique(&self) -> bool {
        self.status == DecodeStatus::Unique
    }

    /// Two copies of the state are consumed per round.
    pub fn copies_used(&self) -> usize {
        2 * self.rounds_used
    }
}

impl fmt::Display for DecodeResult {
    /// Single summary line, e.g. `status=Unique solution=01110 element=14 rounds=6`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "status={}", self.status)?;
        match &self.solution {
            Some(p) => write!(f, " solution={p} element={}", p.element())?,
            None => write!(f, " solution=- element=-")?,
        }
        write!(f, " rounds={} candidates={}", self.rounds_used, self.candidates.len())
    }
}

/// Collapses a record to its `Φ/Ψ` pattern: entry `i` is 1 iff pair `i`
/// gave `Ψ+` or `Ψ-`.
pub fn record_to_row(rec: &BellRecord) -> Gf2Vector {
    Gf2Vector::from_bits(rec.psi_mask(), rec.num_qubits()).expect("record width is 1..=64")
}

/// Solves `G x = 0` and classifies the solution space.
pub fn decode(rows: &Gf2Matrix) -> DecodeResult {
    let candidates = rows.null_space();
    let (status, solution) = match candidates.as_slice() {
        [only] => (DecodeStatus::Unique, Some(PauliZString::new(*only))),
        [] => (DecodeStatus::Inconsistent, None),
        _ => (DecodeStatus::Ambiguous, None),
    };
    DecodeResult { status, solution, rounds_used: rows.num_rows(), candidates }
}

/// Builds the constraint matrix from a record log and decodes it.
pub fn decode_records(records: &[BellRecord]) -> Result<DecodeResult> {
    let first = records.first().ok_or(Error::EmptyRecords)?;
    let mut g = Gf2Matrix::new(first.num_qubits())?;
    for rec in records {
        g.push_row(&record_to_row(rec))?;
    }
    Ok(decode(&g))
}

/// Measures rounds one at a time, re-solving after each, until the answer is
/// unique or `max_rounds` is reached. `on_record` sees every record.
pub fn collect_and_decode_with<R, F>(
    st: &CouponState,
    max_rounds: usize,
    rng: &mut R,
    mut on_record: F,
) -> Result<DecodeResult>
where
    R: Rng + ?Sized,
    F: FnMut(&BellRecord),
{
    if max_rounds == 0 {
        return Err(Error::InvalidArgument("max_rounds must be at least 1".into()));
    }
    let sampler = StateSampler::new(st);
    let mut g = Gf2Matrix::new(st.num_qubits())?;
    let mut result = decode(&g);
    for round in 0..max_rounds as u64 {
        let rec = sampler.measure(round, rng);
        on_record(&rec);
        g.push_row(&record_to_row(&rec))?;
        result = decode(&g);
        if result.status != DecodeStatus::Ambiguous {
            break;
        }
    }
    Ok(result)
}

pub fn collect_and_decode(st: &CouponState, max_rounds: usize, seed: u64) -> Result<DecodeResult> {
    collect_and_decode_with(st, max_rounds, &mut ChaCha8Rng::seed_from_u64(seed), |_| {})
}

/// Expected number of uniform draws from a `dim`-dimensional GF(2) space
/// needed to span it: `sum_{j=0}^{dim-1} 1 / (1 - 2^(j - dim))`.
pub fn expected_rounds_to_span(dim: usize) -> f64 {
    (0..dim).map(|j| 1.0 / (1.0 - 2f64.powi(j as i32 - dim as i32))).sum()
}
