//! Two-copy Bell measurements on diagonal states.
//!
//! A diagonal `rho` makes `rho ⊗ rho` a classical mixture of product basis
//! states `|u>|v>`. Projecting the pair `(u_i, v_i)` onto the Bell basis gives
//! a `Φ` outcome when `u_i = v_i` and a `Ψ` outcome otherwise, each sign with
//! probability one half. [`measure_round`] samples this directly;
//! [`exact_round_distribution`] computes the same law from the Bell vectors
//! and is used as the reference.
//!
//! Log encoding per pair: `Φ+ = 00`, `Φ- = 01`, `Ψ+ = 10`, `Ψ- = 11`. The
//! first bit is the `Φ/Ψ` class.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::encoding::{CouponState, PauliZString, StateRepr};
use crate::error::{Error, Result};

/// Largest register accepted by [`exact_round_distribution`].
pub const EXACT_MAX_QUBITS: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BellOutcome {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellOutcome {
    pub const ALL: [BellOutcome; 4] = [Self::PhiPlus, Self::PhiMinus, Self::PsiPlus, Self::PsiMinus];

    /// Two-bit wire code.
    #[inline]
    pub fn code(self) -> u8 {
        match self {
            Self::PhiPlus => 0b00,
            Self::PhiMinus => 0b01,
            Self::PsiPlus => 0b10,
            Self::PsiMinus => 0b11,
        }
    }

    #[inline]
    pub fn from_code(code: u8) -> Result<Self> {
        match code {
            0b00 => Ok(Self::PhiPlus),
            0b01 => Ok(Self::PhiMinus),
            0b10 => Ok(Self::PsiPlus),
            0b11 => Ok(Self::PsiMinus),
            _ => Err(Error::Parse(format!("Bell code {code} out of range"))),
        }
    }

    /// True for `Ψ±`, the `-1` eigenspace of `Z ⊗ Z`.
    #[inline]
    pub fn is_psi(self) -> bool {
        matches!(self, Self::PsiPlus | Self::PsiMinus)
    }

    /// Amplitudes over `|00>, |01>, |10>, |11>` (copy 1 bit first).
    pub fn amplitudes(self) -> [f64; 4] {
        use std::f64::consts::FRAC_1_SQRT_2 as S;
        match self {
            Self::PhiPlus => [S, 0.0, 0.0, S],
            Self::PhiMinus => [S, 0.0, 0.0, -S],
            Self::PsiPlus => [0.0, S, S, 0.0],
            Self::PsiMinus => [0.0, S, -S, 0.0],
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Self::PhiPlus => "Φ+",
            Self::PhiMinus => "Φ-",
            Self::PsiPlus => "Ψ+",
            Self::PsiMinus => "Ψ-",
        }
    }
}

/// `tr((σ ⊗ σ) R)` for `σ ∈ {I, Z}`.
#[inline]
pub fn pair_eigenvalue(sigma_is_z: bool, outcome: BellOutcome) -> i8 {
    if sigma_is_z && outcome.is_psi() {
        -1
    } else {
        1
    }
}

/// Outcomes of one Bell round, one per qubit pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BellRecord {
    pub round: u64,
    pub outcomes: Vec<BellOutcome>,
}

impl BellRecord {
    pub fn num_qubits(&self) -> usize {
        self.outcomes.len()
    }

    /// Class bits packed big-endian: bit for pair 1 is the most significant.
    pub fn psi_mask(&self) -> u64 {
        self.outcomes.iter().fold(0u64, |acc, o| (acc << 1) | u64::from(o.is_psi()))
    }

    /// Index of this outcome string among the `4^b` strings, pair 1 first.
    pub fn outcome_index(&self) -> usize {
        self.outcomes.iter().fold(0usize, |acc, o| (acc << 2) | o.code() as usize)
    }

    /// `∏_i tr((σ_i ⊗ σ_i) R_i)`.
    pub fn pauli_product(&self, sigma: &PauliZString) -> Result<i8> {
        if sigma.num_qubits() != self.outcomes.len() {
            return Err(Error::LengthMismatch { expected: self.outcomes.len(), found: sigma.num_qubits() });
        }
        Ok(self
            .outcomes
            .iter()
            .enumerate()
            .map(|(i, &o)| pair_eigenvalue(sigma.has_z(i), o))
            .product())
    }
}

impl fmt::Display for BellRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.round)?;
        for o in &self.outcomes {
            write!(f, " {:02b}", o.code())?;
        }
        Ok(())
    }
}

impl FromStr for BellRecord {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let mut fields = line.split_whitespace();
        let round = fields
            .next()
            .ok_or_else(|| Error::Parse("empty record line".into()))?
            .parse::<u64>()
            .map_err(|e| Error::Parse(format!("bad round index: {e}")))?;
        let outcomes = fields
            .map(|tok| match tok {
                "00" | "01" | "10" | "11" => BellOutcome::from_code(u8::from_str_radix(tok, 2).unwrap()),
                _ => Err(Error::Parse(format!("bad Bell code {tok:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if outcomes.is_empty() || outcomes.len() > crate::gf2::MAX_WIDTH {
            return Err(Error::Parse(format!("record has {} outcomes", outcomes.len())));
        }
        Ok(Self { round, outcomes })
    }
}

/// Writes one record per line.
pub fn write_records<W: Write>(mut out: W, records: &[BellRecord]) -> std::io::Result<()> {
    for r in records {
        writeln!(out, "{r}")?;
    }
    Ok(())
}

/// Reads a record log, skipping blank lines and `#` comments. All records
/// must have the same width.
pub fn read_records<R: BufRead>(input: R) -> Result<Vec<BellRecord>> {
    let mut records: Vec<BellRecord> = Vec::new();
    for (lineno, line) in input.lines().enumerate() {
        let line = line.map_err(|e| Error::Parse(e.to_string()))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let rec: BellRecord = trimmed
            .parse()
            .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        if let Some(first) = records.first() {
            if first.num_qubits() != rec.num_qubits() {
                return Err(Error::LengthMismatch { expected: first.num_qubits(), found: rec.num_qubits() });
            }
        }
        records.push(rec);
    }
    Ok(records)
}

/// Draws computational-basis strings from a diagonal state.
#[derive(Clone, Debug)]
pub struct StateSampler {
    num_qubits: usize,
    kind: SamplerKind,
}

#[derive(Clone, Debug)]
enum SamplerKind {
    Cumulative(Vec<f64>),
    Uniform,
    Parity { mask: u64, odd: bool, fix: u64 },
}

impl StateSampler {
    pub fn new(st: &CouponState) -> Self {
        let kind = match st.repr() {
            StateRepr::Dense(w) => {
                let mut acc = 0.0;
                SamplerKind::Cumulative(
                    w.iter()
                        .map(|&x| {
                            acc += x.max(0.0);
                            acc
                        })
                        .collect(),
                )
            }
            StateRepr::Uniform => SamplerKind::Uniform,
            StateRepr::Parity { mask, odd } => {
                let bits = mask.bits();
                SamplerKind::Parity { mask: bits, odd: *odd, fix: bits & bits.wrapping_neg() }
            }
        };
        Self { num_qubits: st.num_qubits(), kind }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    fn uniform_bits<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let raw = rng.random::<u64>();
        if self.num_qubits == 64 {
            raw
        } else {
            raw & ((1u64 << self.num_qubits) - 1)
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        match &self.kind {
            SamplerKind::Cumulative(cdf) => {
                let total = *cdf.last().expect("non-empty table");
                let x = rng.random::<f64>() * total;
                let idx = cdf.partition_point(|&c| c <= x);
                // x < total, so idx is in range unless the tail is all zeros
                idx.min(cdf.len() - 1) as u64
            }
            SamplerKind::Uniform => self.uniform_bits(rng),
            SamplerKind::Parity { mask, odd, fix } => {
                // flipping one bit of the mask swaps the two parity cosets
                let u = self.uniform_bits(rng);
                if ((u & mask).count_ones() & 1 == 1) == *odd {
                    u
                } else {
                    u ^ fix
                }
            }
        }
    }

    /// Samples one Bell round on two fresh copies.
    pub fn measure<R: Rng + ?Sized>(&self, round: u64, rng: &mut R) -> BellRecord {
        let u = self.sample(rng);
        let v = self.sample(rng);
        let class = u ^ v;
        let sign = self.uniform_bits(rng);
        let b = self.num_qubits;
        let outcomes = (0..b)
            .map(|i| {
                let shift = b - 1 - i;
                let code = ((((class >> shift) & 1) << 1) | ((sign >> shift) & 1)) as u8;
                BellOutcome::from_code(code).expect("two-bit code")
            })
            .collect();
        BellRecord { round, outcomes }
    }
}

/// One Bell round on `st ⊗ st`, reproducible from `seed`.
pub fn measure_round(st: &CouponState, round: u64, seed: u64) -> BellRecord {
    StateSampler::new(st).measure(round, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Exact probability of each of the `4^b` outcome strings, indexed as in
/// [`BellRecord::outcome_index`].
pub fn exact_round_distribution(st: &CouponState) -> Result<Vec<f64>> {
    let b = st.num_qubits();
    if b > EXACT_MAX_QUBITS {
        return Err(Error::TooManyQubits { what: "the exact Bell distribution", max: EXACT_MAX_QUBITS, got: b });
    }
    let weights = st.to_dense()?;
    let amps = BellOutcome::ALL.map(BellOutcome::amplitudes);
    let mut dist = vec![0.0; 1 << (2 * b)];
    let support: Vec<(u64, f64)> = weights
        .iter()
        .enumerate()
        .filter(|(_, &w)| w != 0.0)
        .map(|(u, &w)| (u as u64, w))
        .collect();
    for &(u, wu) in &support {
        for &(v, wv) in &support {
            // <B_r| (|u_i> ⊗ |v_i>) for every pair, expanded as a tensor product
            let mut local = vec![1.0f64];
            for i in 0..b {
                let shift = b - 1 - i;
                let basis = (((u >> shift) & 1) << 1 | ((v >> shift) & 1)) as usize;
                let probs: [f64; 4] = amps.map(|a| a[basis] * a[basis]);
                local = local.iter().flat_map(|&p| probs.map(|q| p * q)).collect();
            }
            let w = wu * wv;
            for (d, p) in dist.iter_mut().zip(&local) {
                *d += w * p;
            }
        }
    }
    Ok(dist)
}

/// Empirical `|tr(σ ρ)|^2`: mean over rounds of `∏_i tr((σ_i ⊗ σ_i) R_i)`.
pub fn estimate_pauli_sq(records: &[BellRecord], sigma: &PauliZString) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::EmptyRecords);
    }
    let mut total: i64 = 0;
    for r in records {
        total += i64::from(r.pauli_product(sigma)?);
    }
    Ok(total as f64 / records.len() as f64)
}
