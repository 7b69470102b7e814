//! Classical simulation of the mixed-state quantum coupon collector.
//!
//! A single missing element `s` of `[n]` is encoded as the Pauli-Z string
//! `P_s` on `b = ceil(log2 n)` qubits and hidden in `rho = 2^-b (I + P_s)`.
//! Two-copy Bell measurements of `rho` yield parity constraints on the code,
//! and Gaussian elimination over GF(2) recovers it from `O(b)` rounds.
//!
//! Modules, bottom up:
//!
//! - [`gf2`]: bit-packed vectors and matrices over GF(2)
//! - [`encoding`]: codes, instances and diagonal states
//! - [`prep`]: the post-selected preparation circuit
//! - [`bell`]: Bell-round sampling, exact outcome law, `|tr(σρ)|²` estimator
//! - [`decoder`]: constraint rows, elimination-based decoding, adaptive collection
//! - [`baseline`]: the classical coupon collector
//! - [`harness`]: seeded trials, sweeps and CSV output

pub mod baseline;
pub mod bell;
pub mod decoder;
pub mod encoding;
pub mod error;
pub mod gf2;
pub mod harness;
pub mod prep;

pub use baseline::{classical_baseline, expected_draws};
pub use bell::{estimate_pauli_sq, exact_round_distribution, measure_round, BellOutcome, BellRecord, StateSampler};
pub use decoder::{collect_and_decode, decode, record_to_row, DecodeResult, DecodeStatus};
pub use encoding::{build_state, encode_element, state_is_valid, CouponInstance, CouponState, PauliZString};
pub use error::{Error, Result};
pub use gf2::{null_space, rank, row_reduce, Gf2Matrix, Gf2Vector};
pub use harness::{ExperimentConfig, SweepConfig, SweepRow, TrialOutcome};
pub use prep::{density_oracle, prepare_coupon_state, prepare_maximally_mixed, PrepOutcome};
