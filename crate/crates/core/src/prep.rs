//! Simulation of the two-step state preparation.
//!
//! Step one builds `I/2^b` one qubit at a time: Hadamard, CNOT onto a fresh
//! ancilla, discard the ancilla. Step two copies the parity of the
//! Z-carrying register qubits onto one more ancilla with CNOTs, measures it
//! and keeps the register only on outcome `0`.
//!
//! Both steps send diagonal states to diagonal states, so after step one the
//! simulator tracks a probability vector over register basis strings. The
//! single-qubit step itself is run on a two-qubit state vector and reduced
//! with a partial trace.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::encoding::{CouponState, PauliZString, StateRepr, DENSE_MAX_QUBITS, WEIGHT_TOLERANCE};
use crate::error::{Error, Result};

/// Default retry budget for post-selection.
pub const DEFAULT_MAX_ATTEMPTS: usize = 64;

/// Largest register accepted by [`density_oracle`].
pub const ORACLE_MAX_QUBITS: usize = 10;

/// Result of a successful post-selected preparation.
#[derive(Clone, Debug, PartialEq)]
pub struct PrepOutcome {
    pub state: CouponState,
    /// Number of runs including the successful one.
    pub attempts: usize,
    /// Fraction of runs whose ancilla read `0`.
    pub success_rate_estimate: f64,
}

/// Runs Hadamard then CNOT(register -> ancilla) on `|00>` and returns the
/// register's reduced density matrix `[[r00, r01], [r10, r11]]`.
pub fn single_qubit_mixing_circuit() -> [[f64; 2]; 2] {
    use std::f64::consts::FRAC_1_SQRT_2;
    // amplitudes indexed by (register << 1) | ancilla
    let mut amp = [1.0f64, 0.0, 0.0, 0.0];
    // Hadamard on the register qubit
    let h = [
        FRAC_1_SQRT_2 * (amp[0] + amp[2]),
        FRAC_1_SQRT_2 * (amp[1] + amp[3]),
        FRAC_1_SQRT_2 * (amp[0] - amp[2]),
        FRAC_1_SQRT_2 * (amp[1] - amp[3]),
    ];
    amp = h;
    // CNOT, register controls ancilla
    amp.swap(2, 3);
    let mut reduced = [[0.0; 2]; 2];
    for (r, row) in reduced.iter_mut().enumerate() {
        for (c, entry) in row.iter_mut().enumerate() {
            *entry = (0..2).map(|a| amp[(r << 1) | a] * amp[(c << 1) | a]).sum();
        }
    }
    reduced
}

/// Step one: the `b`-qubit maximally mixed state.
pub fn prepare_maximally_mixed(num_qubits: usize) -> Result<CouponState> {
    if num_qubits == 0 {
        return Err(Error::UnsupportedWidth(0));
    }
    let reduced = single_qubit_mixing_circuit();
    debug_assert!(reduced[0][1].abs() < WEIGHT_TOLERANCE && reduced[1][0].abs() < WEIGHT_TOLERANCE);
    let marginal = [reduced[0][0], reduced[1][1]];
    if num_qubits > DENSE_MAX_QUBITS {
        if marginal.iter().all(|&p| (p - 0.5).abs() <= WEIGHT_TOLERANCE) {
            return CouponState::maximally_mixed(num_qubits);
        }
        return Err(Error::InvalidArgument("mixing circuit did not produce I/2".into()));
    }
    // qubits are independent: the register distribution is a product
    let mut weights = vec![1.0];
    for _ in 0..num_qubits {
        weights = weights.iter().flat_map(|&w| marginal.map(|p| w * p)).collect();
    }
    CouponState::from_weights(num_qubits, weights)
}

/// Step two for a fixed ancilla outcome: returns the outcome probability and
/// the conditional register state.
///
/// Outcome `false` (ancilla `|0>`) yields `2^-b (I + P)`, outcome `true`
/// yields `2^-b (I - P)`.
pub fn ancilla_branch(
    register: &CouponState,
    code: &PauliZString,
    outcome: bool,
) -> Result<(f64, CouponState)> {
    let b = register.num_qubits();
    if code.num_qubits() != b {
        return Err(Error::LengthMismatch { expected: b, found: code.num_qubits() });
    }
    if code.is_identity() {
        return Err(Error::ZeroElement);
    }
    match register.repr() {
        StateRepr::Dense(weights) => {
            // joint[u] = [P(u, a=0), P(u, a=1)], ancilla starts in |0>
            let mut joint: Vec<[f64; 2]> = weights.iter().map(|&w| [w, 0.0]).collect();
            for qubit in (0..b).filter(|&q| code.has_z(q)) {
                let control = 1u64 << (b - 1 - qubit);
                for (u, pair) in joint.iter_mut().enumerate() {
                    if u as u64 & control != 0 {
                        pair.swap(0, 1);
                    }
                }
            }
            let idx = usize::from(outcome);
            let prob: f64 = joint.iter().map(|p| p[idx]).sum();
            if prob <= 0.0 {
                return Err(Error::InvalidArgument("ancilla outcome has zero probability".into()));
            }
            let conditional = joint.iter().map(|p| p[idx] / prob).collect();
            Ok((prob, CouponState::from_weights(b, conditional)?))
        }
        StateRepr::Uniform => Ok((0.5, CouponState::parity(code, outcome)?)),
        StateRepr::Parity { .. } => Err(Error::InvalidArgument(
            "parity accumulation is simulated only on the maximally mixed register".into(),
        )),
    }
}

/// Prepares `2^-b (I + P)` by repeat-until-success post-selection.
pub fn prepare_coupon_state<R: Rng + ?Sized>(
    code: &PauliZString,
    max_attempts: usize,
    rng: &mut R,
) -> Result<PrepOutcome> {
    if max_attempts == 0 {
        return Err(Error::InvalidArgument("max_attempts must be at least 1".into()));
    }
    for attempt in 1..=max_attempts {
        let register = prepare_maximally_mixed(code.num_qubits())?;
        let (p_zero, state) = ancilla_branch(&register, code, false)?;
        if rng.random::<f64>() < p_zero {
            return Ok(PrepOutcome {
                state,
                attempts: attempt,
                success_rate_estimate: 1.0 / attempt as f64,
            });
        }
    }
    Err(Error::PostSelectionFailed(max_attempts))
}

pub fn prepare_coupon_state_seeded(
    code: &PauliZString,
    max_attempts: usize,
    seed: u64,
) -> Result<PrepOutcome> {
    prepare_coupon_state(code, max_attempts, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Builds the diagonal of `2^-b (I + P)` as a Kronecker product of the
/// single-qubit diagonals `diag(I) = (1, 1)` and `diag(Z) = (1, -1)`.
pub fn density_oracle(code: &PauliZString) -> Result<CouponState> {
    let b = code.num_qubits();
    if b > ORACLE_MAX_QUBITS {
        return Err(Error::TooManyQubits { what: "the density oracle", max: ORACLE_MAX_QUBITS, got: b });
    }
    let mut pauli_diag = vec![1.0f64];
    for q in 0..b {
        let factor = if code.has_z(q) { [1.0, -1.0] } else { [1.0, 1.0] };
        pauli_diag = pauli_diag.iter().flat_map(|&d| factor.map(|f| d * f)).collect();
    }
    let scale = 2f64.powi(-(b as i32));
    let weights = pauli_diag.iter().map(|&d| scale * (1.0 + d)).collect();
    CouponState::from_weights(b, weights)
}
