//! Coupon instances, their Pauli-Z codes and the diagonal mixed states that
//! carry them.
//!
//! Every state handled here is diagonal in the computational basis, so a
//! state is a probability distribution over basis strings `u` in `[0, 2^b)`.
//! Basis strings follow the [`Gf2Vector`] ordering: qubit 1 is the most
//! significant bit.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf2::{Gf2Vector, MAX_WIDTH};

/// States up to this many qubits are materialised as a weight table by
/// [`build_state`] and the preparation circuit.
pub const DENSE_MAX_QUBITS: usize = 12;

/// Hard cap for any explicit weight table (2^24 f64 entries, 128 MiB).
pub const EXPLICIT_MAX_QUBITS: usize = 24;

/// Tolerance used when checking normalisation and positivity.
pub const WEIGHT_TOLERANCE: f64 = 1e-12;

/// A tensor product of `I` and `Z` factors; entry `i` of the mask is 1 when
/// qubit `i + 1` carries `Z`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliZString {
    mask: Gf2Vector,
}

impl PauliZString {
    pub fn new(mask: Gf2Vector) -> Self {
        Self { mask }
    }

    pub fn identity(num_qubits: usize) -> Result<Self> {
        Ok(Self { mask: Gf2Vector::zeros(num_qubits)? })
    }

    #[inline]
    pub fn mask(&self) -> Gf2Vector {
        self.mask
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.mask.len()
    }

    /// The element index this string encodes.
    #[inline]
    pub fn element(&self) -> u64 {
        self.mask.bits()
    }

    pub fn is_identity(&self) -> bool {
        self.mask.is_zero()
    }

    pub fn has_z(&self, qubit: usize) -> bool {
        self.mask.get(qubit)
    }

    /// Letter form such as `IZZZI`.
    pub fn label(&self) -> String {
        self.mask.iter().map(|z| if z { 'Z' } else { 'I' }).collect()
    }

    /// Tensor-product form such as `I⊗Z⊗Z⊗Z⊗I`.
    pub fn tensor_label(&self) -> String {
        self.label()
            .chars()
            .map(String::from)
            .collect::<Vec<_>>()
            .join("⊗")
    }

    /// Eigenvalue sign of this string on basis state `u`: true when the
    /// eigenvalue is -1.
    #[inline]
    pub fn anticommutes_with_basis(&self, u: u64) -> bool {
        (self.mask.bits() & u).count_ones() & 1 == 1
    }

    /// Parses either a bitstring (`01110`) or a letter string (`IZZZI`).
    pub fn parse(s: &str) -> Result<Self> {
        if s.chars().all(|c| c == 'I' || c == 'Z') && !s.is_empty() {
            let bits: Vec<bool> = s.chars().map(|c| c == 'Z').collect();
            return Ok(Self { mask: Gf2Vector::from_bools(&bits)? });
        }
        Ok(Self { mask: s.parse()? })
    }
}

impl fmt::Display for PauliZString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.mask)
    }
}

impl fmt::Debug for PauliZString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliZString({})", self.label())
    }
}

/// Maps element `s` to the Pauli string of its `b`-bit binary expansion.
pub fn encode_element(s: u64, num_qubits: usize) -> Result<PauliZString> {
    if s == 0 {
        return Err(Error::ZeroElement);
    }
    Ok(PauliZString { mask: Gf2Vector::from_bits(s, num_qubits)? })
}

/// `ceil(log2 n)`, the register size needed for `n` elements.
pub fn qubits_for(n: u64) -> usize {
    if n <= 1 {
        0
    } else {
        (64 - (n - 1).leading_zeros()) as usize
    }
}

/// A universe of `n` elements with `m >= 1` distinct missing elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CouponInstance {
    n: u64,
    num_qubits: usize,
    missing: Vec<PauliZString>,
}

impl CouponInstance {
    /// Elements are labelled `1..n`; label 0 is reserved for the identity.
    pub fn new(n: u64, missing: &[u64]) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInstance(format!("n = {n} leaves no nonzero element")));
        }
        let num_qubits = qubits_for(n);
        if num_qubits > MAX_WIDTH {
            return Err(Error::UnsupportedWidth(num_qubits));
        }
        if let Some(&bad) = missing.iter().find(|&&s| s >= n) {
            return Err(Error::InvalidInstance(format!("element {bad} is not below n = {n}")));
        }
        let codes = missing
            .iter()
            .map(|&s| encode_element(s, num_qubits))
            .collect::<Result<Vec<_>>>()?;
        Self::from_codes(n, num_qubits, codes)
    }

    /// Instance over the full `2^b` universe.
    pub fn with_qubits(num_qubits: usize, missing: &[PauliZString]) -> Result<Self> {
        if !(1..=MAX_WIDTH).contains(&num_qubits) {
            return Err(Error::UnsupportedWidth(num_qubits));
        }
        let n = if num_qubits == 64 { u64::MAX } else { 1u64 << num_qubits };
        Self::from_codes(n, num_qubits, missing.to_vec())
    }

    fn from_codes(n: u64, num_qubits: usize, missing: Vec<PauliZString>) -> Result<Self> {
        if missing.is_empty() {
            return Err(Error::InvalidInstance("no missing element".into()));
        }
        for (i, code) in missing.iter().enumerate() {
            if code.num_qubits() != num_qubits {
                return Err(Error::LengthMismatch { expected: num_qubits, found: code.num_qubits() });
            }
            if code.is_identity() {
                return Err(Error::ZeroElement);
            }
            if missing[..i].contains(code) {
                return Err(Error::InvalidInstance(format!("element {} listed twice", code.element())));
            }
        }
        if missing.len() > 1 && num_qubits > EXPLICIT_MAX_QUBITS {
            return Err(Error::TooManyQubits {
                what: "a state with several missing elements",
                max: EXPLICIT_MAX_QUBITS,
                got: num_qubits,
            });
        }
        Ok(Self { n, num_qubits, missing })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn missing(&self) -> &[PauliZString] {
        &self.missing
    }
}

/// How a [`CouponState`] stores its distribution.
#[derive(Clone, Debug, PartialEq)]
pub enum StateRepr {
    /// Weight table indexed by basis string.
    Dense(Vec<f64>),
    /// The maximally mixed state.
    Uniform,
    /// Uniform over `{u : <u, mask> = odd}`, i.e. `2^-b (I ± P)`.
    Parity { mask: Gf2Vector, odd: bool },
}

/// A diagonal `b`-qubit density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CouponState {
    num_qubits: usize,
    repr: StateRepr,
}

impl CouponState {
    pub fn from_weights(num_qubits: usize, weights: Vec<f64>) -> Result<Self> {
        if num_qubits == 0 || num_qubits > EXPLICIT_MAX_QUBITS {
            return Err(Error::TooManyQubits {
                what: "an explicit weight table",
                max: EXPLICIT_MAX_QUBITS,
                got: num_qubits,
            });
        }
        if weights.len() != 1usize << num_qubits {
            return Err(Error::LengthMismatch { expected: 1 << num_qubits, found: weights.len() });
        }
        Ok(Self { num_qubits, repr: StateRepr::Dense(weights) })
    }

    pub fn maximally_mixed(num_qubits: usize) -> Result<Self> {
        if !(1..=MAX_WIDTH).contains(&num_qubits) {
            return Err(Error::UnsupportedWidth(num_qubits));
        }
        Ok(Self { num_qubits, repr: StateRepr::Uniform })
    }

    /// `2^-b (I + P)` when `odd` is false, `2^-b (I - P)` otherwise.
    pub fn parity(code: &PauliZString, odd: bool) -> Result<Self> {
        if code.is_identity() {
            return Err(Error::ZeroElement);
        }
        Ok(Self { num_qubits: code.num_qubits(), repr: StateRepr::Parity { mask: code.mask(), odd } })
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn repr(&self) -> &StateRepr {
        &self.repr
    }

    /// Probability of basis string `u`.
    pub fn weight(&self, u: u64) -> f64 {
        let dim_log = self.num_qubits as i32;
        match &self.repr {
            StateRepr::Dense(w) => w.get(u as usize).copied().unwrap_or(0.0),
            StateRepr::Uniform => 2f64.powi(-dim_log),
            StateRepr::Parity { mask, odd } => {
                if ((mask.bits() & u).count_ones() & 1 == 1) == *odd {
                    2f64.powi(1 - dim_log)
                } else {
                    0.0
                }
            }
        }
    }

    /// Explicit weight table; fails above [`EXPLICIT_MAX_QUBITS`].
    pub fn to_dense(&self) -> Result<Vec<f64>> {
        if let StateRepr::Dense(w) = &self.repr {
            return Ok(w.clone());
        }
        if self.num_qubits > EXPLICIT_MAX_QUBITS {
            return Err(Error::TooManyQubits {
                what: "an explicit weight table",
                max: EXPLICIT_MAX_QUBITS,
                got: self.num_qubits,
            });
        }
        Ok((0..1u64 << self.num_qubits).map(|u| self.weight(u)).collect())
    }

    /// Same state with an explicit weight table.
    pub fn densified(&self) -> Result<Self> {
        Ok(Self { num_qubits: self.num_qubits, repr: StateRepr::Dense(self.to_dense()?) })
    }

    /// Number of basis strings with weight above the tolerance.
    pub fn support_size(&self) -> u64 {
        match &self.repr {
            StateRepr::Dense(w) => w.iter().filter(|&&x| x > WEIGHT_TOLERANCE).count() as u64,
            StateRepr::Uniform => 1u64 << self.num_qubits,
            StateRepr::Parity { .. } => 1u64 << (self.num_qubits - 1),
        }
    }

    /// Compares two states weight by weight. Both must fit an explicit table.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if self.num_qubits != other.num_qubits {
            return false;
        }
        match (self.to_dense(), other.to_dense()) {
            (Ok(a), Ok(b)) => a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= tol),
            _ => self.repr == other.repr,
        }
    }
}

/// `2^-b (I + (1/m) sum_i P_i)` read off the diagonal.
pub fn build_state(inst: &CouponInstance) -> CouponState {
    let b = inst.num_qubits();
    if let [code] = inst.missing() {
        if b > DENSE_MAX_QUBITS {
            return CouponState { num_qubits: b, repr: StateRepr::Parity { mask: code.mask(), odd: false } };
        }
    }
    let m = inst.missing().len() as f64;
    let scale = 2f64.powi(-(b as i32));
    let weights = (0..1u64 << b)
        .map(|u| {
            let signed: f64 = inst
                .missing()
                .iter()
                .map(|p| if p.anticommutes_with_basis(u) { -1.0 } else { 1.0 })
                .sum();
            // 1 + (sum of signs)/m is in [0, 2]; clamp rounding noise at the boundary.
            (scale * (1.0 + signed / m)).max(0.0)
        })
        .collect();
    CouponState { num_qubits: b, repr: StateRepr::Dense(weights) }
}

/// Normalised and non-negative, both within [`WEIGHT_TOLERANCE`].
pub fn state_is_valid(st: &CouponState) -> bool {
    match &st.repr {
        StateRepr::Dense(w) => {
            w.len() == 1usize << st.num_qubits
                && w.iter().all(|&x| x >= -WEIGHT_TOLERANCE && x.is_finite())
                && (w.iter().map(|&x| x.max(0.0)).sum::<f64>() - 1.0).abs() <= WEIGHT_TOLERANCE
        }
        StateRepr::Uniform => true,
        StateRepr::Parity { mask, .. } => !mask.is_zero(),
    }
}
