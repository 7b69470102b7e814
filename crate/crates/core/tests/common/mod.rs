//! Small dense real-matrix and state-vector helpers used as reference
//! implementations. Nothing here calls into `coupon_core`.

#![allow(dead_code)]

pub type Matrix = Vec<Vec<f64>>;

pub fn identity(dim: usize) -> Matrix {
    (0..dim).map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect()
}

pub fn pauli_i() -> Matrix {
    vec![vec![1.0, 0.0], vec![0.0, 1.0]]
}

pub fn pauli_z() -> Matrix {
    vec![vec![1.0, 0.0], vec![0.0, -1.0]]
}

pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (ra, ca, rb, cb) = (a.len(), a[0].len(), b.len(), b[0].len());
    let mut out = vec![vec![0.0; ca * cb]; ra * rb];
    for i in 0..ra {
        for j in 0..ca {
            for k in 0..rb {
                for l in 0..cb {
                    out[i * rb + k][j * cb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn add_scaled(a: &Matrix, b: &Matrix, s: f64) -> Matrix {
    a.iter().zip(b).map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + s * y).collect()).collect()
}

pub fn scale(a: &Matrix, s: f64) -> Matrix {
    a.iter().map(|r| r.iter().map(|x| x * s).collect()).collect()
}

pub fn diag(a: &Matrix) -> Vec<f64> {
    (0..a.len()).map(|i| a[i][i]).collect()
}

pub fn trace_product(a: &Matrix, b: &Matrix) -> f64 {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[i][j] * b[j][i]).sum::<f64>()).sum()
}

/// Pauli string `⊗_q (Z if bit q of the label string is '1' else I)`.
pub fn pauli_z_string(bits: &str) -> Matrix {
    bits.chars().fold(vec![vec![1.0]], |acc, c| kron(&acc, &if c == '1' { pauli_z() } else { pauli_i() }))
}

/// `2^-b (I + (1/m) sum P_i)` as a full matrix.
pub fn coupon_density(codes: &[&str]) -> Matrix {
    let b = codes[0].len();
    let dim = 1 << b;
    let mut acc = identity(dim);
    for c in codes {
        acc = add_scaled(&acc, &pauli_z_string(c), 1.0 / codes.len() as f64);
    }
    scale(&acc, 1.0 / dim as f64)
}

/// Pure-state simulator on `n` qubits; qubit 0 is the most significant bit.
pub struct StateVector {
    pub n: usize,
    pub amp: Vec<f64>,
}

impl StateVector {
    pub fn zero(n: usize) -> Self {
        let mut amp = vec![0.0; 1 << n];
        amp[0] = 1.0;
        Self { n, amp }
    }

    fn mask(&self, q: usize) -> usize {
        1 << (self.n - 1 - q)
    }

    pub fn hadamard(&mut self, q: usize) {
        let m = self.mask(q);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for i in 0..self.amp.len() {
            if i & m == 0 {
                let (a, b) = (self.amp[i], self.amp[i | m]);
                self.amp[i] = s * (a + b);
                self.amp[i | m] = s * (a - b);
            }
        }
    }

    pub fn cnot(&mut self, control: usize, target: usize) {
        let (c, t) = (self.mask(control), self.mask(target));
        for i in 0..self.amp.len() {
            if i & c != 0 && i & t == 0 {
                self.amp.swap(i, i | t);
            }
        }
    }

    /// Projects qubit `q` onto `|outcome>`, returns the probability and renormalises.
    pub fn project(&mut self, q: usize, outcome: bool) -> f64 {
        let m = self.mask(q);
        let mut p = 0.0;
        for (i, a) in self.amp.iter_mut().enumerate() {
            if (i & m != 0) == outcome {
                p += *a * *a;
            } else {
                *a = 0.0;
            }
        }
        let norm = p.sqrt();
        self.amp.iter_mut().for_each(|a| *a /= norm);
        p
    }

    /// Reduced density matrix of the leading `keep` qubits.
    pub fn reduced_leading(&self, keep: usize) -> Matrix {
        let dim = 1 << keep;
        let rest = 1 << (self.n - keep);
        let mut rho = vec![vec![0.0; dim]; dim];
        for (i, row) in rho.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = (0..rest).map(|e| self.amp[i * rest + e] * self.amp[j * rest + e]).sum();
            }
        }
        rho
    }
}

/// Bell vectors `Φ+, Φ-, Ψ+, Ψ-` over `|00>,|01>,|10>,|11>`.
pub fn bell_vectors() -> [[f64; 4]; 4] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [[s, 0.0, 0.0, s], [s, 0.0, 0.0, -s], [0.0, s, s, 0.0], [0.0, s, -s, 0.0]]
}

/// Probability of every Bell outcome string on `rho ⊗ rho`, where `rho` is a
/// full `2^b x 2^b` matrix. The two-copy register is ordered
/// `(copy1 q1..qb, copy2 q1..qb)`; pair `i` couples `copy1 qi` with `copy2 qi`.
/// Result index: outcome codes of pairs concatenated, pair 1 most significant.
pub fn bell_projection_distribution(rho: &Matrix, b: usize) -> Vec<f64> {
    let two = kron(rho, rho);
    let dim = 1 << (2 * b);
    let bell = bell_vectors();
    let mut out = vec![0.0; 1 << (2 * b)];
    for (index, slot) in out.iter_mut().enumerate() {
        // projector vector |B_{r1}> ⊗ ... in pair order, permuted into register order
        let mut vec = vec![0.0; dim];
        for (x, entry) in vec.iter_mut().enumerate() {
            let mut amp = 1.0;
            for i in 0..b {
                let r = (index >> (2 * (b - 1 - i))) & 3;
                let a = (x >> (2 * b - 1 - i)) & 1;
                let c = (x >> (b - 1 - i)) & 1;
                amp *= bell[r][(a << 1) | c];
            }
            *entry = amp;
        }
        *slot = (0..dim)
            .map(|x| (0..dim).map(|y| vec[x] * two[x][y] * vec[y]).sum::<f64>())
            .sum();
    }
    out
}
