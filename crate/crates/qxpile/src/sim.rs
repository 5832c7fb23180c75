//! Dense unitary construction and equivalence-up-to-global-phase checking.
//!
//! Qubit ordering convention: qubit 0 is the least-significant bit of the
//! basis index, so basis state |q_{n-1} ... q_1 q_0> has index
//! sum_i q_i * 2^i. Gate matrices follow the same rule locally: operand j
//! of a gate is bit j of the local index, which places controls (always
//! listed first) on the low bits. Both sides of every comparison use this
//! convention.

use crate::ir::{Circuit, GateKind};
use num_complex::Complex64;
use thiserror::Error;

/// Default verification threshold: circuits wider than this are recorded
/// as unchecked rather than simulated.
pub const DEFAULT_MAX_QUBITS: usize = 10;

/// Default absolute tolerance for the equivalence check.
pub const DEFAULT_ATOL: f64 = 1e-7;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SimError {
    #[error("circuit has {nb_qubits} qubits, above the {max_qubits}-qubit simulation threshold")]
    TooLarge { nb_qubits: usize, max_qubits: usize },
    #[error("dimension mismatch: {a} vs {b}")]
    DimensionMismatch { a: usize, b: usize },
}

/// Dense complex matrix of dimension `dim` x `dim`, stored column-major.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl UnitaryMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        UnitaryMatrix { dim, data }
    }

    fn zeros(dim: usize) -> Self {
        UnitaryMatrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[col * self.dim + row]
    }

    fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[col * self.dim + row] = value;
    }

    /// Matrix product `self * rhs`.
    pub fn matmul(&self, rhs: &UnitaryMatrix) -> UnitaryMatrix {
        assert_eq!(self.dim, rhs.dim);
        let dim = self.dim;
        let mut out = UnitaryMatrix::zeros(dim);
        for col in 0..dim {
            for inner in 0..dim {
                let scale = rhs.get(inner, col);
                if scale.norm_sqr() == 0.0 {
                    continue;
                }
                for row in 0..dim {
                    let v = out.get(row, col) + scale * self.get(row, inner);
                    out.set(row, col, v);
                }
            }
        }
        out
    }

    /// Elementwise scalar multiple of this matrix.
    pub fn scaled(&self, factor: Complex64) -> UnitaryMatrix {
        UnitaryMatrix {
            dim: self.dim,
            data: self.data.iter().map(|e| factor * e).collect(),
        }
    }

    /// Largest elementwise difference |self - other|.
    pub fn max_abs_diff(&self, other: &UnitaryMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest elementwise deviation from the identity of `U† U`.
    pub fn unitarity_defect(&self) -> f64 {
        let dim = self.dim;
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..dim {
                    acc += self.get(k, i).conj() * self.get(k, j);
                }
                let expect = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((acc - expect).norm());
            }
        }
        worst
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// 2x2 matrix from row-major entries.
fn m2(entries: [Complex64; 4]) -> UnitaryMatrix {
    let mut m = UnitaryMatrix::zeros(2);
    m.set(0, 0, entries[0]);
    m.set(0, 1, entries[1]);
    m.set(1, 0, entries[2]);
    m.set(1, 1, entries[3]);
    m
}

/// 4x4 matrix from row-major entries.
fn m4(entries: [Complex64; 16]) -> UnitaryMatrix {
    let mut m = UnitaryMatrix::zeros(4);
    for row in 0..4 {
        for col in 0..4 {
            m.set(row, col, entries[row * 4 + col]);
        }
    }
    m
}

/// Controlled extension of `target`: the controls occupy the `n_controls`
/// low local bits and `target` acts on the remaining high bits when every
/// control is 1.
fn controlled(target: &UnitaryMatrix, n_controls: usize) -> UnitaryMatrix {
    let mask = (1usize << n_controls) - 1;
    let dim = target.dim << n_controls;
    let mut out = UnitaryMatrix::zeros(dim);
    for col in 0..dim {
        if col & mask == mask {
            let t_in = col >> n_controls;
            for t_out in 0..target.dim {
                out.set((t_out << n_controls) | mask, col, target.get(t_out, t_in));
            }
        } else {
            out.set(col, col, c(1.0, 0.0));
        }
    }
    out
}

#[derive(Clone, Copy)]
enum Pauli {
    X,
    Y,
    Z,
}

fn pauli_entries(p: Pauli) -> [Complex64; 4] {
    match p {
        Pauli::X => [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        Pauli::Y => [c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)],
        Pauli::Z => [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
    }
}

/// exp(-i theta/2 * P_a ⊗ P_b) with `pa` on the first operand (local bit 0)
/// and `pb` on the second. Since the Pauli product squares to identity the
/// exponential is cos(theta/2) I - i sin(theta/2) (P_a ⊗ P_b).
fn two_pauli_rotation(pa: Pauli, pb: Pauli, theta: f64) -> UnitaryMatrix {
    let a = pauli_entries(pa);
    let b = pauli_entries(pb);
    let cos = c((theta / 2.0).cos(), 0.0);
    let misin = c(0.0, -(theta / 2.0).sin());
    let mut out = UnitaryMatrix::zeros(4);
    for a_out in 0..2 {
        for a_in in 0..2 {
            for b_out in 0..2 {
                for b_in in 0..2 {
                    let row = (b_out << 1) | a_out;
                    let col = (b_in << 1) | a_in;
                    let pauli = b[b_out * 2 + b_in] * a[a_out * 2 + a_in];
                    let ident = if row == col { c(1.0, 0.0) } else { c(0.0, 0.0) };
                    out.set(row, col, cos * ident + misin * pauli);
                }
            }
        }
    }
    out
}

fn rx_matrix(theta: f64) -> UnitaryMatrix {
    let (cos, sin) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    m2([c(cos, 0.0), c(0.0, -sin), c(0.0, -sin), c(cos, 0.0)])
}

fn ry_matrix(theta: f64) -> UnitaryMatrix {
    let (cos, sin) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    m2([c(cos, 0.0), c(-sin, 0.0), c(sin, 0.0), c(cos, 0.0)])
}

fn rz_matrix(theta: f64) -> UnitaryMatrix {
    m2([
        Complex64::from_polar(1.0, -theta / 2.0),
        c(0.0, 0.0),
        c(0.0, 0.0),
        Complex64::from_polar(1.0, theta / 2.0),
    ])
}

fn phase_matrix(lambda: f64) -> UnitaryMatrix {
    m2([
        c(1.0, 0.0),
        c(0.0, 0.0),
        c(0.0, 0.0),
        Complex64::from_polar(1.0, lambda),
    ])
}

fn u3_matrix(theta: f64, phi: f64, lambda: f64) -> UnitaryMatrix {
    let (cos, sin) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    m2([
        c(cos, 0.0),
        -Complex64::from_polar(sin, lambda),
        Complex64::from_polar(sin, phi),
        Complex64::from_polar(cos, phi + lambda),
    ])
}

/// The standard matrix for a gate kind at the given parameters.
pub fn kind_matrix(kind: GateKind, params: &[f64]) -> UnitaryMatrix {
    assert_eq!(
        params.len(),
        kind.param_count(),
        "parameter count mismatch for {kind}"
    );
    const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;
    match kind {
        GateKind::X => m2(pauli_entries(Pauli::X)),
        GateKind::Y => m2(pauli_entries(Pauli::Y)),
        GateKind::Z => m2(pauli_entries(Pauli::Z)),
        GateKind::H => m2([
            c(FRAC_1_SQRT_2, 0.0),
            c(FRAC_1_SQRT_2, 0.0),
            c(FRAC_1_SQRT_2, 0.0),
            c(-FRAC_1_SQRT_2, 0.0),
        ]),
        GateKind::S => phase_matrix(std::f64::consts::FRAC_PI_2),
        GateKind::Sdg => phase_matrix(-std::f64::consts::FRAC_PI_2),
        GateKind::T => phase_matrix(std::f64::consts::FRAC_PI_4),
        GateKind::Tdg => phase_matrix(-std::f64::consts::FRAC_PI_4),
        GateKind::Sx => m2([
            c(0.5, 0.5),
            c(0.5, -0.5),
            c(0.5, -0.5),
            c(0.5, 0.5),
        ]),
        GateKind::Sxdg => m2([
            c(0.5, -0.5),
            c(0.5, 0.5),
            c(0.5, 0.5),
            c(0.5, -0.5),
        ]),
        GateKind::P | GateKind::U1 => phase_matrix(params[0]),
        GateKind::Rx => rx_matrix(params[0]),
        GateKind::Ry => ry_matrix(params[0]),
        GateKind::Rz => rz_matrix(params[0]),
        GateKind::U2 => u3_matrix(std::f64::consts::FRAC_PI_2, params[0], params[1]),
        GateKind::U3 => u3_matrix(params[0], params[1], params[2]),
        GateKind::Cx => controlled(&m2(pauli_entries(Pauli::X)), 1),
        GateKind::Cy => controlled(&m2(pauli_entries(Pauli::Y)), 1),
        GateKind::Cz => controlled(&m2(pauli_entries(Pauli::Z)), 1),
        GateKind::Ch => controlled(&kind_matrix(GateKind::H, &[]), 1),
        GateKind::Csx => controlled(&kind_matrix(GateKind::Sx, &[]), 1),
        GateKind::Swap => m4([
            c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0),
            c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0),
            c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0),
            c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0),
        ]),
        GateKind::Iswap => m4([
            c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0),
            c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0), c(0.0, 0.0),
            c(0.0, 0.0), c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0),
            c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0),
        ]),
        GateKind::Ecr => m4([
            c(0.0, 0.0), c(FRAC_1_SQRT_2, 0.0), c(0.0, 0.0), c(0.0, FRAC_1_SQRT_2),
            c(FRAC_1_SQRT_2, 0.0), c(0.0, 0.0), c(0.0, -FRAC_1_SQRT_2), c(0.0, 0.0),
            c(0.0, 0.0), c(0.0, FRAC_1_SQRT_2), c(0.0, 0.0), c(FRAC_1_SQRT_2, 0.0),
            c(0.0, -FRAC_1_SQRT_2), c(0.0, 0.0), c(FRAC_1_SQRT_2, 0.0), c(0.0, 0.0),
        ]),
        GateKind::Crx => controlled(&rx_matrix(params[0]), 1),
        GateKind::Cry => controlled(&ry_matrix(params[0]), 1),
        GateKind::Crz => controlled(&rz_matrix(params[0]), 1),
        GateKind::Cp => controlled(&phase_matrix(params[0]), 1),
        GateKind::Rxx => two_pauli_rotation(Pauli::X, Pauli::X, params[0]),
        GateKind::Ryy => two_pauli_rotation(Pauli::Y, Pauli::Y, params[0]),
        GateKind::Rzz => two_pauli_rotation(Pauli::Z, Pauli::Z, params[0]),
        GateKind::Rzx => two_pauli_rotation(Pauli::Z, Pauli::X, params[0]),
        GateKind::Ccx => controlled(&m2(pauli_entries(Pauli::X)), 2),
        GateKind::Ccz => controlled(&m2(pauli_entries(Pauli::Z)), 2),
        GateKind::Cswap => controlled(&kind_matrix(GateKind::Swap, &[]), 1),
    }
}

/// Columns above this size are processed in parallel.
const PAR_COLUMN_THRESHOLD: usize = 128;

fn for_each_column(full: &mut UnitaryMatrix, f: impl Fn(&mut [Complex64]) + Sync + Send) {
    let dim = full.dim;
    if dim >= PAR_COLUMN_THRESHOLD {
        use rayon::prelude::*;
        full.data.par_chunks_mut(dim).for_each(f);
    } else {
        full.data.chunks_mut(dim).for_each(f);
    }
}

fn apply_1q(full: &mut UnitaryMatrix, gate: &UnitaryMatrix, position: usize) {
    let dim = full.dim;
    let (g00, g01) = (gate.get(0, 0), gate.get(0, 1));
    let (g10, g11) = (gate.get(1, 0), gate.get(1, 1));
    let stride = 1usize << position;
    for_each_column(full, |column| {
        let mut block = 0;
        while block < dim {
            for i in block..block + stride {
                let a = column[i];
                let b = column[i + stride];
                column[i] = g00 * a + g01 * b;
                column[i + stride] = g10 * a + g11 * b;
            }
            block += 2 * stride;
        }
    });
}

/// Pack the spectator bits of `m` around zeroed operand bits at the sorted
/// positions.
#[inline]
fn insert_zero_bits(mut idx: usize, sorted_positions: &[usize]) -> usize {
    for &pos in sorted_positions {
        let low = idx & ((1 << pos) - 1);
        idx = ((idx >> pos) << (pos + 1)) | low;
    }
    idx
}

fn apply_2q(full: &mut UnitaryMatrix, gate: &UnitaryMatrix, positions: &[usize]) {
    let dim = full.dim;
    let mut g = [Complex64::new(0.0, 0.0); 16];
    for row in 0..4 {
        for col in 0..4 {
            g[row * 4 + col] = gate.get(row, col);
        }
    }
    let s0 = 1usize << positions[0];
    let s1 = 1usize << positions[1];
    let mut sorted = [positions[0], positions[1]];
    sorted.sort_unstable();
    let n_base = dim >> 2;
    for_each_column(full, |column| {
        for m in 0..n_base {
            let base = insert_zero_bits(m, &sorted);
            let amp = [
                column[base],
                column[base + s0],
                column[base + s1],
                column[base + s0 + s1],
            ];
            for (r, &off) in [0, s0, s1, s0 + s1].iter().enumerate() {
                column[base + off] = g[r * 4] * amp[0]
                    + g[r * 4 + 1] * amp[1]
                    + g[r * 4 + 2] * amp[2]
                    + g[r * 4 + 3] * amp[3];
            }
        }
    });
}

/// Apply `gate` (a 2^k x 2^k matrix) at qubit `positions` to every column
/// of `full`, i.e. compute `embed(gate) * full` in place. Bit j of the
/// gate's local index lives at positions[j].
fn apply_gate(full: &mut UnitaryMatrix, gate: &UnitaryMatrix, positions: &[usize]) {
    let k = positions.len();
    debug_assert_eq!(gate.dim, 1 << k);
    match k {
        1 => return apply_1q(full, gate, positions[0]),
        2 => return apply_2q(full, gate, positions),
        _ => {}
    }

    let dim = full.dim;
    let local_dim = 1usize << k;
    let mut offsets = [0usize; 8];
    for (l, slot) in offsets[..local_dim].iter_mut().enumerate() {
        let mut off = 0;
        for (j, &pos) in positions.iter().enumerate() {
            if (l >> j) & 1 == 1 {
                off |= 1 << pos;
            }
        }
        *slot = off;
    }
    let mut sorted = [0usize; 3];
    sorted[..k].copy_from_slice(positions);
    sorted[..k].sort_unstable();
    let sorted = &sorted[..k];
    let n_base = dim >> k;
    let gate = gate.clone();
    for_each_column(full, |column| {
        let mut scratch = [Complex64::new(0.0, 0.0); 8];
        for m in 0..n_base {
            let base = insert_zero_bits(m, sorted);
            for (slot, &off) in scratch[..local_dim].iter_mut().zip(&offsets[..local_dim]) {
                *slot = column[base + off];
            }
            for (r, &off) in offsets[..local_dim].iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for (l, &amp) in scratch[..local_dim].iter().enumerate() {
                    acc += gate.get(r, l) * amp;
                }
                column[base + off] = acc;
            }
        }
    });
}

/// Ordered product of the circuit's gate matrices embedded at their
/// operand positions: gates apply left to right, so the result is
/// G_last * ... * G_first.
pub fn circuit_unitary(circuit: &Circuit, max_qubits: usize) -> Result<UnitaryMatrix, SimError> {
    if circuit.nb_qubits() > max_qubits {
        return Err(SimError::TooLarge {
            nb_qubits: circuit.nb_qubits(),
            max_qubits,
        });
    }
    let dim = 1usize << circuit.nb_qubits();
    let mut full = UnitaryMatrix::identity(dim);
    for gate in circuit.gates() {
        let matrix = kind_matrix(gate.kind(), gate.params());
        apply_gate(&mut full, &matrix, gate.qubits());
    }
    Ok(full)
}

/// True iff `v` equals `phi * u` for some unit-modulus scalar `phi`, within
/// `atol` elementwise. The phase reference is taken at the largest-magnitude
/// entry of `u` to stay away from division by near-zero.
pub fn equal_up_to_global_phase(
    u: &UnitaryMatrix,
    v: &UnitaryMatrix,
    atol: f64,
) -> Result<bool, SimError> {
    if u.dim != v.dim {
        return Err(SimError::DimensionMismatch { a: u.dim, b: v.dim });
    }
    let (mut best, mut best_norm) = (0usize, 0.0f64);
    for (i, entry) in u.data.iter().enumerate() {
        let n = entry.norm();
        if n > best_norm {
            best_norm = n;
            best = i;
        }
    }
    if best_norm <= atol {
        let close = u
            .data
            .iter()
            .zip(&v.data)
            .all(|(a, b)| (a - b).norm() <= atol);
        return Ok(close);
    }
    let raw = v.data[best] / u.data[best];
    let norm = raw.norm();
    if norm == 0.0 {
        return Ok(false);
    }
    let phi = raw / norm;
    let close = u
        .data
        .iter()
        .zip(&v.data)
        .all(|(a, b)| (phi * a - b).norm() <= atol);
    Ok(close)
}

/// Smallest achievable elementwise deviation between `v` and `phi * u`
/// with the phase reference taken at the largest-magnitude entry of `u`.
/// Useful for reporting how far two circuits are from equivalent.
pub fn global_phase_deviation(u: &UnitaryMatrix, v: &UnitaryMatrix) -> Result<f64, SimError> {
    if u.dim != v.dim {
        return Err(SimError::DimensionMismatch { a: u.dim, b: v.dim });
    }
    let (mut best, mut best_norm) = (0usize, 0.0f64);
    for (i, entry) in u.data.iter().enumerate() {
        let n = entry.norm();
        if n > best_norm {
            best_norm = n;
            best = i;
        }
    }
    if best_norm == 0.0 {
        return Ok(u.max_abs_diff(v));
    }
    let raw = v.data[best] / u.data[best];
    let norm = raw.norm();
    if norm == 0.0 {
        return Ok(u.max_abs_diff(v));
    }
    let phi = raw / norm;
    Ok(u.scaled(phi).max_abs_diff(v))
}

/// Outcome of a transpilation correctness check. `correct` is meaningful
/// only when `checked` is true; `checked` is false when the circuit
/// exceeded the verification qubit threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckResult {
    pub checked: bool,
    pub correct: bool,
}

/// Compare an input circuit against its transpiled output up to global
/// phase. All failure modes are encoded in the result.
pub fn check_transpilation(
    input: &Circuit,
    output: &Circuit,
    atol: f64,
    max_qubits: usize,
) -> CheckResult {
    if input.nb_qubits() != output.nb_qubits() {
        return CheckResult {
            checked: true,
            correct: false,
        };
    }
    if input.nb_qubits() > max_qubits {
        return CheckResult {
            checked: false,
            correct: false,
        };
    }
    let u = circuit_unitary(input, max_qubits).expect("within threshold");
    let v = circuit_unitary(output, max_qubits).expect("same width");
    let correct = equal_up_to_global_phase(&u, &v, atol).expect("same dimension");
    CheckResult {
        checked: true,
        correct,
    }
}
