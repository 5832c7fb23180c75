//! Circuit intermediate representation shared by the parser, generators,
//! transpilation strategies, simulator, and benchmark harness.
//!
//! The gate vocabulary is a closed set of 36 kinds. Angles are stored in
//! radians. Controlled kinds list their control(s) first in the operand
//! order.

use thiserror::Error;

/// The canonical gate vocabulary. No other kinds exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    // 1-qubit, no parameters
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    Sx,
    Sxdg,
    // 1-qubit, parameterized
    P,
    Rx,
    Ry,
    Rz,
    U1,
    U2,
    U3,
    // 2-qubit, no parameters
    Cx,
    Cy,
    Cz,
    Ch,
    Swap,
    Iswap,
    Ecr,
    Csx,
    // 2-qubit, one parameter
    Crx,
    Cry,
    Crz,
    Cp,
    Rxx,
    Ryy,
    Rzz,
    Rzx,
    // 3-qubit, no parameters
    Ccx,
    Ccz,
    Cswap,
}

impl GateKind {
    /// Every kind, in canonical order.
    pub const ALL: [GateKind; 36] = [
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::H,
        GateKind::S,
        GateKind::Sdg,
        GateKind::T,
        GateKind::Tdg,
        GateKind::Sx,
        GateKind::Sxdg,
        GateKind::P,
        GateKind::Rx,
        GateKind::Ry,
        GateKind::Rz,
        GateKind::U1,
        GateKind::U2,
        GateKind::U3,
        GateKind::Cx,
        GateKind::Cy,
        GateKind::Cz,
        GateKind::Ch,
        GateKind::Swap,
        GateKind::Iswap,
        GateKind::Ecr,
        GateKind::Csx,
        GateKind::Crx,
        GateKind::Cry,
        GateKind::Crz,
        GateKind::Cp,
        GateKind::Rxx,
        GateKind::Ryy,
        GateKind::Rzz,
        GateKind::Rzx,
        GateKind::Ccx,
        GateKind::Ccz,
        GateKind::Cswap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::H => "h",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::Sx => "sx",
            GateKind::Sxdg => "sxdg",
            GateKind::P => "p",
            GateKind::Rx => "rx",
            GateKind::Ry => "ry",
            GateKind::Rz => "rz",
            GateKind::U1 => "u1",
            GateKind::U2 => "u2",
            GateKind::U3 => "u3",
            GateKind::Cx => "cx",
            GateKind::Cy => "cy",
            GateKind::Cz => "cz",
            GateKind::Ch => "ch",
            GateKind::Swap => "swap",
            GateKind::Iswap => "iswap",
            GateKind::Ecr => "ecr",
            GateKind::Csx => "csx",
            GateKind::Crx => "crx",
            GateKind::Cry => "cry",
            GateKind::Crz => "crz",
            GateKind::Cp => "cp",
            GateKind::Rxx => "rxx",
            GateKind::Ryy => "ryy",
            GateKind::Rzz => "rzz",
            GateKind::Rzx => "rzx",
            GateKind::Ccx => "ccx",
            GateKind::Ccz => "ccz",
            GateKind::Cswap => "cswap",
        }
    }

    /// Number of qubit operands (1, 2, or 3).
    pub fn arity(self) -> usize {
        match self {
            GateKind::X
            | GateKind::Y
            | GateKind::Z
            | GateKind::H
            | GateKind::S
            | GateKind::Sdg
            | GateKind::T
            | GateKind::Tdg
            | GateKind::Sx
            | GateKind::Sxdg
            | GateKind::P
            | GateKind::Rx
            | GateKind::Ry
            | GateKind::Rz
            | GateKind::U1
            | GateKind::U2
            | GateKind::U3 => 1,
            GateKind::Cx
            | GateKind::Cy
            | GateKind::Cz
            | GateKind::Ch
            | GateKind::Swap
            | GateKind::Iswap
            | GateKind::Ecr
            | GateKind::Csx
            | GateKind::Crx
            | GateKind::Cry
            | GateKind::Crz
            | GateKind::Cp
            | GateKind::Rxx
            | GateKind::Ryy
            | GateKind::Rzz
            | GateKind::Rzx => 2,
            GateKind::Ccx | GateKind::Ccz | GateKind::Cswap => 3,
        }
    }

    /// Number of real angle parameters.
    pub fn param_count(self) -> usize {
        match self {
            GateKind::P
            | GateKind::Rx
            | GateKind::Ry
            | GateKind::Rz
            | GateKind::U1
            | GateKind::Crx
            | GateKind::Cry
            | GateKind::Crz
            | GateKind::Cp
            | GateKind::Rxx
            | GateKind::Ryy
            | GateKind::Rzz
            | GateKind::Rzx => 1,
            GateKind::U2 => 2,
            GateKind::U3 => 3,
            _ => 0,
        }
    }

    /// Look up a kind by name. The alias `u` is normalized to `u3`.
    pub fn from_name(name: &str) -> Option<GateKind> {
        if name == "u" {
            return Some(GateKind::U3);
        }
        GateKind::ALL.iter().copied().find(|k| k.name() == name)
    }
}

impl std::fmt::Display for GateKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IrError {
    #[error("circuit needs at least one qubit")]
    NoQubits,
    #[error("gate {kind} takes {expected} qubit operands, got {got}")]
    ArityMismatch {
        kind: GateKind,
        expected: usize,
        got: usize,
    },
    #[error("gate {kind} takes {expected} parameters, got {got}")]
    ParamCountMismatch {
        kind: GateKind,
        expected: usize,
        got: usize,
    },
    #[error("duplicate qubit operand {qubit} on {kind}")]
    DuplicateQubit { kind: GateKind, qubit: usize },
    #[error("qubit index {qubit} out of range for {nb_qubits}-qubit circuit")]
    QubitOutOfRange { qubit: usize, nb_qubits: usize },
    #[error("non-finite parameter on {kind}")]
    NonFiniteParam { kind: GateKind },
}

/// One gate application: a kind, its qubit operands, and its angles.
#[derive(Debug, Clone, PartialEq)]
pub struct GateInstance {
    kind: GateKind,
    qubits: Vec<usize>,
    params: Vec<f64>,
}

impl GateInstance {
    /// Build a validated instance. Operand count must match the kind's
    /// arity, operands must be distinct, parameters must match the kind's
    /// parameter count and be finite.
    pub fn new(kind: GateKind, qubits: Vec<usize>, params: Vec<f64>) -> Result<Self, IrError> {
        if qubits.len() != kind.arity() {
            return Err(IrError::ArityMismatch {
                kind,
                expected: kind.arity(),
                got: qubits.len(),
            });
        }
        for (i, &q) in qubits.iter().enumerate() {
            if qubits[..i].contains(&q) {
                return Err(IrError::DuplicateQubit { kind, qubit: q });
            }
        }
        if params.len() != kind.param_count() {
            return Err(IrError::ParamCountMismatch {
                kind,
                expected: kind.param_count(),
                got: params.len(),
            });
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(IrError::NonFiniteParam { kind });
        }
        Ok(GateInstance {
            kind,
            qubits,
            params,
        })
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }
}

/// An ordered list of gate instances over `nb_qubits` qubits.
///
/// `name` is a descriptive label and `circuit_type` a tag string used to
/// group benchmark results (e.g. "PureRandom", "VQE", "SDKGate"); neither
/// participates in structural comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    nb_qubits: usize,
    gates: Vec<GateInstance>,
    pub name: String,
    pub circuit_type: String,
}

impl Circuit {
    pub fn new(
        nb_qubits: usize,
        name: impl Into<String>,
        circuit_type: impl Into<String>,
    ) -> Result<Self, IrError> {
        if nb_qubits == 0 {
            return Err(IrError::NoQubits);
        }
        Ok(Circuit {
            nb_qubits,
            gates: Vec::new(),
            name: name.into(),
            circuit_type: circuit_type.into(),
        })
    }

    pub fn nb_qubits(&self) -> usize {
        self.nb_qubits
    }

    pub fn gates(&self) -> &[GateInstance] {
        &self.gates
    }

    /// Append a gate, checking its operands against this circuit's width.
    pub fn push(&mut self, gate: GateInstance) -> Result<(), IrError> {
        if let Some(&q) = gate.qubits.iter().find(|&&q| q >= self.nb_qubits) {
            return Err(IrError::QubitOutOfRange {
                qubit: q,
                nb_qubits: self.nb_qubits,
            });
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Convenience: validate and append in one call.
    pub fn push_gate(
        &mut self,
        kind: GateKind,
        qubits: Vec<usize>,
        params: Vec<f64>,
    ) -> Result<(), IrError> {
        self.push(GateInstance::new(kind, qubits, params)?)
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Length of the longest qubit-timeline chain.
    ///
    /// Each gate lands one level above the deepest level already occupied
    /// on any of its operands.
    pub fn depth(&self) -> usize {
        let mut level = vec![0usize; self.nb_qubits];
        for gate in &self.gates {
            let layer = 1 + gate.qubits.iter().map(|&q| level[q]).max().unwrap_or(0);
            for &q in &gate.qubits {
                level[q] = layer;
            }
        }
        level.into_iter().max().unwrap_or(0)
    }

    pub fn gatecount(&self) -> usize {
        self.gates.len()
    }

    /// Qubit indices that appear in no gate.
    pub fn idle_qubits(&self) -> Vec<usize> {
        let mut touched = vec![false; self.nb_qubits];
        for gate in &self.gates {
            for &q in &gate.qubits {
                touched[q] = true;
            }
        }
        (0..self.nb_qubits).filter(|&q| !touched[q]).collect()
    }

    /// True iff the circuits have the same width, the same gate sequence
    /// (kind and operands), and pairwise parameters within `param_tol`.
    /// Names and type tags are ignored.
    pub fn structurally_equal(&self, other: &Circuit, param_tol: f64) -> bool {
        if self.nb_qubits != other.nb_qubits || self.gates.len() != other.gates.len() {
            return false;
        }
        self.gates.iter().zip(&other.gates).all(|(a, b)| {
            a.kind == b.kind
                && a.qubits == b.qubits
                && a.params
                    .iter()
                    .zip(&b.params)
                    .all(|(x, y)| (x - y).abs() <= param_tol)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gate(kind: GateKind, qubits: &[usize], params: &[f64]) -> GateInstance {
        GateInstance::new(kind, qubits.to_vec(), params.to_vec()).unwrap()
    }

    fn circuit(nb_qubits: usize, gates: &[(GateKind, &[usize], &[f64])]) -> Circuit {
        let mut c = Circuit::new(nb_qubits, "test", "Test").unwrap();
        for (k, q, p) in gates {
            c.push(gate(*k, q, p)).unwrap();
        }
        c
    }

    #[test]
    fn vocabulary_counts() {
        assert_eq!(GateKind::ALL.len(), 36);
        let one_q = GateKind::ALL.iter().filter(|k| k.arity() == 1).count();
        let two_q = GateKind::ALL.iter().filter(|k| k.arity() == 2).count();
        let three_q = GateKind::ALL.iter().filter(|k| k.arity() == 3).count();
        assert_eq!((one_q, two_q, three_q), (17, 16, 3));
    }

    #[test]
    fn name_round_trip_and_alias() {
        for kind in GateKind::ALL {
            assert_eq!(GateKind::from_name(kind.name()), Some(kind));
        }
        assert_eq!(GateKind::from_name("u"), Some(GateKind::U3));
        assert_eq!(GateKind::from_name("c4x"), None);
    }

    #[test]
    fn depth_empty_circuit() {
        let c = Circuit::new(1, "empty", "Test").unwrap();
        assert_eq!(c.depth(), 0);
        assert_eq!(c.gatecount(), 0);
    }

    #[test]
    fn depth_serial_chain() {
        let c = circuit(2, &[(GateKind::H, &[0], &[]), (GateKind::Cx, &[0, 1], &[])]);
        assert_eq!(c.depth(), 2);
    }

    #[test]
    fn depth_hand_scheduled_dag() {
        // h q0 and h q1 share layer 1, cx lands at 2, the final h at 3.
        let c = circuit(
            2,
            &[
                (GateKind::H, &[0], &[]),
                (GateKind::H, &[1], &[]),
                (GateKind::Cx, &[0, 1], &[]),
                (GateKind::H, &[0], &[]),
            ],
        );
        assert_eq!(c.depth(), 3);
        assert_eq!(c.gatecount(), 4);
    }

    #[test]
    fn idle_qubits_reported() {
        let c = circuit(2, &[(GateKind::H, &[0], &[])]);
        assert_eq!(c.idle_qubits(), vec![1]);
        let c = circuit(2, &[(GateKind::H, &[0], &[]), (GateKind::X, &[1], &[])]);
        assert!(c.idle_qubits().is_empty());
    }

    #[test]
    fn structural_equality() {
        let a = circuit(1, &[(GateKind::Rx, &[0], &[1.0])]);
        let b = circuit(1, &[(GateKind::Rx, &[0], &[1.0 + 1e-15])]);
        assert!(a.structurally_equal(&a, 0.0));
        assert!(a.structurally_equal(&b, 1e-12));
        assert!(!a.structurally_equal(&b, 0.0));
        let h = circuit(1, &[(GateKind::H, &[0], &[])]);
        let x = circuit(1, &[(GateKind::X, &[0], &[])]);
        assert!(!h.structurally_equal(&x, 1e-9));
    }

    #[test]
    fn structural_equality_ignores_labels() {
        let a = circuit(2, &[(GateKind::Cx, &[0, 1], &[])]);
        let b = a.clone().renamed("other");
        assert!(a.structurally_equal(&b, 0.0));
        assert_eq!(a.depth(), b.depth());
        assert_eq!(a.gatecount(), b.gatecount());
    }

    #[test]
    fn validation_errors() {
        assert_eq!(Circuit::new(0, "", "").unwrap_err(), IrError::NoQubits);
        assert!(matches!(
            GateInstance::new(GateKind::Cx, vec![0], vec![]),
            Err(IrError::ArityMismatch { .. })
        ));
        assert!(matches!(
            GateInstance::new(GateKind::Cx, vec![0, 0], vec![]),
            Err(IrError::DuplicateQubit { .. })
        ));
        assert!(matches!(
            GateInstance::new(GateKind::Rx, vec![0], vec![]),
            Err(IrError::ParamCountMismatch { .. })
        ));
        assert!(matches!(
            GateInstance::new(GateKind::Rx, vec![0], vec![f64::NAN]),
            Err(IrError::NonFiniteParam { .. })
        ));
        let mut c = Circuit::new(2, "", "").unwrap();
        assert!(matches!(
            c.push(gate(GateKind::H, &[2], &[])),
            Err(IrError::QubitOutOfRange { .. })
        ));
    }

    #[test]
    fn depth_bounded_by_gatecount() {
        // Serial circuit on one qubit: depth == gatecount.
        let mut c = Circuit::new(1, "", "").unwrap();
        for _ in 0..7 {
            c.push(gate(GateKind::T, &[0], &[])).unwrap();
        }
        assert_eq!(c.depth(), c.gatecount());

        // Fully parallel layer: depth 1, gatecount n.
        let mut c = Circuit::new(5, "", "").unwrap();
        for q in 0..5 {
            c.push(gate(GateKind::H, &[q], &[])).unwrap();
        }
        assert_eq!(c.depth(), 1);
        assert!(c.depth() <= c.gatecount());
    }

    #[test]
    fn structural_equality_is_an_equivalence_at_zero_tol() {
        for seed in 0..50u64 {
            let a = crate::randgen::pure_random(seed, None, None).unwrap();
            let b = a.clone().renamed("copy");
            let c = b.clone();
            assert!(a.structurally_equal(&a, 0.0));
            assert_eq!(
                a.structurally_equal(&b, 0.0),
                b.structurally_equal(&a, 0.0)
            );
            assert!(a.structurally_equal(&b, 0.0) && b.structurally_equal(&c, 0.0));
            assert!(a.structurally_equal(&c, 0.0));

            let other = crate::randgen::pure_random(seed + 1000, None, None).unwrap();
            assert_eq!(
                a.structurally_equal(&other, 0.0),
                other.structurally_equal(&a, 0.0)
            );
        }
    }

    #[test]
    fn appending_gate_bumps_counts_by_at_most_one() {
        let mut c = circuit(3, &[(GateKind::H, &[0], &[]), (GateKind::Cx, &[1, 2], &[])]);
        for kind_q in [
            (GateKind::X, vec![0]),
            (GateKind::Cz, vec![0, 2]),
            (GateKind::Ccx, vec![0, 1, 2]),
        ] {
            let before_depth = c.depth();
            let before_count = c.gatecount();
            c.push(GateInstance::new(kind_q.0, kind_q.1, vec![]).unwrap())
                .unwrap();
            assert_eq!(c.gatecount(), before_count + 1);
            let delta = c.depth() - before_depth;
            assert!(delta == 0 || delta == 1);
        }
    }
}
