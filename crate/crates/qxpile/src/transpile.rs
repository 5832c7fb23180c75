//! The three transpilation strategies and the shared rewrite engine.
//!
//! * `one_to_one` copies gate for gate and errors at the first gate kind
//!   the target dialect does not support.
//! * `hybrid` passes supported gates through unchanged and decomposes
//!   unsupported ones: multi-qubit kinds through the rule database,
//!   single-qubit kinds through ZYZ synthesis into the hub basis.
//! * `hub_and_spokes` routes through an intermediate hub dialect with a
//!   hybrid pass on each leg.

use crate::dialect::{Dialect, RuleDatabase};
use crate::ir::{Circuit, GateInstance, GateKind};
use crate::sim::{self, UnitaryMatrix};
use num_complex::Complex64;
use std::fmt;
use thiserror::Error;

/// Default bound on recursive rule expansion. The built-in rules are
/// shallow; the bound guards user-supplied rule databases.
pub const DEFAULT_EXPANSION_DEPTH: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TranspileErrorKind {
    UnsupportedGate,
    NoRule,
    DepthExceeded,
}

impl TranspileErrorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TranspileErrorKind::UnsupportedGate => "unsupported_gate",
            TranspileErrorKind::NoRule => "no_rule",
            TranspileErrorKind::DepthExceeded => "depth_exceeded",
        }
    }
}

impl fmt::Display for TranspileErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which pass of the pipeline failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Direct,
    HubLeg1,
    HubLeg2,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Direct => "direct",
            Stage::HubLeg1 => "hub_leg_1",
            Stage::HubLeg2 => "hub_leg_2",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A transpilation failure. `gate` identifies the first offending gate
/// kind in circuit order.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub struct TranspileError {
    pub kind: TranspileErrorKind,
    pub gate: GateKind,
    pub stage: Stage,
}

impl fmt::Display for TranspileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.kind, self.gate)?;
        if self.stage != Stage::Direct {
            write!(f, " ({})", self.stage)?;
        }
        Ok(())
    }
}

impl TranspileError {
    fn direct(kind: TranspileErrorKind, gate: GateKind) -> Self {
        TranspileError {
            kind,
            gate,
            stage: Stage::Direct,
        }
    }

    fn at_stage(mut self, stage: Stage) -> Self {
        self.stage = stage;
        self
    }
}

/// Gate-for-gate copy into the target dialect; never rewrites.
pub fn one_to_one(circuit: &Circuit, target: &Dialect) -> Result<Circuit, TranspileError> {
    if let Some(gate) = circuit
        .gates()
        .iter()
        .find(|g| !target.supports(g.kind()))
    {
        return Err(TranspileError::direct(
            TranspileErrorKind::UnsupportedGate,
            gate.kind(),
        ));
    }
    Ok(circuit.clone())
}

/// ZYZ Euler angles with explicit global phase: the source matrix equals
/// e^{i alpha} Rz(phi) Ry(theta) Rz(lam).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZyzAngles {
    pub theta: f64,
    pub phi: f64,
    pub lam: f64,
    pub alpha: f64,
}

#[derive(Debug, Error, PartialEq)]
#[error("matrix is not unitary (defect {defect:.3e})")]
pub struct NotUnitary {
    pub defect: f64,
}

/// Decompose a 2x2 unitary into ZYZ Euler angles.
///
/// In the degenerate case (vanishing off-diagonal or diagonal) lam is set
/// to 0 and all z-rotation folds into phi.
pub fn zyz_decompose(u: &UnitaryMatrix) -> Result<ZyzAngles, NotUnitary> {
    assert_eq!(u.dim(), 2, "zyz_decompose takes a 2x2 matrix");
    let defect = u.unitarity_defect();
    if defect > 1e-10 {
        return Err(NotUnitary { defect });
    }

    let det = u.get(0, 0) * u.get(1, 1) - u.get(0, 1) * u.get(1, 0);
    let alpha = det.arg() / 2.0;
    let inv_phase = Complex64::from_polar(1.0, -alpha);
    let v00 = inv_phase * u.get(0, 0);
    let v10 = inv_phase * u.get(1, 0);

    const DEGENERATE: f64 = 1e-12;
    if v10.norm() <= DEGENERATE {
        // theta ~ 0: purely diagonal
        Ok(ZyzAngles {
            theta: 0.0,
            phi: -2.0 * v00.arg(),
            lam: 0.0,
            alpha,
        })
    } else if v00.norm() <= DEGENERATE {
        // theta ~ pi: purely anti-diagonal
        Ok(ZyzAngles {
            theta: std::f64::consts::PI,
            phi: 2.0 * v10.arg(),
            lam: 0.0,
            alpha,
        })
    } else {
        Ok(ZyzAngles {
            theta: 2.0 * v10.norm().atan2(v00.norm()),
            phi: v10.arg() - v00.arg(),
            lam: -v00.arg() - v10.arg(),
            alpha,
        })
    }
}

fn expand_gate(
    gate: &GateInstance,
    target: &Dialect,
    rules: &RuleDatabase,
    depth: usize,
    out: &mut Circuit,
) -> Result<(), TranspileError> {
    if target.supports(gate.kind()) {
        out.push(gate.clone()).expect("operands already validated");
        return Ok(());
    }
    if depth == 0 {
        return Err(TranspileError::direct(
            TranspileErrorKind::DepthExceeded,
            gate.kind(),
        ));
    }
    if gate.kind().arity() == 1 {
        // Universal single-qubit fallback: synthesize into the hub basis,
        // dropping the global phase.
        let matrix = sim::kind_matrix(gate.kind(), gate.params());
        let angles = zyz_decompose(&matrix).expect("gate matrices are unitary");
        let q = gate.qubits()[0];
        for (kind, angle) in [
            (GateKind::Rz, angles.lam),
            (GateKind::Ry, angles.theta),
            (GateKind::Rz, angles.phi),
        ] {
            out.push_gate(kind, vec![q], vec![angle])
                .expect("operands already validated");
        }
        return Ok(());
    }
    let rule = rules.get(gate.kind()).ok_or_else(|| {
        TranspileError::direct(TranspileErrorKind::NoRule, gate.kind())
    })?;
    for produced in rule.instantiate(gate) {
        expand_gate(&produced, target, rules, depth - 1, out)?;
    }
    Ok(())
}

/// Rewrite a circuit so every gate kind lies in the target dialect.
/// Supported kinds are copied; unsupported single-qubit kinds go through
/// ZYZ synthesis; unsupported multi-qubit kinds expand through the rule
/// database recursively within `max_expansion_depth`.
pub fn rebase(
    circuit: &Circuit,
    target: &Dialect,
    rules: &RuleDatabase,
    max_expansion_depth: usize,
) -> Result<Circuit, TranspileError> {
    assert!(max_expansion_depth >= 1, "expansion depth must be >= 1");
    let mut out = Circuit::new(
        circuit.nb_qubits(),
        circuit.name.clone(),
        circuit.circuit_type.clone(),
    )
    .expect("input circuit is valid");
    for gate in circuit.gates() {
        expand_gate(gate, target, rules, max_expansion_depth, &mut out)?;
    }
    Ok(out)
}

/// One-to-one pass-through with gate decomposition for unsupported gates.
pub fn hybrid(
    circuit: &Circuit,
    target: &Dialect,
    rules: &RuleDatabase,
) -> Result<Circuit, TranspileError> {
    rebase(circuit, target, rules, DEFAULT_EXPANSION_DEPTH)
}

/// Transpilation routed through an intermediate hub dialect, with a
/// hybrid pass on each leg. Errors carry the leg they occurred on.
pub fn hub_and_spokes(
    circuit: &Circuit,
    hub: &Dialect,
    target: &Dialect,
    rules: &RuleDatabase,
) -> Result<Circuit, TranspileError> {
    let through_hub =
        hybrid(circuit, hub, rules).map_err(|e| e.at_stage(Stage::HubLeg1))?;
    hybrid(&through_hub, target, rules).map_err(|e| e.at_stage(Stage::HubLeg2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dialect::{builtin_dialect, builtin_rules, load_dialect, RewriteRule, TemplateGate};
    use crate::sim::{circuit_unitary, equal_up_to_global_phase, kind_matrix};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;
    use std::f64::consts::PI;

    fn bell() -> Circuit {
        let mut c = Circuit::new(2, "bell", "Test").unwrap();
        c.push_gate(GateKind::H, vec![0], vec![]).unwrap();
        c.push_gate(GateKind::Cx, vec![0, 1], vec![]).unwrap();
        c
    }

    fn single(kind: GateKind, params: Vec<f64>) -> Circuit {
        let mut c = Circuit::new(kind.arity(), "single", "Test").unwrap();
        c.push_gate(kind, (0..kind.arity()).collect(), params).unwrap();
        c
    }

    fn zyz_reconstruct(angles: &ZyzAngles) -> UnitaryMatrix {
        let rz_phi = kind_matrix(GateKind::Rz, &[angles.phi]);
        let ry = kind_matrix(GateKind::Ry, &[angles.theta]);
        let rz_lam = kind_matrix(GateKind::Rz, &[angles.lam]);
        rz_phi
            .matmul(&ry.matmul(&rz_lam))
            .scaled(Complex64::from_polar(1.0, angles.alpha))
    }

    #[test]
    fn one_to_one_copies_supported_circuits() {
        let cascade = builtin_dialect("cascade").unwrap();
        let out = one_to_one(&bell(), &cascade).unwrap();
        assert!(out.structurally_equal(&bell(), 0.0));
    }

    #[test]
    fn one_to_one_errors_on_unsupported_kind() {
        let borealis = builtin_dialect("borealis").unwrap();
        let err = one_to_one(&single(GateKind::Ch, vec![]), &borealis).unwrap_err();
        assert_eq!(
            err,
            TranspileError {
                kind: TranspileErrorKind::UnsupportedGate,
                gate: GateKind::Ch,
                stage: Stage::Direct,
            }
        );
        assert_eq!(err.to_string(), "unsupported_gate ch");
    }

    #[test]
    fn zyz_identity_hits_the_tie_break() {
        let angles = zyz_decompose(&UnitaryMatrix::identity(2)).unwrap();
        assert_eq!(angles.theta, 0.0);
        assert_eq!(angles.phi, 0.0);
        assert_eq!(angles.lam, 0.0);
        assert_eq!(angles.alpha, 0.0);
    }

    #[test]
    fn zyz_reconstructs_hadamard() {
        let h = kind_matrix(GateKind::H, &[]);
        let angles = zyz_decompose(&h).unwrap();
        assert!(zyz_reconstruct(&angles).max_abs_diff(&h) < 1e-10);
    }

    #[test]
    fn zyz_diagonal_takes_theta_zero_branch() {
        let rz = kind_matrix(GateKind::Rz, &[1.3]);
        let angles = zyz_decompose(&rz).unwrap();
        assert_eq!(angles.theta, 0.0);
        assert_eq!(angles.lam, 0.0);
        assert!(zyz_reconstruct(&angles).max_abs_diff(&rz) < 1e-10);
    }

    #[test]
    fn zyz_reconstructs_random_unitaries() {
        let mut rng = ChaCha12Rng::seed_from_u64(31);
        for _ in 0..200 {
            let u3 = kind_matrix(
                GateKind::U3,
                &[
                    rng.gen_range(0.0..2.0 * PI),
                    rng.gen_range(0.0..2.0 * PI),
                    rng.gen_range(0.0..2.0 * PI),
                ],
            );
            let u = u3.scaled(Complex64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI)));
            let angles = zyz_decompose(&u).unwrap();
            assert!(
                zyz_reconstruct(&angles).max_abs_diff(&u) < 1e-10,
                "reconstruction drifted"
            );
        }
        // anti-diagonal branch
        let x = kind_matrix(GateKind::X, &[]);
        let angles = zyz_decompose(&x).unwrap();
        assert_eq!(angles.theta, PI);
        assert!(zyz_reconstruct(&angles).max_abs_diff(&x) < 1e-10);
    }

    #[test]
    fn zyz_rejects_non_unitary() {
        let m = UnitaryMatrix::identity(2).scaled(Complex64::new(2.0, 0.0));
        assert!(zyz_decompose(&m).is_err());
    }

    #[test]
    fn rebase_copies_supported_gates() {
        let cascade = builtin_dialect("cascade").unwrap();
        let rules = builtin_rules();
        let c = single(GateKind::Swap, vec![]);
        let out = rebase(&c, &cascade, &rules, DEFAULT_EXPANSION_DEPTH).unwrap();
        assert!(out.structurally_equal(&c, 0.0));
    }

    #[test]
    fn rebase_expands_ch_for_borealis() {
        let borealis = builtin_dialect("borealis").unwrap();
        let rules = builtin_rules();
        let c = single(GateKind::Ch, vec![]);
        let out = rebase(&c, &borealis, &rules, DEFAULT_EXPANSION_DEPTH).unwrap();
        assert_eq!(out.gatecount(), 7);
        let u = circuit_unitary(&c, 10).unwrap();
        let v = circuit_unitary(&out, 10).unwrap();
        assert!(equal_up_to_global_phase(&u, &v, 1e-7).unwrap());
    }

    #[test]
    fn rebase_reports_the_rule_gap() {
        let cascade = builtin_dialect("cascade").unwrap();
        let rules = builtin_rules();
        let err = rebase(
            &single(GateKind::Ecr, vec![]),
            &cascade,
            &rules,
            DEFAULT_EXPANSION_DEPTH,
        )
        .unwrap_err();
        assert_eq!(err.kind, TranspileErrorKind::NoRule);
        assert_eq!(err.gate, GateKind::Ecr);
    }

    #[test]
    fn rebase_guards_against_cyclic_rules() {
        let hb = load_dialect(r#"{"name":"hb","gates":["rx","ry","rz","cx"]}"#).unwrap();
        let mut rules = builtin_rules();
        // pathological user rule: swap rewrites to itself
        rules.insert(RewriteRule {
            lhs: GateKind::Swap,
            rhs: vec![TemplateGate {
                kind: GateKind::Swap,
                operands: vec![1, 0],
                params: vec![],
            }],
        });
        let err = rebase(&single(GateKind::Swap, vec![]), &hb, &rules, 16).unwrap_err();
        assert_eq!(err.kind, TranspileErrorKind::DepthExceeded);
        assert_eq!(err.gate, GateKind::Swap);
    }

    #[test]
    fn every_ruled_kind_reaches_the_hub_basis() {
        // expansion chains terminate well within the default budget
        let hb = load_dialect(r#"{"name":"hb","gates":["rx","ry","rz","cx"]}"#).unwrap();
        let rules = builtin_rules();
        let mut rng = ChaCha12Rng::seed_from_u64(37);
        for kind in GateKind::ALL {
            if kind == GateKind::Ecr {
                continue;
            }
            let params: Vec<f64> = (0..kind.param_count())
                .map(|_| rng.gen_range(0.0..2.0 * PI))
                .collect();
            let out = rebase(&single(kind, params), &hb, &rules, DEFAULT_EXPANSION_DEPTH)
                .unwrap_or_else(|e| panic!("{kind} failed to reach hub basis: {e}"));
            for gate in out.gates() {
                assert!(hb.supports(gate.kind()));
            }
        }
    }

    #[test]
    fn hybrid_is_pure_passthrough_on_supported_circuits() {
        let dovetail = builtin_dialect("dovetail").unwrap();
        let rules = builtin_rules();
        let mut c = Circuit::new(2, "", "").unwrap();
        c.push_gate(GateKind::U3, vec![0], vec![0.1, 0.2, 0.3]).unwrap();
        c.push_gate(GateKind::Crx, vec![0, 1], vec![1.5]).unwrap();
        c.push_gate(GateKind::Ch, vec![1, 0], vec![]).unwrap();
        let out = hybrid(&c, &dovetail, &rules).unwrap();
        assert!(out.structurally_equal(&c, 0.0));
    }

    #[test]
    fn hybrid_copies_ecr_when_target_supports_it() {
        let borealis = builtin_dialect("borealis").unwrap();
        let rules = builtin_rules();
        let c = single(GateKind::Ecr, vec![]);
        let out = hybrid(&c, &borealis, &rules).unwrap();
        assert!(out.structurally_equal(&c, 0.0));
    }

    #[test]
    fn hub_route_fails_on_ecr_even_when_endpoints_support_it() {
        let cascade = builtin_dialect("cascade").unwrap();
        let borealis = builtin_dialect("borealis").unwrap();
        let rules = builtin_rules();
        let c = single(GateKind::Ecr, vec![]);
        let err = hub_and_spokes(&c, &cascade, &borealis, &rules).unwrap_err();
        assert_eq!(
            err,
            TranspileError {
                kind: TranspileErrorKind::NoRule,
                gate: GateKind::Ecr,
                stage: Stage::HubLeg1,
            }
        );
        assert_eq!(err.to_string(), "no_rule ecr (hub_leg_1)");
    }

    #[test]
    fn hub_route_handles_the_bell_circuit() {
        let cascade = builtin_dialect("cascade").unwrap();
        let borealis = builtin_dialect("borealis").unwrap();
        let rules = builtin_rules();
        let out = hub_and_spokes(&bell(), &cascade, &borealis, &rules).unwrap();
        let u = circuit_unitary(&bell(), 10).unwrap();
        let v = circuit_unitary(&out, 10).unwrap();
        assert!(equal_up_to_global_phase(&u, &v, 1e-7).unwrap());
    }

    #[test]
    fn rebased_outputs_stay_inside_the_target() {
        let rules = builtin_rules();
        let mut rng = ChaCha12Rng::seed_from_u64(41);
        for target_name in ["borealis", "cascade", "dovetail"] {
            let target = builtin_dialect(target_name).unwrap();
            for kind in GateKind::ALL {
                if kind == GateKind::Ecr && !target.supports(kind) {
                    continue;
                }
                let params: Vec<f64> = (0..kind.param_count())
                    .map(|_| rng.gen_range(0.0..2.0 * PI))
                    .collect();
                let c = single(kind, params);
                let out = hybrid(&c, &target, &rules).unwrap();
                for gate in out.gates() {
                    assert!(
                        target.supports(gate.kind()),
                        "{} leaked {} past {target_name}",
                        kind,
                        gate.kind()
                    );
                }
            }
        }
    }

    #[test]
    fn rebase_is_idempotent() {
        let cascade = builtin_dialect("cascade").unwrap();
        let rules = builtin_rules();
        let mut c = Circuit::new(3, "", "").unwrap();
        c.push_gate(GateKind::Ch, vec![0, 1], vec![]).unwrap();
        c.push_gate(GateKind::Cp, vec![1, 2], vec![0.7]).unwrap();
        c.push_gate(GateKind::Sx, vec![0], vec![]).unwrap();
        c.push_gate(GateKind::Ccz, vec![0, 1, 2], vec![]).unwrap();
        let once = rebase(&c, &cascade, &rules, DEFAULT_EXPANSION_DEPTH).unwrap();
        let twice = rebase(&once, &cascade, &rules, DEFAULT_EXPANSION_DEPTH).unwrap();
        assert!(twice.structurally_equal(&once, 0.0));
    }
}
