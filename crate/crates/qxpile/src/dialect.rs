//! SDK-like gate vocabularies ("dialects") and the decomposition rule
//! database shared by the transpilation strategies.
//!
//! A dialect is a named set of supported gate kinds loaded from a JSON
//! manifest. Every dialect must contain the universal hub basis
//! {rx, ry, rz, cx}. Four dialects ship by default: avalon (the full
//! vocabulary), borealis, cascade (the default hub), and dovetail.

use crate::ir::{GateInstance, GateKind};
use serde::Deserialize;
use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use thiserror::Error;

/// The universal hub basis every dialect must support.
pub const HUB_BASIS: [GateKind; 4] = [GateKind::Rx, GateKind::Ry, GateKind::Rz, GateKind::Cx];

/// Default hub dialect name for hub-and-spokes transpilation.
pub const DEFAULT_HUB: &str = "cascade";

pub const BUILTIN_MANIFESTS: [(&str, &str); 4] = [
    (
        "avalon",
        include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../dialects/avalon.json")),
    ),
    (
        "borealis",
        include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../dialects/borealis.json")),
    ),
    (
        "cascade",
        include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../dialects/cascade.json")),
    ),
    (
        "dovetail",
        include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../dialects/dovetail.json")),
    ),
];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ManifestError {
    #[error("malformed dialect manifest: {0}")]
    Malformed(String),
    #[error("unknown gate '{0}' in dialect manifest")]
    UnknownGate(String),
    #[error("dialect '{dialect}' is missing hub-basis gate '{gate}'")]
    MissingHubBasis { dialect: String, gate: GateKind },
}

/// A named supported-gate-kind set modeling one SDK's vocabulary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dialect {
    pub name: String,
    supported: BTreeSet<GateKind>,
}

impl Dialect {
    pub fn supports(&self, kind: GateKind) -> bool {
        self.supported.contains(&kind)
    }

    /// Supported kinds in canonical order.
    pub fn supported(&self) -> impl Iterator<Item = GateKind> + '_ {
        self.supported.iter().copied()
    }

    pub fn size(&self) -> usize {
        self.supported.len()
    }
}

#[derive(Deserialize)]
struct Manifest {
    name: String,
    gates: Vec<String>,
}

/// Parse and validate a JSON dialect manifest `{"name": ..., "gates": [...]}`.
pub fn load_dialect(manifest_text: &str) -> Result<Dialect, ManifestError> {
    let manifest: Manifest =
        serde_json::from_str(manifest_text).map_err(|e| ManifestError::Malformed(e.to_string()))?;
    let mut supported = BTreeSet::new();
    for gate in &manifest.gates {
        let kind =
            GateKind::from_name(gate).ok_or_else(|| ManifestError::UnknownGate(gate.clone()))?;
        supported.insert(kind);
    }
    for gate in HUB_BASIS {
        if !supported.contains(&gate) {
            return Err(ManifestError::MissingHubBasis {
                dialect: manifest.name,
                gate,
            });
        }
    }
    Ok(Dialect {
        name: manifest.name,
        supported,
    })
}

/// One of the four dialects shipped with the crate.
pub fn builtin_dialect(name: &str) -> Option<Dialect> {
    BUILTIN_MANIFESTS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| load_dialect(text).expect("builtin manifests validate"))
}

pub fn builtin_dialects() -> Vec<Dialect> {
    BUILTIN_MANIFESTS
        .iter()
        .map(|(_, text)| load_dialect(text).expect("builtin manifests validate"))
        .collect()
}

/// A parameter expression in a rewrite template: either a constant or a
/// scaled copy of one of the source gate's parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamExpr {
    Const(f64),
    Scaled { index: usize, factor: f64 },
}

impl ParamExpr {
    fn eval(self, params: &[f64]) -> f64 {
        match self {
            ParamExpr::Const(x) => x,
            ParamExpr::Scaled { index, factor } => factor * params[index],
        }
    }
}

/// One gate of a rewrite rule's right-hand side. Operand slots index into
/// the source gate's operand list (0 = control / first operand).
#[derive(Debug, Clone, PartialEq)]
pub struct TemplateGate {
    pub kind: GateKind,
    pub operands: Vec<usize>,
    pub params: Vec<ParamExpr>,
}

/// A decomposition identity mapping one gate kind to a gate sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct RewriteRule {
    pub lhs: GateKind,
    pub rhs: Vec<TemplateGate>,
}

impl RewriteRule {
    /// Substitute a concrete gate's operands and parameters into the rhs.
    pub fn instantiate(&self, gate: &GateInstance) -> Vec<GateInstance> {
        debug_assert_eq!(gate.kind(), self.lhs);
        self.rhs
            .iter()
            .map(|template| {
                let qubits = template
                    .operands
                    .iter()
                    .map(|&slot| gate.qubits()[slot])
                    .collect();
                let params = template
                    .params
                    .iter()
                    .map(|e| e.eval(gate.params()))
                    .collect();
                GateInstance::new(template.kind, qubits, params)
                    .expect("rule templates produce valid gates")
            })
            .collect()
    }
}

/// Map from gate kind to its decomposition rule.
#[derive(Debug, Clone, Default)]
pub struct RuleDatabase {
    rules: BTreeMap<GateKind, RewriteRule>,
}

impl RuleDatabase {
    pub fn get(&self, kind: GateKind) -> Option<&RewriteRule> {
        self.rules.get(&kind)
    }

    pub fn rules(&self) -> impl Iterator<Item = &RewriteRule> {
        self.rules.values()
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn insert(&mut self, rule: RewriteRule) {
        self.rules.insert(rule.lhs, rule);
    }
}

const A: usize = 0;
const B: usize = 1;
const C: usize = 2;

fn cst(x: f64) -> ParamExpr {
    ParamExpr::Const(x)
}

fn scaled(index: usize, factor: f64) -> ParamExpr {
    ParamExpr::Scaled { index, factor }
}

fn p0() -> ParamExpr {
    scaled(0, 1.0)
}

fn tg(kind: GateKind, operands: &[usize], params: &[ParamExpr]) -> TemplateGate {
    TemplateGate {
        kind,
        operands: operands.to_vec(),
        params: params.to_vec(),
    }
}

/// The built-in decomposition rules. Every kind outside the hub basis has
/// a rule except `ecr`, which is a deliberate gap: a hub route fails on it
/// even when both endpoint dialects support it directly.
pub fn builtin_rules() -> RuleDatabase {
    use GateKind::*;
    let mut db = RuleDatabase::default();
    let mut add = |lhs: GateKind, rhs: Vec<TemplateGate>| {
        db.insert(RewriteRule { lhs, rhs });
    };

    // single-qubit kinds
    add(P, vec![tg(Rz, &[A], &[p0()])]);
    add(U1, vec![tg(Rz, &[A], &[p0()])]);
    add(
        U3,
        vec![
            tg(Rz, &[A], &[scaled(2, 1.0)]),
            tg(Ry, &[A], &[scaled(0, 1.0)]),
            tg(Rz, &[A], &[scaled(1, 1.0)]),
        ],
    );
    // u2(phi, lambda) = u3(pi/2, phi, lambda)
    add(
        U2,
        vec![
            tg(Rz, &[A], &[scaled(1, 1.0)]),
            tg(Ry, &[A], &[cst(FRAC_PI_2)]),
            tg(Rz, &[A], &[scaled(0, 1.0)]),
        ],
    );
    add(S, vec![tg(Rz, &[A], &[cst(FRAC_PI_2)])]);
    add(Sdg, vec![tg(Rz, &[A], &[cst(-FRAC_PI_2)])]);
    add(T, vec![tg(Rz, &[A], &[cst(FRAC_PI_4)])]);
    add(Tdg, vec![tg(Rz, &[A], &[cst(-FRAC_PI_4)])]);
    add(Sx, vec![tg(Rx, &[A], &[cst(FRAC_PI_2)])]);
    add(Sxdg, vec![tg(Rx, &[A], &[cst(-FRAC_PI_2)])]);
    add(X, vec![tg(Rx, &[A], &[cst(PI)])]);
    add(Y, vec![tg(Ry, &[A], &[cst(PI)])]);
    add(Z, vec![tg(Rz, &[A], &[cst(PI)])]);
    add(
        H,
        vec![tg(Ry, &[A], &[cst(FRAC_PI_2)]), tg(Rx, &[A], &[cst(PI)])],
    );

    // two-qubit kinds, controls first
    add(
        Cy,
        vec![
            tg(Sdg, &[B], &[]),
            tg(Cx, &[A, B], &[]),
            tg(S, &[B], &[]),
        ],
    );
    add(
        Cz,
        vec![tg(H, &[B], &[]), tg(Cx, &[A, B], &[]), tg(H, &[B], &[])],
    );
    add(
        Ch,
        vec![
            tg(S, &[B], &[]),
            tg(H, &[B], &[]),
            tg(T, &[B], &[]),
            tg(Cx, &[A, B], &[]),
            tg(Tdg, &[B], &[]),
            tg(H, &[B], &[]),
            tg(Sdg, &[B], &[]),
        ],
    );
    add(
        Swap,
        vec![
            tg(Cx, &[A, B], &[]),
            tg(Cx, &[B, A], &[]),
            tg(Cx, &[A, B], &[]),
        ],
    );
    add(
        Iswap,
        vec![
            tg(S, &[A], &[]),
            tg(S, &[B], &[]),
            tg(H, &[A], &[]),
            tg(Cx, &[A, B], &[]),
            tg(Cx, &[B, A], &[]),
            tg(H, &[B], &[]),
        ],
    );
    add(
        Crz,
        vec![
            tg(Rz, &[B], &[scaled(0, 0.5)]),
            tg(Cx, &[A, B], &[]),
            tg(Rz, &[B], &[scaled(0, -0.5)]),
            tg(Cx, &[A, B], &[]),
        ],
    );
    add(
        Cry,
        vec![
            tg(Ry, &[B], &[scaled(0, 0.5)]),
            tg(Cx, &[A, B], &[]),
            tg(Ry, &[B], &[scaled(0, -0.5)]),
            tg(Cx, &[A, B], &[]),
        ],
    );
    add(
        Crx,
        vec![
            tg(H, &[B], &[]),
            tg(Crz, &[A, B], &[p0()]),
            tg(H, &[B], &[]),
        ],
    );
    add(
        Cp,
        vec![
            tg(P, &[A], &[scaled(0, 0.5)]),
            tg(Cx, &[A, B], &[]),
            tg(P, &[B], &[scaled(0, -0.5)]),
            tg(Cx, &[A, B], &[]),
            tg(P, &[B], &[scaled(0, 0.5)]),
        ],
    );
    add(
        Csx,
        vec![
            tg(H, &[B], &[]),
            tg(Cp, &[A, B], &[cst(FRAC_PI_2)]),
            tg(H, &[B], &[]),
        ],
    );
    add(
        Rzz,
        vec![
            tg(Cx, &[A, B], &[]),
            tg(Rz, &[B], &[p0()]),
            tg(Cx, &[A, B], &[]),
        ],
    );
    add(
        Rxx,
        vec![
            tg(H, &[A], &[]),
            tg(H, &[B], &[]),
            tg(Rzz, &[A, B], &[p0()]),
            tg(H, &[A], &[]),
            tg(H, &[B], &[]),
        ],
    );
    add(
        Ryy,
        vec![
            tg(Rx, &[A], &[cst(FRAC_PI_2)]),
            tg(Rx, &[B], &[cst(FRAC_PI_2)]),
            tg(Rzz, &[A, B], &[p0()]),
            tg(Rx, &[A], &[cst(-FRAC_PI_2)]),
            tg(Rx, &[B], &[cst(-FRAC_PI_2)]),
        ],
    );
    add(
        Rzx,
        vec![
            tg(H, &[B], &[]),
            tg(Rzz, &[A, B], &[p0()]),
            tg(H, &[B], &[]),
        ],
    );

    // three-qubit kinds; the Toffoli is the standard 6-cx / 7-t network
    add(
        Ccx,
        vec![
            tg(H, &[C], &[]),
            tg(Cx, &[B, C], &[]),
            tg(Tdg, &[C], &[]),
            tg(Cx, &[A, C], &[]),
            tg(T, &[C], &[]),
            tg(Cx, &[B, C], &[]),
            tg(Tdg, &[C], &[]),
            tg(Cx, &[A, C], &[]),
            tg(T, &[B], &[]),
            tg(T, &[C], &[]),
            tg(H, &[C], &[]),
            tg(Cx, &[A, B], &[]),
            tg(T, &[A], &[]),
            tg(Tdg, &[B], &[]),
            tg(Cx, &[A, B], &[]),
        ],
    );
    add(
        Ccz,
        vec![
            tg(H, &[C], &[]),
            tg(Ccx, &[A, B, C], &[]),
            tg(H, &[C], &[]),
        ],
    );
    add(
        Cswap,
        vec![
            tg(Cx, &[C, B], &[]),
            tg(Ccx, &[A, B, C], &[]),
            tg(Cx, &[C, B], &[]),
        ],
    );

    db
}
