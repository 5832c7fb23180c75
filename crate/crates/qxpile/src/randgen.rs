//! Seeded random circuit generators: unstructured pure-random circuits,
//! VQE-style ansatz circuits, gate-count sweeps, and per-dialect
//! single-gate circuits.
//!
//! Every generator is deterministic in (seed, parameters). Corpus-level
//! helpers derive an independent ChaCha stream per circuit index so
//! generation can parallelize without changing output.

use crate::dialect::Dialect;
use crate::ir::{Circuit, GateKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::f64::consts::PI;
use thiserror::Error;

/// Gate kinds drawn by the pure-random generator.
pub const PURE_RANDOM_KINDS: [GateKind; 25] = [
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
    GateKind::Cx,
    GateKind::Cy,
    GateKind::Cz,
    GateKind::Ch,
    GateKind::Swap,
    GateKind::Crx,
    GateKind::Cry,
    GateKind::Crz,
    GateKind::Cp,
    GateKind::Rxx,
    GateKind::Rzz,
];

/// Default qubit range for generators with unspecified width.
pub const DEFAULT_QUBIT_RANGE: (usize, usize) = (2, 10);
/// Default gate-count range for the pure-random generator.
pub const DEFAULT_GATE_RANGE: (usize, usize) = (2, 100);
/// Range of rotation kinds per HEA layer when drawn randomly.
pub const HEA_SU2_RANGE: (usize, usize) = (1, 3);
/// Range of HEA layer repetitions when drawn randomly.
pub const HEA_REPS_RANGE: (usize, usize) = (1, 4);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

fn invalid(msg: impl Into<String>) -> GenError {
    GenError::InvalidParams(msg.into())
}

/// Independent deterministic stream for circuit `index` under `seed`.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha12Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&index.to_le_bytes());
    ChaCha12Rng::from_seed(key)
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Derive a sub-seed for run `index` of a repeated generation task.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index))
}

fn angle(rng: &mut ChaCha12Rng) -> f64 {
    rng.gen_range(0.0..2.0 * PI)
}

fn params_for(kind: GateKind, rng: &mut ChaCha12Rng) -> Vec<f64> {
    (0..kind.param_count()).map(|_| angle(rng)).collect()
}

/// Draw `arity` distinct qubits uniformly, in draw order.
fn distinct_qubits(rng: &mut ChaCha12Rng, nb_qubits: usize, arity: usize) -> Vec<usize> {
    let mut chosen = Vec::with_capacity(arity);
    while chosen.len() < arity {
        let q = rng.gen_range(0..nb_qubits);
        if !chosen.contains(&q) {
            chosen.push(q);
        }
    }
    chosen
}

/// Core fill: coverage phase draws operands from the idle pool first so no
/// qubit is left untouched, then the remaining budget is uniform draws.
/// Requires nb_qubits >= 2 and nb_gates >= nb_qubits.
fn fill_random(
    rng: &mut ChaCha12Rng,
    nb_qubits: usize,
    nb_gates: usize,
    kinds: &[GateKind],
    name: String,
    circuit_type: &str,
) -> Circuit {
    let mut circuit = Circuit::new(nb_qubits, name, circuit_type).expect("nb_qubits >= 2");
    let mut idle: Vec<usize> = (0..nb_qubits).collect();

    // phase 1: cover idle qubits
    while !idle.is_empty() && circuit.gatecount() < nb_gates {
        let kind = kinds[rng.gen_range(0..kinds.len())];
        let mut chosen: Vec<usize> = Vec::with_capacity(kind.arity());
        for _ in 0..kind.arity() {
            if idle.is_empty() {
                loop {
                    let q = rng.gen_range(0..nb_qubits);
                    if !chosen.contains(&q) {
                        chosen.push(q);
                        break;
                    }
                }
            } else {
                let pick = rng.gen_range(0..idle.len());
                chosen.push(idle.swap_remove(pick));
            }
        }
        let params = params_for(kind, rng);
        circuit
            .push_gate(kind, chosen, params)
            .expect("generated operands are valid");
    }

    // phase 2: spend the remaining budget
    while circuit.gatecount() < nb_gates {
        let kind = kinds[rng.gen_range(0..kinds.len())];
        let qubits = distinct_qubits(rng, nb_qubits, kind.arity());
        let params = params_for(kind, rng);
        circuit
            .push_gate(kind, qubits, params)
            .expect("generated operands are valid");
    }

    circuit
}

fn resolve_pure_random_dims(
    rng: &mut ChaCha12Rng,
    nb_qubits: Option<usize>,
    nb_gates: Option<usize>,
) -> Result<(usize, usize), GenError> {
    let (q_min, q_max) = DEFAULT_QUBIT_RANGE;
    let (_, g_max) = DEFAULT_GATE_RANGE;
    match (nb_qubits, nb_gates) {
        (Some(q), Some(g)) => {
            if q < 2 {
                return Err(invalid(format!("nb_qubits must be >= 2, got {q}")));
            }
            if g < q {
                return Err(invalid(format!(
                    "nb_gates ({g}) must be >= nb_qubits ({q})"
                )));
            }
            Ok((q, g))
        }
        (Some(q), None) => {
            if q < 2 {
                return Err(invalid(format!("nb_qubits must be >= 2, got {q}")));
            }
            if q > g_max {
                return Err(invalid(format!(
                    "nb_qubits ({q}) exceeds the default gate range upper bound ({g_max})"
                )));
            }
            Ok((q, rng.gen_range(q..=g_max)))
        }
        (None, Some(g)) => {
            if g < 2 {
                return Err(invalid(format!(
                    "nb_gates must be >= 2 to cover the minimum qubit count, got {g}"
                )));
            }
            let q = rng.gen_range(q_min..=q_max.min(g));
            Ok((q, g))
        }
        (None, None) => {
            let q = rng.gen_range(q_min..=q_max);
            let g = rng.gen_range(q..=g_max);
            Ok((q, g))
        }
    }
}

fn pure_random_with_rng(
    rng: &mut ChaCha12Rng,
    nb_qubits: Option<usize>,
    nb_gates: Option<usize>,
) -> Result<Circuit, GenError> {
    let (q, g) = resolve_pure_random_dims(rng, nb_qubits, nb_gates)?;
    let name = format!("PureRandom-{q}q-{g}g");
    Ok(fill_random(rng, q, g, &PURE_RANDOM_KINDS, name, "PureRandom"))
}

/// Unstructured random circuit over the 25-kind pure-random vocabulary
/// with no idle qubits and exactly `nb_gates` instances. Unspecified
/// dimensions are drawn from the default ranges, keeping
/// nb_qubits <= nb_gates.
pub fn pure_random(
    seed: u64,
    nb_qubits: Option<usize>,
    nb_gates: Option<usize>,
) -> Result<Circuit, GenError> {
    pure_random_with_rng(&mut stream_rng(seed, 0), nb_qubits, nb_gates)
}

/// Internal variant with a restricted vocabulary, used for timing sweeps
/// that must stay transpilable by every strategy.
pub(crate) fn pure_random_restricted(
    seed: u64,
    index: u64,
    nb_qubits: usize,
    nb_gates: usize,
    kinds: &[GateKind],
) -> Circuit {
    let mut rng = stream_rng(seed, index);
    let name = format!("Restricted-{nb_qubits}q-{nb_gates}g");
    fill_random(&mut rng, nb_qubits, nb_gates, kinds, name, "PureRandom")
}

/// One pure-random circuit per gate count in
/// `min_nb_gates, min_nb_gates + gate_step, ... < max_nb_gates`.
pub fn range_gates(
    seed: u64,
    nb_qubits: usize,
    min_nb_gates: usize,
    max_nb_gates: usize,
    gate_step: usize,
) -> Result<Vec<Circuit>, GenError> {
    if gate_step < 1 {
        return Err(invalid("gate_step must be >= 1"));
    }
    if nb_qubits > min_nb_gates {
        return Err(invalid(format!(
            "min_nb_gates ({min_nb_gates}) must be >= nb_qubits ({nb_qubits})"
        )));
    }
    if min_nb_gates >= max_nb_gates {
        return Err(invalid(format!(
            "max_nb_gates ({max_nb_gates}) must be > min_nb_gates ({min_nb_gates})"
        )));
    }
    (min_nb_gates..max_nb_gates)
        .step_by(gate_step)
        .enumerate()
        .map(|(i, g)| {
            pure_random_with_rng(&mut stream_rng(seed, i as u64), Some(nb_qubits), Some(g))
        })
        .collect()
}

/// Entanglement structure of the hardware-efficient ansatz.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Entanglement {
    Linear,
    Circular,
}

impl Entanglement {
    pub fn as_str(self) -> &'static str {
        match self {
            Entanglement::Linear => "linear",
            Entanglement::Circular => "circular",
        }
    }
}

/// Hardware-efficient-ansatz shape parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeaParams {
    pub nb_su2_gates: usize,
    pub entanglement: Entanglement,
    pub reps: usize,
}

fn draw_hea(rng: &mut ChaCha12Rng) -> HeaParams {
    let nb_su2_gates = rng.gen_range(HEA_SU2_RANGE.0..=HEA_SU2_RANGE.1);
    let entanglement = if rng.gen_range(0..2) == 0 {
        Entanglement::Linear
    } else {
        Entanglement::Circular
    };
    let reps = rng.gen_range(HEA_REPS_RANGE.0..=HEA_REPS_RANGE.1);
    HeaParams {
        nb_su2_gates,
        entanglement,
        reps,
    }
}

fn vqe_with_rng(
    rng: &mut ChaCha12Rng,
    nb_qubits: Option<usize>,
    hea: Option<HeaParams>,
) -> Result<Circuit, GenError> {
    let n = match nb_qubits {
        Some(n) if n < 2 => return Err(invalid(format!("nb_qubits must be >= 2, got {n}"))),
        Some(n) => n,
        None => rng.gen_range(DEFAULT_QUBIT_RANGE.0..=DEFAULT_QUBIT_RANGE.1),
    };
    let hea = match hea {
        Some(p) => {
            if !(HEA_SU2_RANGE.0..=HEA_SU2_RANGE.1).contains(&p.nb_su2_gates) {
                return Err(invalid(format!(
                    "nb_su2_gates must be in [{}, {}], got {}",
                    HEA_SU2_RANGE.0, HEA_SU2_RANGE.1, p.nb_su2_gates
                )));
            }
            if !(HEA_REPS_RANGE.0..=HEA_REPS_RANGE.1).contains(&p.reps) {
                return Err(invalid(format!(
                    "reps must be in [{}, {}], got {}",
                    HEA_REPS_RANGE.0, HEA_REPS_RANGE.1, p.reps
                )));
            }
            p
        }
        None => draw_hea(rng),
    };

    // ordered selection of distinct rotation kinds
    let mut pool = [GateKind::Rx, GateKind::Ry, GateKind::Rz];
    for i in 0..hea.nb_su2_gates {
        let j = rng.gen_range(i..pool.len());
        pool.swap(i, j);
    }
    let rotations = &pool[..hea.nb_su2_gates];

    let name = format!("VQE-{n}q-{}su2-r{}", hea.nb_su2_gates, hea.reps);
    let mut circuit = Circuit::new(n, name, "VQE").expect("n >= 2");

    let rotation_block = |circuit: &mut Circuit, rng: &mut ChaCha12Rng| {
        for &kind in rotations {
            for q in 0..n {
                circuit
                    .push_gate(kind, vec![q], vec![angle(rng)])
                    .expect("valid rotation");
            }
        }
    };

    for _ in 0..hea.reps {
        rotation_block(&mut circuit, rng);
        for i in 0..n - 1 {
            circuit
                .push_gate(GateKind::Cx, vec![i, i + 1], vec![])
                .expect("valid cx");
        }
        if hea.entanglement == Entanglement::Circular {
            circuit
                .push_gate(GateKind::Cx, vec![n - 1, 0], vec![])
                .expect("valid cx");
        }
    }
    rotation_block(&mut circuit, rng);

    // measurement-basis changes for a random Pauli string
    for q in 0..n {
        match rng.gen_range(0..4) {
            1 => circuit.push_gate(GateKind::H, vec![q], vec![]).expect("valid h"),
            2 => {
                circuit
                    .push_gate(GateKind::Sdg, vec![q], vec![])
                    .expect("valid sdg");
                circuit.push_gate(GateKind::H, vec![q], vec![]).expect("valid h");
            }
            _ => {} // I or Z: computational basis
        }
    }

    Ok(circuit)
}

/// VQE-style circuit: repeated hardware-efficient-ansatz layers, a final
/// rotation block, then per-qubit measurement-basis changes realizing a
/// random Pauli string.
pub fn vqe(seed: u64, nb_qubits: Option<usize>, hea: Option<HeaParams>) -> Result<Circuit, GenError> {
    vqe_with_rng(&mut stream_rng(seed, 0), nb_qubits, hea)
}

/// One single-gate circuit per kind the dialect supports, in canonical
/// kind order, with freshly drawn parameters. Names are `<dialect>-<kind>`.
pub fn dialect_gate_circuits(dialect: &Dialect, seed: u64) -> Vec<(String, Circuit)> {
    dialect
        .supported()
        .enumerate()
        .map(|(i, kind)| {
            let mut rng = stream_rng(seed, i as u64);
            let name = format!("{}-{}", dialect.name, kind);
            let mut circuit =
                Circuit::new(kind.arity(), name.clone(), "SDKGate").expect("arity >= 1");
            let params = params_for(kind, &mut rng);
            circuit
                .push_gate(kind, (0..kind.arity()).collect(), params)
                .expect("valid single gate");
            (name, circuit)
        })
        .collect()
}

/// `count` pure-random circuits with independent per-index streams,
/// renamed `PureRandom-<index>`.
pub fn pure_random_corpus(
    seed: u64,
    count: usize,
    nb_qubits: Option<usize>,
    nb_gates: Option<usize>,
) -> Result<Vec<Circuit>, GenError> {
    (0..count)
        .map(|i| {
            pure_random_with_rng(&mut stream_rng(seed, i as u64), nb_qubits, nb_gates)
                .map(|c| c.renamed(format!("PureRandom-{i:03}")))
        })
        .collect()
}

/// `count` VQE circuits with independent per-index streams, renamed
/// `VQE-<index>`.
pub fn vqe_corpus(
    seed: u64,
    count: usize,
    nb_qubits: Option<usize>,
    hea: Option<HeaParams>,
) -> Result<Vec<Circuit>, GenError> {
    (0..count)
        .map(|i| {
            vqe_with_rng(&mut stream_rng(seed, i as u64), nb_qubits, hea)
                .map(|c| c.renamed(format!("VQE-{i:03}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dialect::builtin_dialect;

    #[test]
    fn pure_random_with_explicit_dims() {
        let c = pure_random(7, Some(2), Some(4)).unwrap();
        assert_eq!(c.nb_qubits(), 2);
        assert_eq!(c.gatecount(), 4);
        assert!(c.idle_qubits().is_empty());
        assert_eq!(c.circuit_type, "PureRandom");
    }

    #[test]
    fn pure_random_default_ranges_hold_over_many_seeds() {
        let mut seen_qubits = std::collections::BTreeSet::new();
        for seed in 0..1000u64 {
            let c = pure_random(seed, None, None).unwrap();
            assert!((2..=10).contains(&c.nb_qubits()), "seed {seed}");
            assert!(c.gatecount() >= c.nb_qubits(), "seed {seed}");
            assert!(c.gatecount() <= 100, "seed {seed}");
            assert!(c.idle_qubits().is_empty(), "seed {seed}");
            seen_qubits.insert(c.nb_qubits());
        }
        // the draw actually spans the range
        assert!(seen_qubits.contains(&2));
        assert!(seen_qubits.contains(&10));
    }

    #[test]
    fn pure_random_rejects_bad_dims() {
        assert!(matches!(
            pure_random(1, Some(5), Some(4)),
            Err(GenError::InvalidParams(_))
        ));
        assert!(matches!(
            pure_random(1, Some(1), Some(4)),
            Err(GenError::InvalidParams(_))
        ));
        assert!(matches!(
            pure_random(1, None, Some(1)),
            Err(GenError::InvalidParams(_))
        ));
    }

    #[test]
    fn pure_random_draws_only_listed_kinds() {
        for seed in 0..50u64 {
            let c = pure_random(seed, None, None).unwrap();
            for gate in c.gates() {
                assert!(PURE_RANDOM_KINDS.contains(&gate.kind()), "{}", gate.kind());
                for &p in gate.params() {
                    assert!((0.0..2.0 * PI).contains(&p));
                }
            }
        }
    }

    #[test]
    fn generators_are_deterministic() {
        let a = pure_random(42, None, None).unwrap();
        let b = pure_random(42, None, None).unwrap();
        assert!(a.structurally_equal(&b, 0.0));

        let a = vqe(42, None, None).unwrap();
        let b = vqe(42, None, None).unwrap();
        assert!(a.structurally_equal(&b, 0.0));

        let avalon = builtin_dialect("avalon").unwrap();
        let a = dialect_gate_circuits(&avalon, 42);
        let b = dialect_gate_circuits(&avalon, 42);
        for ((na, ca), (nb, cb)) in a.iter().zip(&b) {
            assert_eq!(na, nb);
            assert!(ca.structurally_equal(cb, 0.0));
        }
    }

    #[test]
    fn range_gates_sweeps_gatecounts() {
        let circuits = range_gates(7, 2, 2, 101, 1).unwrap();
        assert_eq!(circuits.len(), 99);
        for (i, c) in circuits.iter().enumerate() {
            assert_eq!(c.gatecount(), 2 + i);
            assert_eq!(c.nb_qubits(), 2);
            assert!(c.idle_qubits().is_empty());
        }

        let circuits = range_gates(7, 2, 2, 10, 4).unwrap();
        let counts: Vec<usize> = circuits.iter().map(Circuit::gatecount).collect();
        assert_eq!(counts, vec![2, 6]);
    }

    #[test]
    fn range_gates_rejects_bad_ranges() {
        assert!(range_gates(7, 10, 5, 20, 1).is_err());
        assert!(range_gates(7, 2, 5, 5, 1).is_err());
        assert!(range_gates(7, 2, 5, 20, 0).is_err());
    }

    #[test]
    fn vqe_linear_single_rotation_pattern() {
        let hea = HeaParams {
            nb_su2_gates: 1,
            entanglement: Entanglement::Linear,
            reps: 3,
        };
        let c = vqe(5, Some(2), Some(hea)).unwrap();
        // [rK q0; rK q1; cx] x3 then [rK q0; rK q1] = 11 gates before the
        // Pauli layer
        assert!(c.gatecount() >= 11);
        let rot = c.gates()[0].kind();
        assert!([GateKind::Rx, GateKind::Ry, GateKind::Rz].contains(&rot));
        for rep in 0..3 {
            let base = rep * 3;
            assert_eq!(c.gates()[base].kind(), rot);
            assert_eq!(c.gates()[base].qubits(), &[0]);
            assert_eq!(c.gates()[base + 1].kind(), rot);
            assert_eq!(c.gates()[base + 1].qubits(), &[1]);
            assert_eq!(c.gates()[base + 2].kind(), GateKind::Cx);
            assert_eq!(c.gates()[base + 2].qubits(), &[0, 1]);
        }
        assert_eq!(c.gates()[9].kind(), rot);
        assert_eq!(c.gates()[10].kind(), rot);
        // anything after position 11 is the measurement-basis layer
        for gate in &c.gates()[11..] {
            assert!(matches!(gate.kind(), GateKind::H | GateKind::Sdg));
        }
    }

    #[test]
    fn vqe_two_rotation_kinds_fill_every_block() {
        let hea = HeaParams {
            nb_su2_gates: 2,
            entanglement: Entanglement::Circular,
            reps: 2,
        };
        let n = 3;
        let c = vqe(9, Some(n), Some(hea)).unwrap();
        let k1 = c.gates()[0].kind();
        let k2 = c.gates()[n].kind();
        assert_ne!(k1, k2);
        // per repetition: both kinds on every qubit, then n cx (circular)
        let block = 2 * n + n;
        for rep in 0..2 {
            let base = rep * block;
            for q in 0..n {
                assert_eq!(c.gates()[base + q].kind(), k1);
                assert_eq!(c.gates()[base + n + q].kind(), k2);
            }
            for i in 0..n {
                assert_eq!(c.gates()[base + 2 * n + i].kind(), GateKind::Cx);
            }
        }
        // final rotation block present
        let final_base = 2 * block;
        for q in 0..n {
            assert_eq!(c.gates()[final_base + q].kind(), k1);
            assert_eq!(c.gates()[final_base + n + q].kind(), k2);
        }
    }

    #[test]
    fn vqe_vocabulary_and_coverage() {
        let allowed = [
            GateKind::Rx,
            GateKind::Ry,
            GateKind::Rz,
            GateKind::Cx,
            GateKind::H,
            GateKind::Sdg,
        ];
        let mut saw_empty_pauli_layer = false;
        for seed in 0..200u64 {
            let c = vqe(seed, None, None).unwrap();
            assert!(c.idle_qubits().is_empty(), "seed {seed}");
            for gate in c.gates() {
                assert!(allowed.contains(&gate.kind()));
            }
            let trailing = c
                .gates()
                .iter()
                .rev()
                .take_while(|g| matches!(g.kind(), GateKind::H | GateKind::Sdg))
                .count();
            if trailing == 0 {
                saw_empty_pauli_layer = true;
            }
        }
        // an all-Z/I draw leaves no trailing basis-change gates
        assert!(saw_empty_pauli_layer);
    }

    #[test]
    fn vqe_rejects_out_of_range_hea() {
        let bad = HeaParams {
            nb_su2_gates: 4,
            entanglement: Entanglement::Linear,
            reps: 2,
        };
        assert!(vqe(1, Some(2), Some(bad)).is_err());
        let bad = HeaParams {
            nb_su2_gates: 1,
            entanglement: Entanglement::Linear,
            reps: 0,
        };
        assert!(vqe(1, Some(2), Some(bad)).is_err());
        assert!(vqe(1, Some(1), None).is_err());
    }

    #[test]
    fn dialect_gate_circuits_cover_the_vocabulary() {
        let avalon = builtin_dialect("avalon").unwrap();
        let circuits = dialect_gate_circuits(&avalon, 3);
        assert_eq!(circuits.len(), avalon.size());
        assert_eq!(circuits.len(), 36);
        let (name, ccx) = circuits
            .iter()
            .find(|(n, _)| n == "avalon-ccx")
            .expect("ccx entry");
        assert_eq!(name, "avalon-ccx");
        assert_eq!(ccx.nb_qubits(), 3);
        assert_eq!(ccx.gatecount(), 1);
        assert!(ccx.idle_qubits().is_empty());
        assert_eq!(ccx.circuit_type, "SDKGate");

        // different seeds resample parameters
        let a = dialect_gate_circuits(&avalon, 3);
        let b = dialect_gate_circuits(&avalon, 4);
        let pa = a.iter().find(|(n, _)| n == "avalon-rx").unwrap().1.gates()[0].params()[0];
        let pb = b.iter().find(|(n, _)| n == "avalon-rx").unwrap().1.gates()[0].params()[0];
        assert_ne!(pa, pb);
    }

    #[test]
    fn phase_two_kind_draws_are_uniform() {
        // chi-squared sanity check over 1e5 draws: qubit coverage takes at
        // most 2 gates, the rest is the uniform phase
        let total = 100_002usize;
        let c = pure_random(123, Some(2), Some(total)).unwrap();
        let mut counts = std::collections::BTreeMap::new();
        for gate in c.gates() {
            *counts.entry(gate.kind()).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), PURE_RANDOM_KINDS.len());
        let expected = total as f64 / PURE_RANDOM_KINDS.len() as f64;
        let chi2: f64 = counts
            .values()
            .map(|&obs| {
                let d = obs as f64 - expected;
                d * d / expected
            })
            .sum();
        // df = 24: mean 24, sigma = sqrt(48); 3 sigma above the mean
        let bound = 24.0 + 3.0 * 48.0f64.sqrt();
        assert!(chi2 < bound, "chi2 = {chi2:.2}, bound = {bound:.2}");
    }

    #[test]
    fn corpus_helpers_index_names() {
        let corpus = pure_random_corpus(5, 10, None, None).unwrap();
        assert_eq!(corpus.len(), 10);
        assert_eq!(corpus[0].name, "PureRandom-000");
        assert_eq!(corpus[9].name, "PureRandom-009");
        // per-index streams differ
        assert!(!corpus[0].structurally_equal(&corpus[1], 1e-9));

        let corpus = vqe_corpus(5, 3, Some(4), None).unwrap();
        assert_eq!(corpus.len(), 3);
        assert!(corpus.iter().all(|c| c.nb_qubits() == 4));

        assert_ne!(derive_seed(1, 0), derive_seed(1, 1));
        assert_eq!(derive_seed(9, 7), derive_seed(9, 7));
    }
}
