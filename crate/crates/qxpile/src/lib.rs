//! Quantum circuit transpilation strategies with a benchmarking harness.
//!
//! The crate models SDK-to-SDK circuit conversion over a shared
//! intermediate representation:
//!
//! * [`ir`]: the circuit IR and its gate vocabulary.
//! * [`qasm2`]: OpenQASM 2.0 parsing and emission (the interchange format).
//! * [`sim`]: dense unitaries and equivalence up to global phase.
//! * [`dialect`]: per-SDK gate vocabularies and decomposition rules.
//! * [`transpile`]: the one-to-one, hybrid, and hub-and-spokes strategies.
//! * [`randgen`]: seeded random circuit generators for benchmark corpora.
//! * [`harness`]: experiment execution, CSV records, and summaries.

pub mod dialect;
pub mod harness;
pub mod ir;
pub mod qasm2;
pub mod randgen;
pub mod sim;
pub mod transpile;

pub use dialect::{builtin_dialect, builtin_dialects, builtin_rules, Dialect, RuleDatabase};
pub use ir::{Circuit, GateInstance, GateKind};
pub use transpile::{hub_and_spokes, hybrid, one_to_one, rebase, TranspileError};
