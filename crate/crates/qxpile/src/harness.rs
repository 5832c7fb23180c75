//! Benchmark harness: runs strategy x dialect-pair x corpus matrices,
//! records success / correctness / wall time / size metrics per run, and
//! aggregates grouped summaries.
//!
//! Timing covers exactly the strategy invocation; verification and metric
//! computation happen outside the clock. Failures never abort a run, they
//! become rows. Mean time is computed over successful runs only.

use crate::dialect::{builtin_dialect, builtin_rules, Dialect, RuleDatabase, HUB_BASIS};
use crate::ir::Circuit;
use crate::randgen::pure_random_restricted;
use crate::sim::{circuit_unitary, equal_up_to_global_phase, DEFAULT_ATOL, DEFAULT_MAX_QUBITS};
use crate::transpile::{hub_and_spokes, hybrid, one_to_one, TranspileError};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::time::Instant;
use thiserror::Error;

/// Default number of repetitions per (circuit, strategy).
pub const DEFAULT_ITERATIONS: usize = 5;

pub const RECORDS_CSV_HEADER: &str = "circuit_name,circuit_type,nb_qubits,source_dialect,target_dialect,strategy,iteration,success,checked,correct,time_s,depth_in,depth_out,gatecount_in,gatecount_out,error_kind";

pub const TIMING_CSV_HEADER: &str = "gatecount,strategy,mean_time_s";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HarnessError {
    #[error("no records to summarize")]
    EmptyInput,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Strategy {
    OneToOne,
    HubAndSpokes,
    Hybrid,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::OneToOne, Strategy::HubAndSpokes, Strategy::Hybrid];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::OneToOne => "one_to_one",
            Strategy::HubAndSpokes => "hub_and_spokes",
            Strategy::Hybrid => "hybrid",
        }
    }

    pub fn from_name(name: &str) -> Option<Strategy> {
        Strategy::ALL.iter().copied().find(|s| s.as_str() == name)
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Everything one experiment needs: the corpus, the dialect pair, the hub
/// for routed transpilation, the strategies to compare, and tolerances.
#[derive(Debug, Clone)]
pub struct ExperimentPlan {
    pub corpus: Vec<Circuit>,
    pub source: Dialect,
    pub target: Dialect,
    pub hub: Dialect,
    pub rules: RuleDatabase,
    pub strategies: Vec<Strategy>,
    pub iterations: usize,
    pub atol: f64,
    pub verify_max_qubits: usize,
}

impl ExperimentPlan {
    /// Plan with the defaults: cascade hub, built-in rules, all three
    /// strategies, 5 iterations, atol 1e-7, 10-qubit verification cap.
    pub fn new(corpus: Vec<Circuit>, source: Dialect, target: Dialect) -> Self {
        ExperimentPlan {
            corpus,
            source,
            target,
            hub: builtin_dialect("cascade").expect("builtin hub"),
            rules: builtin_rules(),
            strategies: Strategy::ALL.to_vec(),
            iterations: DEFAULT_ITERATIONS,
            atol: DEFAULT_ATOL,
            verify_max_qubits: DEFAULT_MAX_QUBITS,
        }
    }
}

/// One benchmark run: a (circuit, strategy, iteration) outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub circuit_name: String,
    pub circuit_type: String,
    pub nb_qubits: usize,
    pub source_dialect: String,
    pub target_dialect: String,
    pub strategy: Strategy,
    pub iteration: usize,
    pub success: bool,
    pub checked: bool,
    /// None when the run was not checked.
    pub correct: Option<bool>,
    /// None when the strategy never ran (source precondition failure).
    pub time_s: Option<f64>,
    pub depth_in: usize,
    pub depth_out: Option<usize>,
    pub gatecount_in: usize,
    pub gatecount_out: Option<usize>,
    pub error_kind: Option<String>,
}

fn run_strategy(
    strategy: Strategy,
    circuit: &Circuit,
    plan: &ExperimentPlan,
) -> Result<Circuit, TranspileError> {
    match strategy {
        Strategy::OneToOne => one_to_one(circuit, &plan.target),
        Strategy::Hybrid => hybrid(circuit, &plan.target, &plan.rules),
        Strategy::HubAndSpokes => hub_and_spokes(circuit, &plan.hub, &plan.target, &plan.rules),
    }
}

enum RunOutcome {
    SourceMismatch,
    Ran {
        result: Result<Circuit, TranspileError>,
        times: Vec<f64>,
    },
}

struct Verified {
    checked: bool,
    correct: bool,
    depth_out: usize,
    gatecount_out: usize,
}

/// Execute the plan serially. Equivalent to
/// `run_experiment_with_jobs(plan, 1)`.
pub fn run_experiment(plan: &ExperimentPlan) -> Vec<ExperimentRecord> {
    run_experiment_with_jobs(plan, 1)
}

/// Execute the plan: one record per (circuit, strategy, iteration), in
/// that deterministic order. Timed sections run serially; with `jobs > 1`
/// the untimed verification step runs on a bounded thread pool.
pub fn run_experiment_with_jobs(plan: &ExperimentPlan, jobs: usize) -> Vec<ExperimentRecord> {
    assert!(plan.iterations >= 1, "iterations must be >= 1");
    assert!(plan.atol > 0.0, "atol must be positive");

    // warm-up per strategy; removes first-call overhead from the records
    if let Some(first) = plan.corpus.first() {
        for &strategy in &plan.strategies {
            let _ = run_strategy(strategy, first, plan);
        }
    }

    // timing phase, strictly serial
    let mut outcomes: Vec<Vec<RunOutcome>> = Vec::with_capacity(plan.corpus.len());
    for circuit in &plan.corpus {
        let source_ok = circuit
            .gates()
            .iter()
            .all(|g| plan.source.supports(g.kind()));
        let mut per_strategy = Vec::with_capacity(plan.strategies.len());
        for &strategy in &plan.strategies {
            if !source_ok {
                per_strategy.push(RunOutcome::SourceMismatch);
                continue;
            }
            let mut times = Vec::with_capacity(plan.iterations);
            let mut last = None;
            for _ in 0..plan.iterations {
                let start = Instant::now();
                last = Some(run_strategy(strategy, circuit, plan));
                times.push(start.elapsed().as_secs_f64());
            }
            per_strategy.push(RunOutcome::Ran {
                result: last.expect("iterations >= 1"),
                times,
            });
        }
        outcomes.push(per_strategy);
    }

    // verification phase, untimed; the strategies are deterministic so one
    // check per (circuit, strategy) covers every iteration, and the input
    // unitary is shared across strategies
    type Pending<'a> = (usize, &'a Circuit, Vec<(usize, &'a Circuit)>);
    let pending: Vec<Pending> = outcomes
        .iter()
        .enumerate()
        .filter_map(|(ci, per_strategy)| {
            let successes: Vec<(usize, &Circuit)> = per_strategy
                .iter()
                .enumerate()
                .filter_map(|(si, o)| match o {
                    RunOutcome::Ran { result: Ok(out), .. } => Some((si, out)),
                    _ => None,
                })
                .collect();
            (!successes.is_empty()).then_some((ci, &plan.corpus[ci], successes))
        })
        .collect();
    let verify = |(ci, input, successes): (usize, &Circuit, Vec<(usize, &Circuit)>)| {
        let input_unitary = (input.nb_qubits() <= plan.verify_max_qubits)
            .then(|| circuit_unitary(input, plan.verify_max_qubits).expect("within threshold"));
        successes
            .into_iter()
            .map(|(si, output)| {
                let (checked, correct) = match &input_unitary {
                    Some(u) if input.nb_qubits() == output.nb_qubits() => {
                        let v = circuit_unitary(output, plan.verify_max_qubits)
                            .expect("same width");
                        let ok = equal_up_to_global_phase(u, &v, plan.atol)
                            .expect("same dimension");
                        (true, ok)
                    }
                    // width mismatch counts as checked and wrong
                    Some(_) => (true, false),
                    None => (false, false),
                };
                (
                    (ci, si),
                    Verified {
                        checked,
                        correct,
                        depth_out: output.depth(),
                        gatecount_out: output.gatecount(),
                    },
                )
            })
            .collect::<Vec<_>>()
    };
    let verified: BTreeMap<(usize, usize), Verified> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool");
        pool.install(|| pending.into_par_iter().flat_map_iter(verify).collect())
    } else {
        pending.into_iter().flat_map(verify).collect()
    };

    // assembly in corpus x strategy x iteration order
    let mut records = Vec::with_capacity(plan.corpus.len() * plan.strategies.len() * plan.iterations);
    for (ci, circuit) in plan.corpus.iter().enumerate() {
        let depth_in = circuit.depth();
        let gatecount_in = circuit.gatecount();
        for (si, &strategy) in plan.strategies.iter().enumerate() {
            for iteration in 1..=plan.iterations {
                let base = ExperimentRecord {
                    circuit_name: circuit.name.clone(),
                    circuit_type: circuit.circuit_type.clone(),
                    nb_qubits: circuit.nb_qubits(),
                    source_dialect: plan.source.name.clone(),
                    target_dialect: plan.target.name.clone(),
                    strategy,
                    iteration,
                    success: false,
                    checked: false,
                    correct: None,
                    time_s: None,
                    depth_in,
                    depth_out: None,
                    gatecount_in,
                    gatecount_out: None,
                    error_kind: None,
                };
                let record = match &outcomes[ci][si] {
                    RunOutcome::SourceMismatch => ExperimentRecord {
                        error_kind: Some("source_mismatch".into()),
                        ..base
                    },
                    RunOutcome::Ran { result, times } => {
                        let time_s = Some(times[iteration - 1]);
                        match result {
                            Ok(_) => {
                                let v = &verified[&(ci, si)];
                                ExperimentRecord {
                                    success: true,
                                    checked: v.checked,
                                    correct: v.checked.then_some(v.correct),
                                    time_s,
                                    depth_out: Some(v.depth_out),
                                    gatecount_out: Some(v.gatecount_out),
                                    ..base
                                }
                            }
                            Err(e) => ExperimentRecord {
                                time_s,
                                error_kind: Some(e.kind.as_str().into()),
                                ..base
                            },
                        }
                    }
                };
                records.push(record);
            }
        }
    }
    records
}

/// Format a float with 9 significant digits for CSV output.
fn fmt_float(x: f64) -> String {
    format!("{x:.8e}")
}

fn opt_str<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

/// Serialize records with the fixed header; blanks stand for unavailable
/// fields.
pub fn records_to_csv(records: &[ExperimentRecord]) -> String {
    let mut out = String::from(RECORDS_CSV_HEADER);
    out.push('\n');
    for r in records {
        let correct = match r.correct {
            Some(true) => "1",
            Some(false) => "0",
            None => "",
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.circuit_name,
            r.circuit_type,
            r.nb_qubits,
            r.source_dialect,
            r.target_dialect,
            r.strategy,
            r.iteration,
            r.success as u8,
            r.checked as u8,
            correct,
            r.time_s.map(fmt_float).unwrap_or_default(),
            r.depth_in,
            opt_str(&r.depth_out),
            r.gatecount_in,
            opt_str(&r.gatecount_out),
            r.error_kind.as_deref().unwrap_or(""),
        ));
    }
    out
}

/// Keys a summary can group by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKey {
    Strategy,
    CircuitType,
    DialectPair,
}

impl GroupKey {
    pub fn column_name(self) -> &'static str {
        match self {
            GroupKey::Strategy => "strategy",
            GroupKey::CircuitType => "circuit_type",
            GroupKey::DialectPair => "dialect_pair",
        }
    }
}

/// Grouped aggregate: mean correctness over checked successes, mean
/// failure rate, mean time over successful runs.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    /// Key values in the order the grouping keys were given.
    pub keys: Vec<String>,
    pub correct: Option<f64>,
    pub fails: f64,
    pub time_s: Option<f64>,
}

#[derive(Default)]
struct Accumulator {
    count: usize,
    successes: usize,
    checked_successes: usize,
    correct: usize,
    time_sum: f64,
}

/// Aggregate records by the given keys. Rows come back sorted by their
/// key values.
pub fn summarize(
    records: &[ExperimentRecord],
    group_by: &[GroupKey],
) -> Result<Vec<SummaryRow>, HarnessError> {
    if records.is_empty() {
        return Err(HarnessError::EmptyInput);
    }
    let mut groups: BTreeMap<Vec<String>, Accumulator> = BTreeMap::new();
    for r in records {
        let key: Vec<String> = group_by
            .iter()
            .map(|k| match k {
                GroupKey::Strategy => r.strategy.to_string(),
                GroupKey::CircuitType => r.circuit_type.clone(),
                GroupKey::DialectPair => format!("{}->{}", r.source_dialect, r.target_dialect),
            })
            .collect();
        let acc = groups.entry(key).or_default();
        acc.count += 1;
        if r.success {
            acc.successes += 1;
            acc.time_sum += r.time_s.unwrap_or(0.0);
            if r.checked {
                acc.checked_successes += 1;
                if r.correct == Some(true) {
                    acc.correct += 1;
                }
            }
        }
    }
    Ok(groups
        .into_iter()
        .map(|(keys, acc)| SummaryRow {
            keys,
            correct: (acc.checked_successes > 0)
                .then(|| acc.correct as f64 / acc.checked_successes as f64),
            fails: 1.0 - acc.successes as f64 / acc.count as f64,
            time_s: (acc.successes > 0).then(|| acc.time_sum / acc.successes as f64),
        })
        .collect())
}

/// Serialize summary rows; the header comment records the averaging
/// conventions.
pub fn summary_to_csv(rows: &[SummaryRow], group_by: &[GroupKey]) -> String {
    let mut out = String::from(
        "# correct: mean over checked successes; fails: mean of (1 - success); time_s: mean seconds over successful runs only\n",
    );
    let mut columns: Vec<&str> = group_by.iter().map(|k| k.column_name()).collect();
    columns.extend(["correct", "fails", "time_s"]);
    out.push_str(&columns.join(","));
    out.push('\n');
    for row in rows {
        let mut fields = row.keys.clone();
        fields.push(row.correct.map(fmt_float).unwrap_or_default());
        fields.push(fmt_float(row.fails));
        fields.push(row.time_s.map(fmt_float).unwrap_or_default());
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Mean strategy time per gate-count bucket.
#[derive(Debug, Clone, PartialEq)]
pub struct TimingRow {
    pub gatecount: usize,
    pub strategy: Strategy,
    pub mean_time_s: f64,
}

/// Timing-scaling sweep: one restricted random circuit per gate count,
/// timed `iterations` times per strategy after a warm-up pass. The
/// circuits draw only hub-basis kinds so every compared strategy can
/// transpile them; correctness checking is skipped entirely.
#[allow(clippy::too_many_arguments)]
pub fn timing_profile(
    seed: u64,
    nb_qubits: usize,
    gatecounts: &[usize],
    strategies: &[Strategy],
    source: &Dialect,
    target: &Dialect,
    hub: &Dialect,
    iterations: usize,
) -> Result<Vec<TimingRow>, HarnessError> {
    if gatecounts.is_empty() {
        return Err(HarnessError::InvalidParams("no gate counts given".into()));
    }
    if strategies.is_empty() {
        return Err(HarnessError::InvalidParams("no strategies given".into()));
    }
    if iterations < 1 {
        return Err(HarnessError::InvalidParams("iterations must be >= 1".into()));
    }
    if nb_qubits < 2 {
        return Err(HarnessError::InvalidParams("nb_qubits must be >= 2".into()));
    }
    if let Some(&g) = gatecounts.iter().find(|&&g| g < nb_qubits) {
        return Err(HarnessError::InvalidParams(format!(
            "gatecount {g} is below nb_qubits {nb_qubits}"
        )));
    }

    let rules = builtin_rules();
    let circuits: Vec<Circuit> = gatecounts
        .iter()
        .enumerate()
        .map(|(i, &g)| pure_random_restricted(seed, i as u64, nb_qubits, g, &HUB_BASIS))
        .collect();

    let run = |strategy: Strategy, circuit: &Circuit| -> Result<Circuit, TranspileError> {
        match strategy {
            Strategy::OneToOne => one_to_one(circuit, target),
            Strategy::Hybrid => hybrid(circuit, target, &rules),
            Strategy::HubAndSpokes => hub_and_spokes(circuit, hub, target, &rules),
        }
    };
    let _ = source; // corpus kinds are restricted to the hub basis, which every dialect supports

    for &strategy in strategies {
        let _ = run(strategy, &circuits[0]);
    }

    let mut rows = Vec::with_capacity(circuits.len() * strategies.len());
    for (circuit, &gatecount) in circuits.iter().zip(gatecounts) {
        for &strategy in strategies {
            let mut total = 0.0;
            let mut successes = 0usize;
            for _ in 0..iterations {
                let start = Instant::now();
                let result = run(strategy, circuit);
                let elapsed = start.elapsed().as_secs_f64();
                if result.is_ok() {
                    total += elapsed;
                    successes += 1;
                }
            }
            let mean_time_s = if successes > 0 {
                total / successes as f64
            } else {
                f64::NAN
            };
            rows.push(TimingRow {
                gatecount,
                strategy,
                mean_time_s,
            });
        }
    }
    Ok(rows)
}

pub fn timing_to_csv(rows: &[TimingRow]) -> String {
    let mut out = String::from(TIMING_CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{},{},{}\n",
            row.gatecount,
            row.strategy,
            fmt_float(row.mean_time_s)
        ));
    }
    out
}
