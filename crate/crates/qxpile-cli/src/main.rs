//! Command-line surface tying circuit generation, transpilation,
//! equivalence checking, and benchmarking into reproducible runs.
//!
//! Exit codes: 0 success, 2 usage/parse/manifest errors, 3 transpilation
//! failure, 4 circuit too large to verify. Failures inside a benchmark are
//! data, not errors, so `bench` exits 0 even when transpilations fail.

use clap::{Args, Parser, Subcommand, ValueEnum};
use qxpile::dialect::{builtin_dialect, builtin_rules, load_dialect, Dialect, DEFAULT_HUB};
use qxpile::harness::{
    records_to_csv, run_experiment_with_jobs, summarize, summary_to_csv, timing_profile,
    timing_to_csv, ExperimentPlan, GroupKey, Strategy, DEFAULT_ITERATIONS,
};
use qxpile::ir::Circuit;
use qxpile::qasm2;
use qxpile::randgen::{
    self, derive_seed, dialect_gate_circuits, pure_random_corpus, range_gates, vqe_corpus,
    Entanglement, HeaParams,
};
use qxpile::sim::{self, DEFAULT_ATOL, DEFAULT_MAX_QUBITS};
use qxpile::transpile::{hub_and_spokes, hybrid, one_to_one};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_USAGE: u8 = 2;
const EXIT_TRANSPILE: u8 = 3;
const EXIT_TOO_LARGE: u8 = 4;

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

type CliResult = Result<(), CliError>;

#[derive(Parser)]
#[command(
    name = "qxpile",
    about = "Generate, transpile, check, and benchmark quantum circuits across gate dialects",
    version
)]
struct Cli {
    /// Extra directories to search for dialect manifests (<name>.json).
    /// The QXPILE_DIALECT_PATH environment variable (colon-separated)
    /// adds more.
    #[arg(long = "dialect-path", global = true, value_name = "DIR")]
    dialect_paths: Vec<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a circuit corpus (QASM files plus a corpus.csv manifest)
    Gen {
        #[command(subcommand)]
        generator: Generator,
    },
    /// Transpile one QASM file between dialects
    Transpile(TranspileArgs),
    /// Check two QASM files for unitary equivalence up to global phase
    Check(CheckArgs),
    /// Run a benchmark over a corpus, or a timing profile with --profile
    Bench(BenchArgs),
}

#[derive(Args)]
struct CommonGen {
    /// Master seed; every circuit derives an independent stream from it
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads for generation and emission
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Output directory (created if missing)
    out_dir: PathBuf,
}

#[derive(Subcommand)]
enum Generator {
    /// Unstructured random circuits over the 25-kind pure-random set
    Pure {
        /// Number of circuits
        #[arg(long, default_value_t = 50)]
        count: usize,
        /// Fixed qubit count (default: drawn from [2, 10] per circuit)
        #[arg(long)]
        qubits: Option<usize>,
        /// Fixed gate count (default: drawn from [qubits, 100] per circuit)
        #[arg(long)]
        gates: Option<usize>,
        #[command(flatten)]
        common: CommonGen,
    },
    /// VQE-style ansatz circuits
    Vqe {
        #[arg(long, default_value_t = 50)]
        count: usize,
        /// Fixed qubit count (default: drawn from [2, 10] per circuit)
        #[arg(long)]
        qubits: Option<usize>,
        /// Rotation kinds per layer, in [1, 3] (default: drawn per circuit)
        #[arg(long)]
        su2: Option<usize>,
        /// Entanglement structure (default: drawn per circuit)
        #[arg(long)]
        entanglement: Option<EntanglementArg>,
        /// Ansatz repetitions, in [1, 4] (default: drawn per circuit)
        #[arg(long)]
        reps: Option<usize>,
        #[command(flatten)]
        common: CommonGen,
    },
    /// One single-gate circuit per kind a dialect supports
    Sdkgates {
        /// Dialect whose vocabulary to sweep
        #[arg(long, default_value = "avalon")]
        dialect: String,
        /// Parameter resamples per gate kind
        #[arg(long, default_value_t = 50)]
        runs: usize,
        #[command(flatten)]
        common: CommonGen,
    },
    /// Pure-random circuits sweeping a gate-count range
    Range {
        #[arg(long)]
        qubits: usize,
        /// Smallest gate count (inclusive)
        #[arg(long)]
        min: usize,
        /// Largest gate count (exclusive)
        #[arg(long)]
        max: usize,
        #[arg(long, default_value_t = 1)]
        step: usize,
        #[command(flatten)]
        common: CommonGen,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EntanglementArg {
    Linear,
    Circular,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    #[value(name = "one_to_one")]
    OneToOne,
    #[value(name = "hub_and_spokes")]
    HubAndSpokes,
    #[value(name = "hybrid")]
    Hybrid,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::OneToOne => Strategy::OneToOne,
            StrategyArg::HubAndSpokes => Strategy::HubAndSpokes,
            StrategyArg::Hybrid => Strategy::Hybrid,
        }
    }
}

#[derive(Args)]
struct TranspileArgs {
    in_file: PathBuf,
    out_file: PathBuf,
    /// Source dialect (name or manifest path)
    #[arg(long = "from")]
    from: String,
    /// Target dialect (name or manifest path)
    #[arg(long = "to")]
    to: String,
    #[arg(long, value_enum, default_value = "hybrid")]
    strategy: StrategyArg,
    /// Hub dialect for hub-and-spokes routing
    #[arg(long, default_value = DEFAULT_HUB)]
    hub: String,
}

#[derive(Args)]
struct CheckArgs {
    file_a: PathBuf,
    file_b: PathBuf,
    /// Absolute tolerance of the equivalence check
    #[arg(long, default_value_t = DEFAULT_ATOL)]
    atol: f64,
    /// Refuse to verify circuits wider than this
    #[arg(long = "verify-max-qubits", default_value_t = DEFAULT_MAX_QUBITS)]
    verify_max_qubits: usize,
}

#[derive(Args)]
struct BenchArgs {
    /// Corpus directory containing corpus.csv (unused with --profile)
    corpus_dir: Option<PathBuf>,
    #[arg(long = "from")]
    from: String,
    #[arg(long = "to")]
    to: String,
    /// Comma-separated strategies, or "all"
    #[arg(long, default_value = "all")]
    strategies: String,
    #[arg(long, default_value = DEFAULT_HUB)]
    hub: String,
    /// Repetitions per (circuit, strategy)
    #[arg(long = "iters", default_value_t = DEFAULT_ITERATIONS)]
    iterations: usize,
    #[arg(long, default_value_t = DEFAULT_ATOL)]
    atol: f64,
    #[arg(long = "verify-max-qubits", default_value_t = DEFAULT_MAX_QUBITS)]
    verify_max_qubits: usize,
    /// Worker threads for the untimed verification phase
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Output directory for records.csv / summary.csv / timing.csv
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Summary grouping: comma-separated subset of
    /// strategy,circuit_type,dialect_pair
    #[arg(long = "group-by", default_value = "strategy")]
    group_by: String,
    /// Run a timing profile instead of a corpus benchmark
    #[arg(long)]
    profile: bool,
    /// Qubit count for --profile circuits
    #[arg(long)]
    qubits: Option<usize>,
    /// Gate-count sweep for --profile as MIN:MAX:STEP (MAX inclusive)
    #[arg(long)]
    gates: Option<String>,
    /// Seed for --profile circuit generation
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen { generator } => cmd_gen(generator),
        Command::Transpile(args) => cmd_transpile(args, &cli.dialect_paths),
        Command::Check(args) => cmd_check(args),
        Command::Bench(args) => cmd_bench(args, &cli.dialect_paths),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn dialect_search_dirs(extra: &[PathBuf]) -> Vec<PathBuf> {
    let mut dirs = extra.to_vec();
    if let Ok(env_paths) = std::env::var("QXPILE_DIALECT_PATH") {
        dirs.extend(env_paths.split(':').filter(|p| !p.is_empty()).map(PathBuf::from));
    }
    dirs
}

fn resolve_dialect(spec: &str, extra_paths: &[PathBuf]) -> Result<Dialect, CliError> {
    if let Some(d) = builtin_dialect(spec) {
        return Ok(d);
    }
    let mut candidates = Vec::new();
    let as_path = Path::new(spec);
    if as_path.is_file() {
        candidates.push(as_path.to_path_buf());
    }
    for dir in dialect_search_dirs(extra_paths) {
        candidates.push(dir.join(format!("{spec}.json")));
    }
    for candidate in candidates {
        if candidate.is_file() {
            let text = fs::read_to_string(&candidate).map_err(|e| {
                CliError::usage(format!("cannot read {}: {e}", candidate.display()))
            })?;
            return load_dialect(&text)
                .map_err(|e| CliError::usage(format!("{}: {e}", candidate.display())));
        }
    }
    Err(CliError::usage(format!(
        "unknown dialect '{spec}' (builtins: avalon, borealis, cascade, dovetail)"
    )))
}

fn read_circuit(path: &Path) -> Result<Circuit, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    qasm2::parse(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> CliResult {
    fs::write(path, contents)
        .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))
}

fn sanitize_file_stem(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

/// Write circuits plus the corpus.csv manifest. Emission parallelizes
/// across circuits; files land in corpus order either way.
fn write_corpus(out_dir: &Path, circuits: &[(String, Circuit)], jobs: usize) -> CliResult {
    fs::create_dir_all(out_dir)
        .map_err(|e| CliError::usage(format!("cannot create {}: {e}", out_dir.display())))?;
    let emit_all = || -> Vec<String> {
        use rayon::prelude::*;
        if jobs > 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .expect("thread pool");
            pool.install(|| circuits.par_iter().map(|(_, c)| qasm2::emit(c)).collect())
        } else {
            circuits.iter().map(|(_, c)| qasm2::emit(c)).collect()
        }
    };
    let texts = emit_all();

    let mut manifest = String::from("circuit_name,circuit_type,nb_qubits,gatecount,file\n");
    for ((file_stem, circuit), text) in circuits.iter().zip(&texts) {
        let file_name = format!("{file_stem}.qasm");
        write_file(&out_dir.join(&file_name), text)?;
        writeln!(
            manifest,
            "{},{},{},{},{}",
            circuit.name,
            circuit.circuit_type,
            circuit.nb_qubits(),
            circuit.gatecount(),
            file_name
        )
        .expect("string write");
    }
    write_file(&out_dir.join("corpus.csv"), &manifest)?;
    println!(
        "wrote {} circuits and corpus.csv to {}",
        circuits.len(),
        out_dir.display()
    );
    Ok(())
}

fn cmd_gen(generator: Generator) -> CliResult {
    let gen_err = |e: randgen::GenError| CliError::usage(e.to_string());
    let (circuits, common): (Vec<(String, Circuit)>, CommonGen) = match generator {
        Generator::Pure {
            count,
            qubits,
            gates,
            common,
        } => {
            let corpus =
                pure_random_corpus(common.seed, count, qubits, gates).map_err(gen_err)?;
            (
                corpus
                    .into_iter()
                    .enumerate()
                    .map(|(i, c)| (format!("pure_{i:03}"), c))
                    .collect(),
                common,
            )
        }
        Generator::Vqe {
            count,
            qubits,
            su2,
            entanglement,
            reps,
            common,
        } => {
            let hea = match (su2, entanglement, reps) {
                (None, None, None) => None,
                (Some(nb_su2_gates), Some(ent), Some(reps)) => Some(HeaParams {
                    nb_su2_gates,
                    entanglement: match ent {
                        EntanglementArg::Linear => Entanglement::Linear,
                        EntanglementArg::Circular => Entanglement::Circular,
                    },
                    reps,
                }),
                _ => {
                    return Err(CliError::usage(
                        "--su2, --entanglement, and --reps must be given together",
                    ));
                }
            };
            let corpus = vqe_corpus(common.seed, count, qubits, hea).map_err(gen_err)?;
            (
                corpus
                    .into_iter()
                    .enumerate()
                    .map(|(i, c)| (format!("vqe_{i:03}"), c))
                    .collect(),
                common,
            )
        }
        Generator::Sdkgates {
            dialect,
            runs,
            common,
        } => {
            let dialect = resolve_dialect(&dialect, &[])?;
            let mut circuits = Vec::new();
            for run in 0..runs {
                let sub_seed = derive_seed(common.seed, run as u64);
                for (name, circuit) in dialect_gate_circuits(&dialect, sub_seed) {
                    circuits.push((format!("{}_r{run:02}", sanitize_file_stem(&name)), circuit));
                }
            }
            (circuits, common)
        }
        Generator::Range {
            qubits,
            min,
            max,
            step,
            common,
        } => {
            let corpus = range_gates(common.seed, qubits, min, max, step).map_err(gen_err)?;
            (
                corpus
                    .into_iter()
                    .map(|c| {
                        let g = c.gatecount();
                        (format!("range_g{g:04}"), c.renamed(format!("PureRandom-g{g:04}")))
                    })
                    .collect(),
                common,
            )
        }
    };
    write_corpus(&common.out_dir, &circuits, common.jobs)
}

fn cmd_transpile(args: TranspileArgs, dialect_paths: &[PathBuf]) -> CliResult {
    let source = resolve_dialect(&args.from, dialect_paths)?;
    let target = resolve_dialect(&args.to, dialect_paths)?;
    let hub = resolve_dialect(&args.hub, dialect_paths)?;
    let circuit = read_circuit(&args.in_file)?;

    if let Some(gate) = circuit.gates().iter().find(|g| !source.supports(g.kind())) {
        return Err(CliError::usage(format!(
            "input uses '{}', which dialect '{}' does not support",
            gate.kind(),
            source.name
        )));
    }

    let rules = builtin_rules();
    let result = match Strategy::from(args.strategy) {
        Strategy::OneToOne => one_to_one(&circuit, &target),
        Strategy::Hybrid => hybrid(&circuit, &target, &rules),
        Strategy::HubAndSpokes => hub_and_spokes(&circuit, &hub, &target, &rules),
    };
    match result {
        Ok(out) => {
            write_file(&args.out_file, &qasm2::emit(&out))?;
            println!(
                "transpiled {} -> {} ({} gates -> {} gates)",
                source.name,
                target.name,
                circuit.gatecount(),
                out.gatecount()
            );
            Ok(())
        }
        Err(e) => Err(CliError {
            code: EXIT_TRANSPILE,
            message: e.to_string(),
        }),
    }
}

fn cmd_check(args: CheckArgs) -> CliResult {
    let a = read_circuit(&args.file_a)?;
    let b = read_circuit(&args.file_b)?;
    let widest = a.nb_qubits().max(b.nb_qubits());
    if widest > args.verify_max_qubits {
        return Err(CliError {
            code: EXIT_TOO_LARGE,
            message: format!(
                "{widest} qubits exceeds the verification threshold of {}",
                args.verify_max_qubits
            ),
        });
    }
    if a.nb_qubits() != b.nb_qubits() {
        return Err(CliError {
            code: 1,
            message: format!(
                "not equivalent: circuits differ in width ({} vs {} qubits)",
                a.nb_qubits(),
                b.nb_qubits()
            ),
        });
    }
    let ua = sim::circuit_unitary(&a, args.verify_max_qubits).expect("within threshold");
    let ub = sim::circuit_unitary(&b, args.verify_max_qubits).expect("within threshold");
    let equal = sim::equal_up_to_global_phase(&ua, &ub, args.atol).expect("same dimension");
    let deviation = sim::global_phase_deviation(&ua, &ub).expect("same dimension");
    println!("max deviation up to global phase: {deviation:.3e} (atol {:e})", args.atol);
    if equal {
        println!("equivalent up to global phase");
        Ok(())
    } else {
        Err(CliError {
            code: 1,
            message: "not equivalent up to global phase".into(),
        })
    }
}

fn parse_strategies(spec: &str) -> Result<Vec<Strategy>, CliError> {
    if spec == "all" {
        return Ok(Strategy::ALL.to_vec());
    }
    spec.split(',')
        .map(|name| {
            Strategy::from_name(name.trim()).ok_or_else(|| {
                CliError::usage(format!(
                    "unknown strategy '{name}' (expected one_to_one, hub_and_spokes, hybrid, or all)"
                ))
            })
        })
        .collect()
}

fn parse_group_by(spec: &str) -> Result<Vec<GroupKey>, CliError> {
    spec.split(',')
        .map(|name| match name.trim() {
            "strategy" => Ok(GroupKey::Strategy),
            "circuit_type" => Ok(GroupKey::CircuitType),
            "dialect_pair" => Ok(GroupKey::DialectPair),
            other => Err(CliError::usage(format!("unknown group key '{other}'"))),
        })
        .collect()
}

fn parse_gate_sweep(spec: &str) -> Result<Vec<usize>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::usage("--gates expects MIN:MAX:STEP"));
    }
    let parse = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| CliError::usage(format!("invalid number '{s}' in --gates")))
    };
    let (min, max, step) = (parse(parts[0])?, parse(parts[1])?, parse(parts[2])?);
    if step == 0 || min > max {
        return Err(CliError::usage("--gates requires MIN <= MAX and STEP >= 1"));
    }
    Ok((min..=max).step_by(step).collect())
}

fn load_corpus(dir: &Path) -> Result<Vec<Circuit>, CliError> {
    let manifest_path = dir.join("corpus.csv");
    let manifest = fs::read_to_string(&manifest_path).map_err(|e| {
        CliError::usage(format!("cannot read {}: {e}", manifest_path.display()))
    })?;
    let mut circuits = Vec::new();
    for (lineno, line) in manifest.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(CliError::usage(format!(
                "{}:{}: expected 5 fields",
                manifest_path.display(),
                lineno + 1
            )));
        }
        let mut circuit = read_circuit(&dir.join(fields[4]))?;
        circuit.name = fields[0].to_string();
        circuit.circuit_type = fields[1].to_string();
        circuits.push(circuit);
    }
    if circuits.is_empty() {
        return Err(CliError::usage(format!(
            "{} lists no circuits",
            manifest_path.display()
        )));
    }
    Ok(circuits)
}

fn print_summary_table(rows: &[qxpile::harness::SummaryRow], group_by: &[GroupKey]) {
    let mut header: Vec<String> = group_by
        .iter()
        .map(|k| k.column_name().to_string())
        .collect();
    header.extend(["correct", "fails", "time_s"].map(String::from));
    let table: Vec<Vec<String>> = std::iter::once(header)
        .chain(rows.iter().map(|row| {
            let mut fields = row.keys.clone();
            fields.push(
                row.correct
                    .map(|v| format!("{v:.6}"))
                    .unwrap_or_else(|| "-".into()),
            );
            fields.push(format!("{:.6}", row.fails));
            fields.push(
                row.time_s
                    .map(|v| format!("{v:.6}"))
                    .unwrap_or_else(|| "-".into()),
            );
            fields
        }))
        .collect();
    let widths: Vec<usize> = (0..table[0].len())
        .map(|col| table.iter().map(|row| row[col].len()).max().unwrap_or(0))
        .collect();
    for row in &table {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:<w$}"))
            .collect();
        println!("{}", line.join("  ").trim_end());
    }
}

fn cmd_bench(args: BenchArgs, dialect_paths: &[PathBuf]) -> CliResult {
    let source = resolve_dialect(&args.from, dialect_paths)?;
    let target = resolve_dialect(&args.to, dialect_paths)?;
    let hub = resolve_dialect(&args.hub, dialect_paths)?;
    let strategies = parse_strategies(&args.strategies)?;
    fs::create_dir_all(&args.out)
        .map_err(|e| CliError::usage(format!("cannot create {}: {e}", args.out.display())))?;

    if args.profile {
        let qubits = args
            .qubits
            .ok_or_else(|| CliError::usage("--profile requires --qubits"))?;
        let gates = args
            .gates
            .as_deref()
            .ok_or_else(|| CliError::usage("--profile requires --gates MIN:MAX:STEP"))?;
        let gatecounts = parse_gate_sweep(gates)?;
        let rows = timing_profile(
            args.seed,
            qubits,
            &gatecounts,
            &strategies,
            &source,
            &target,
            &hub,
            args.iterations,
        )
        .map_err(|e| CliError::usage(e.to_string()))?;
        let path = args.out.join("timing.csv");
        write_file(&path, &timing_to_csv(&rows))?;
        println!("wrote {}", path.display());
        return Ok(());
    }

    let corpus_dir = args
        .corpus_dir
        .as_deref()
        .ok_or_else(|| CliError::usage("bench requires a corpus directory (or --profile)"))?;
    let corpus = load_corpus(corpus_dir)?;
    let group_by = parse_group_by(&args.group_by)?;

    let mut plan = ExperimentPlan::new(corpus, source, target);
    plan.hub = hub;
    plan.strategies = strategies;
    plan.iterations = args.iterations;
    plan.atol = args.atol;
    plan.verify_max_qubits = args.verify_max_qubits;

    let records = run_experiment_with_jobs(&plan, args.jobs.max(1));
    let rows = summarize(&records, &group_by).map_err(|e| CliError::usage(e.to_string()))?;

    let records_path = args.out.join("records.csv");
    write_file(&records_path, &records_to_csv(&records))?;
    let summary_path = args.out.join("summary.csv");
    write_file(&summary_path, &summary_to_csv(&rows, &group_by))?;

    print_summary_table(&rows, &group_by);
    println!(
        "wrote {} and {}",
        records_path.display(),
        summary_path.display()
    );
    Ok(())
}
