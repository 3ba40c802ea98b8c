//! Command-line driver: run enumerators, pace their output, and analyze
//! recorded traces.
//!
//! Exit codes: 0 on success, 1 on operational failure (bad input, IO,
//! exhausted cost cap), 2 when a declared contract was broken (bound or
//! oracle violations, duplicate emissions, mismatched solution sets).

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use enumpace::anothersol::{roundtrip, EnumeratorBoundDecl};
use enumpace::instrument::{
    check_cap_bound, check_delay_bound, fit_exponent, memory_profile, report_json, RunReport,
};
use enumpace::problem::{brute_force_enum, Instance, ProblemDescriptor};
use enumpace::problems::horn::{HornFormula, HornSearch};
use enumpace::problems::synthetic::SyntheticSpec;
use enumpace::problems::vertex_cover::{CoverSearch, GraphInstance};
use enumpace::regularize::{cap_to_inc, QueueSample, RegularizeOptions};
use enumpace::schedule::{ipow, ParamCost, Polynomial};
use enumpace::trace::run_to_completion;
use enumpace::{
    BudgetSchedule, DelayTrace, EnumError, Solution, SteppedEnumerator, DEFAULT_COST_CAP,
};

const COST_CAP_ENV: &str = "ENUM_COST_CAP";

#[derive(Parser)]
#[command(
    name = "enumpace",
    version,
    about = "Run, pace, and analyze self-accounting enumerators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a problem's enumerator to completion and emit its solutions.
    Enumerate(EnumerateArgs),
    /// Run with paced output under a cumulative-bound schedule.
    Regularize(RegularizeArgs),
    /// Check an enumerator against the brute-force reference.
    Compare(CompareArgs),
    /// Drive the oracle reduction end to end and compare with brute force.
    Roundtrip(RoundtripArgs),
    /// Fit a growth exponent to a recorded delay trace.
    Fit(FitArgs),
    /// Check a recorded trace against an explicit bound.
    Check(CheckArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProblemKind {
    VertexCover,
    HornSat,
    Synthetic,
}

#[derive(Args)]
struct ProblemArgs {
    /// Problem family to load.
    #[arg(long, value_enum)]
    problem: ProblemKind,
    /// Edge-list file (vertex-cover).
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Cover size budget (vertex-cover).
    #[arg(long)]
    k: Option<u32>,
    /// DIMACS file (horn-sat).
    #[arg(long)]
    cnf: Option<PathBuf>,
    /// Profile description JSON (synthetic).
    #[arg(long)]
    spec: Option<PathBuf>,
}

#[derive(Args)]
struct EnumerateArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Abort the run after this many ticks (default: the ENUM_COST_CAP
    /// environment variable, then 100000000).
    #[arg(long)]
    cost_cap: Option<u64>,
    /// Write solutions here instead of stdout.
    #[arg(long)]
    solutions_out: Option<PathBuf>,
    /// Write the delay trace as CSV.
    #[arg(long)]
    trace_out: Option<PathBuf>,
    /// Write a JSON run report.
    #[arg(long)]
    report_out: Option<PathBuf>,
}

#[derive(Args)]
struct RegularizeArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long)]
    cost_cap: Option<u64>,
    /// Schedule JSON declaring the wrapped enumerator's cumulative bound.
    #[arg(long)]
    schedule: Option<PathBuf>,
    /// Calibrate the schedule scale from a profiling run at this exponent,
    /// instead of reading --schedule.
    #[arg(long)]
    exponent: Option<u32>,
    /// Keep running across broken thresholds instead of failing.
    #[arg(long)]
    continue_on_violation: bool,
    #[arg(long)]
    solutions_out: Option<PathBuf>,
    #[arg(long)]
    trace_out: Option<PathBuf>,
    /// Write queue sizes observed at each release as CSV.
    #[arg(long)]
    queue_out: Option<PathBuf>,
    #[arg(long)]
    report_out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long)]
    cost_cap: Option<u64>,
}

#[derive(Args)]
struct RoundtripArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long)]
    cost_cap: Option<u64>,
    /// Declared bound for the simulated enumerator; defaults to a bound
    /// calibrated from one profiling run, which every simulation honors.
    #[arg(long)]
    schedule: Option<PathBuf>,
}

#[derive(Args)]
struct FitArgs {
    /// Trace CSV to read.
    #[arg(long)]
    trace: PathBuf,
    /// First delay index of the fit window (default: max(8, last / 100)).
    #[arg(long)]
    i_min: Option<u64>,
    /// Last delay index of the fit window (default: the last index).
    #[arg(long)]
    i_max: Option<u64>,
    #[arg(long)]
    report_out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckKindArg {
    /// Every delay against scale * i^exponent.
    Delay,
    /// Every emission's cumulative cost against scale * i^exponent.
    CapTotal,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    trace: PathBuf,
    #[arg(long, value_enum)]
    kind: CheckKindArg,
    #[arg(long)]
    scale: u128,
    #[arg(long)]
    exponent: u32,
}

struct Failure {
    message: String,
    code: i32,
}

impl From<String> for Failure {
    fn from(message: String) -> Self {
        Failure { message, code: 1 }
    }
}

impl From<&str> for Failure {
    fn from(message: &str) -> Self {
        Failure {
            message: message.to_string(),
            code: 1,
        }
    }
}

impl From<EnumError> for Failure {
    fn from(err: EnumError) -> Self {
        Failure {
            message: err.to_string(),
            code: exit_code_for(&err),
        }
    }
}

/// Contract breaches exit with 2, everything else with 1.
fn exit_code_for(err: &EnumError) -> i32 {
    match err {
        EnumError::DuplicateEmission(_)
        | EnumError::CostAccountingViolation(_)
        | EnumError::BoundViolation { .. }
        | EnumError::OracleContractViolation(_) => 2,
        _ => 1,
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    let code = match dispatch(cli) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            failure.code
        }
    };
    std::process::exit(code);
}

fn dispatch(cli: Cli) -> Result<i32, Failure> {
    match cli.command {
        Command::Enumerate(args) => cmd_enumerate(args),
        Command::Regularize(args) => cmd_regularize(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Roundtrip(args) => cmd_roundtrip(args),
        Command::Fit(args) => cmd_fit(args),
        Command::Check(args) => cmd_check(args),
    }
}

/// A problem instance ready to run: its canonical encoding, optional
/// membership check, schedule parameters, and an enumerator factory.
struct Loaded {
    name: &'static str,
    raw: Vec<u8>,
    descriptor: Option<ProblemDescriptor>,
    k: u64,
    n: u64,
    make: Box<dyn Fn() -> SteppedEnumerator>,
}

fn load_problem(args: &ProblemArgs) -> Result<Loaded, Failure> {
    let forbid = |flag: bool, message: &str| -> Result<(), Failure> {
        if flag {
            Err(Failure::from(message))
        } else {
            Ok(())
        }
    };
    match args.problem {
        ProblemKind::VertexCover => {
            forbid(args.cnf.is_some(), "--cnf applies to --problem horn-sat")?;
            forbid(args.spec.is_some(), "--spec applies to --problem synthetic")?;
            let path = args
                .graph
                .as_ref()
                .ok_or("--problem vertex-cover requires --graph")?;
            let k = args.k.ok_or("--problem vertex-cover requires --k")?;
            let text = read_text(path)?;
            let graph = GraphInstance::parse_edge_list(&text, k)
                .map_err(|err| format!("{}: {err}", path.display()))?;
            let raw = graph.to_bytes();
            Ok(Loaded {
                name: "vertex-cover",
                n: raw.len() as u64,
                raw,
                descriptor: Some(enumpace::problems::vertex_cover::descriptor()),
                k: k as u64,
                make: Box::new(move || {
                    SteppedEnumerator::from_process(CoverSearch::new(&graph))
                }),
            })
        }
        ProblemKind::HornSat => {
            forbid(args.graph.is_some(), "--graph applies to --problem vertex-cover")?;
            forbid(args.k.is_some(), "--k applies to --problem vertex-cover")?;
            forbid(args.spec.is_some(), "--spec applies to --problem synthetic")?;
            let path = args.cnf.as_ref().ok_or("--problem horn-sat requires --cnf")?;
            let bytes = read_bytes(path)?;
            let formula = HornFormula::parse_dimacs(&bytes)
                .map_err(|err| format!("{}: {err}", path.display()))?;
            let raw = formula.to_bytes();
            Ok(Loaded {
                name: "horn-sat",
                n: raw.len() as u64,
                raw,
                descriptor: Some(enumpace::problems::horn::descriptor()),
                k: 1,
                make: Box::new(move || SteppedEnumerator::from_process(HornSearch::new(&formula))),
            })
        }
        ProblemKind::Synthetic => {
            forbid(args.graph.is_some(), "--graph applies to --problem vertex-cover")?;
            forbid(args.k.is_some(), "--k applies to --problem vertex-cover")?;
            forbid(args.cnf.is_some(), "--cnf applies to --problem horn-sat")?;
            let path = args
                .spec
                .as_ref()
                .ok_or("--problem synthetic requires --spec")?;
            let text = read_text(path)?;
            let spec: SyntheticSpec = serde_json::from_str(&text)
                .map_err(|err| format!("{}: {err}", path.display()))?;
            let raw = serde_json::to_vec(&spec).expect("spec serialization cannot fail");
            Ok(Loaded {
                name: "synthetic",
                raw,
                descriptor: None,
                k: spec.k,
                n: spec.n,
                make: Box::new(move || SteppedEnumerator::from_process(spec.process())),
            })
        }
    }
}

fn cmd_enumerate(args: EnumerateArgs) -> Result<i32, Failure> {
    let loaded = load_problem(&args.problem)?;
    let cap = resolve_cost_cap(args.cost_cap)?;
    let mut enumerator = (loaded.make)();
    let mut report = RunReport::new(loaded.name, &loaded.raw, loaded.k, loaded.n);
    match run_to_completion(&mut enumerator, cap) {
        Ok(run) => {
            report.solutions = run.solutions.len() as u64;
            report.total_cost = run.trace.total_cost();
            emit_solutions(&run.solutions, args.solutions_out.as_deref())?;
            if let Some(path) = &args.trace_out {
                write_atomic(path, &run.trace.to_csv())?;
                report.trace_csv = Some(path.display().to_string());
            }
            write_report(&report, args.report_out.as_deref())?;
            Ok(0)
        }
        Err(err) => {
            report.solutions = enumerator.emitted_count();
            report.total_cost = enumerator.cost_consumed();
            fail_run(report, err, args.report_out.as_deref())
        }
    }
}

fn cmd_regularize(args: RegularizeArgs) -> Result<i32, Failure> {
    let loaded = load_problem(&args.problem)?;
    let cap = resolve_cost_cap(args.cost_cap)?;
    let schedule = resolve_schedule(args.schedule.as_deref(), args.exponent, &loaded, cap)?;
    let options = RegularizeOptions {
        continue_on_violation: args.continue_on_violation,
    };
    let paced = cap_to_inc((loaded.make)(), &schedule, loaded.k, loaded.n, options)?;
    let mut enumerator = paced.enumerator;
    let samples_handle = paced.queue_samples;

    let mut report = RunReport::new(loaded.name, &loaded.raw, loaded.k, loaded.n);
    let outcome = run_to_completion(&mut enumerator, cap);
    let samples = samples_handle
        .lock()
        .expect("queue sample lock poisoned")
        .clone();
    if let Some(path) = &args.queue_out {
        write_atomic(path, &queue_csv(&samples))?;
    }
    report.memory = memory_profile(&samples).ok();
    match outcome {
        Ok(run) => {
            report.solutions = run.solutions.len() as u64;
            report.total_cost = run.trace.total_cost();
            emit_solutions(&run.solutions, args.solutions_out.as_deref())?;
            if let Some(path) = &args.trace_out {
                write_atomic(path, &run.trace.to_csv())?;
                report.trace_csv = Some(path.display().to_string());
            }
            write_report(&report, args.report_out.as_deref())?;
            Ok(0)
        }
        Err(err) => {
            report.solutions = enumerator.emitted_count();
            report.total_cost = enumerator.cost_consumed();
            fail_run(report, err, args.report_out.as_deref())
        }
    }
}

fn cmd_compare(args: CompareArgs) -> Result<i32, Failure> {
    let loaded = load_problem(&args.problem)?;
    let descriptor = loaded
        .descriptor
        .clone()
        .ok_or("compare needs a membership check; synthetic profiles have none")?;
    let cap = resolve_cost_cap(args.cost_cap)?;
    let mut enumerator = (loaded.make)();
    let run = run_to_completion(&mut enumerator, cap)?;
    let instance = Instance::new(&descriptor, loaded.raw.clone());
    let expected = brute_force_enum(&descriptor, &instance, cap)?;
    let produced: BTreeSet<Solution> = run.solutions.iter().cloned().collect();
    if produced == expected {
        println!("MATCH: {} solutions", expected.len());
        Ok(0)
    } else {
        let missing = expected.difference(&produced).count();
        let extra = produced.difference(&expected).count();
        println!("MISMATCH: {missing} missing, {extra} extra");
        Ok(2)
    }
}

fn cmd_roundtrip(args: RoundtripArgs) -> Result<i32, Failure> {
    let loaded = load_problem(&args.problem)?;
    let descriptor = loaded
        .descriptor
        .clone()
        .ok_or("roundtrip needs a membership check; synthetic profiles have none")?;
    let cap = resolve_cost_cap(args.cost_cap)?;
    let schedule = match &args.schedule {
        Some(path) => read_schedule(path)?,
        None => {
            // One profiling run bounds the total cost; a constant budget of
            // that size lets every simulation finish.
            let mut probe = (loaded.make)();
            let run = run_to_completion(&mut probe, cap)
                .map_err(|err| Failure::from(format!("profiling run failed: {err}")))?;
            let total = run.trace.total_cost().max(1);
            BudgetSchedule::new(ParamCost::Const(total), Polynomial(vec![1]), 0)
        }
    };
    let instance = Instance::new(&descriptor, loaded.raw.clone());
    let report = roundtrip(
        &descriptor,
        &instance,
        loaded.make,
        EnumeratorBoundDecl(schedule),
        cap,
    )?;
    let summary = serde_json::json!({
        "pass": report.pass,
        "solutions": report.solutions.len(),
        "oracle_calls": report.oracle_calls,
        "ticks_total": report.ticks_total,
    });
    println!(
        "{}",
        serde_json::to_string_pretty(&summary).expect("summary serialization cannot fail")
    );
    Ok(if report.pass { 0 } else { 2 })
}

fn cmd_fit(args: FitArgs) -> Result<i32, Failure> {
    let trace = read_trace(&args.trace)?;
    let last = trace.delays().len().saturating_sub(1) as u64;
    let i_min = args.i_min.unwrap_or_else(|| (last / 100).max(8));
    let i_max = args.i_max.unwrap_or(last);
    let fit = fit_exponent(&trace, i_min, i_max).map_err(|err| Failure::from(err.to_string()))?;
    let text = serde_json::to_string_pretty(&fit).expect("fit serialization cannot fail");
    println!("{text}");
    if let Some(path) = &args.report_out {
        write_atomic(path, &format!("{text}\n"))?;
    }
    Ok(0)
}

fn cmd_check(args: CheckArgs) -> Result<i32, Failure> {
    let trace = read_trace(&args.trace)?;
    let report = match args.kind {
        CheckKindArg::Delay => check_delay_bound(&trace, args.scale, args.exponent),
        CheckKindArg::CapTotal => check_cap_bound(&trace, args.scale, args.exponent),
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("report serialization cannot fail")
    );
    Ok(if report.pass { 0 } else { 2 })
}

fn resolve_cost_cap(flag: Option<u64>) -> Result<u64, Failure> {
    if let Some(cap) = flag {
        return Ok(cap);
    }
    match std::env::var(COST_CAP_ENV) {
        Ok(text) => text
            .trim()
            .parse()
            .map_err(|_| Failure::from(format!("{COST_CAP_ENV} must be an integer, got {text:?}"))),
        Err(_) => Ok(DEFAULT_COST_CAP),
    }
}

fn resolve_schedule(
    schedule: Option<&Path>,
    exponent: Option<u32>,
    loaded: &Loaded,
    cap: u64,
) -> Result<BudgetSchedule, Failure> {
    match (schedule, exponent) {
        (Some(path), None) => read_schedule(path),
        (None, Some(exponent)) => calibrate_schedule(loaded, exponent, cap),
        (Some(_), Some(_)) => Err("pass either --schedule or --exponent, not both".into()),
        (None, None) => Err("regularize needs --schedule or --exponent".into()),
    }
}

/// Smallest constant schedule at the given exponent that the enumerator's
/// own emission costs stay within, measured on one profiling run.
fn calibrate_schedule(loaded: &Loaded, exponent: u32, cap: u64) -> Result<BudgetSchedule, Failure> {
    let mut probe = (loaded.make)();
    let run = run_to_completion(&mut probe, cap)
        .map_err(|err| Failure::from(format!("profiling run failed: {err}")))?;
    let mut scale: u128 = 1;
    for (idx, &cost) in run.trace.emit_costs().iter().enumerate() {
        let denom = ipow(idx as u128 + 1, exponent as u64);
        scale = scale.max((cost as u128).div_ceil(denom));
    }
    let scale = u64::try_from(scale)
        .map_err(|_| Failure::from("calibrated scale does not fit in 64 bits"))?;
    eprintln!("calibrated schedule: {scale} * i^{exponent}");
    Ok(BudgetSchedule::new(
        ParamCost::Const(scale),
        Polynomial(vec![1]),
        exponent,
    ))
}

fn fail_run(mut report: RunReport, err: EnumError, report_out: Option<&Path>) -> Result<i32, Failure> {
    report.pass = false;
    report.error = Some(err.to_string());
    write_report(&report, report_out)?;
    eprintln!("error: {err}");
    Ok(exit_code_for(&err))
}

fn emit_solutions(solutions: &[Solution], out: Option<&Path>) -> Result<(), Failure> {
    let mut text = String::new();
    for solution in solutions {
        text.push_str(&solution.escaped());
        text.push('\n');
    }
    match out {
        Some(path) => write_atomic(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_report(report: &RunReport, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => write_atomic(path, &report_json(report)),
        None => Ok(()),
    }
}

fn queue_csv(samples: &[QueueSample]) -> String {
    let mut text = String::from("i,queue_size\n");
    for sample in samples {
        text.push_str(&format!("{},{}\n", sample.emission_index, sample.queue_size));
    }
    text
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|err| format!("cannot read {}: {err}", path.display()).into())
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|err| format!("cannot read {}: {err}", path.display()).into())
}

fn read_trace(path: &Path) -> Result<DelayTrace, Failure> {
    let text = read_text(path)?;
    DelayTrace::from_csv(&text).map_err(|err| format!("{}: {err}", path.display()).into())
}

fn read_schedule(path: &Path) -> Result<BudgetSchedule, Failure> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|err| format!("{}: {err}", path.display()).into())
}

/// Write through a sibling temp file so readers never observe a partial
/// file.
fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let mut tmp_name = path
        .file_name()
        .ok_or_else(|| Failure::from(format!("{} has no file name", path.display())))?
        .to_os_string();
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    fs::write(&tmp, contents)
        .map_err(|err| Failure::from(format!("cannot write {}: {err}", tmp.display())))?;
    fs::rename(&tmp, path)
        .map_err(|err| Failure::from(format!("cannot rename {}: {err}", tmp.display())))
}
