//! `activetime` command-line front end.
//!
//! Exit codes: 0 success, 1 infeasible input or failed verification,
//! 2 usage or input errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use activetime::gen::{from_3xc, gen_random, tight_gap_family, RandomSpec, RegionKind};
use activetime::model::{
    batches_to_value, instance_to_value, parse_batches, parse_instance, parse_preemptive,
    parse_schedule, preemptive_to_value, pretty, schedule_to_value, timed_to_value,
    validate_batches, validate_integral, validate_preemptive, NumberFormat,
};
use activetime::preempt::{
    assignment_to_timed, build_lp, emit_lp_file, preemption_gap, preemptive_opt_b2, LpForm,
    LpNumbers,
};
use activetime::rational::{format_rational, int};
use activetime::{batchdp, lazyact, multiwin, oracle, Error, Instance, Rational};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "activetime", version, about = "Active-time scheduling solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance with one algorithm.
    Solve(SolveArgs),
    /// Check a schedule file against an instance.
    Verify(VerifyArgs),
    /// Generate an instance.
    Gen(GenArgs),
    /// Write the preemptive LP model.
    ExportLp(ExportArgs),
    /// Compare integral and arbitrary preemption for B = 2.
    Compare(CompareArgs),
    /// Run algorithms over instances and write CSV rows.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Lazy,
    LazyLinear,
    DpBatch,
    DpThroughput,
    B2,
    B2Lengths,
    B2Budget,
    Preempt,
    Greedy,
    Oracle,
}

impl Algo {
    fn name(self) -> String {
        self.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    algo: Algo,
    /// Batch budget for dp-throughput.
    #[arg(long)]
    budget: Option<usize>,
    /// Active-slot budget for b2-budget and oracle.
    #[arg(long)]
    alpha: Option<usize>,
    /// Lossy float numbers instead of exact rational strings.
    #[arg(long)]
    float: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    /// Integral, preemptive or batch schedule JSON.
    #[arg(long)]
    schedule: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Random,
    Xc3,
    Gap,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegionArg {
    Window,
    Slots,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    n: usize,
    #[arg(long, default_value_t = 6)]
    horizon: u32,
    #[arg(long, default_value_t = 2)]
    b: u32,
    #[arg(long, value_enum, default_value_t = RegionArg::Window)]
    region: RegionArg,
    #[arg(long, default_value_t = 1)]
    max_length: u32,
    #[arg(long, default_value_t = 1)]
    grid: u32,
    #[arg(long, default_value_t = 50)]
    density: u32,
    /// Block count for the gap family.
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// For xc3: JSON `{"elements": [...], "triples": [[a, b, c], ...]}`.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormArg {
    Slot,
    Interval,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = FormArg::Slot)]
    form: FormArg,
    /// Write coefficients as `p/q` fractions.
    #[arg(long)]
    fractions: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    float: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Instance files; repeat the flag for several.
    #[arg(long, required = true)]
    input: Vec<PathBuf>,
    /// Algorithms; repeat the flag for several.
    #[arg(long, value_enum, required = true)]
    algo: Vec<Algo>,
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    alpha: Option<usize>,
    #[arg(long)]
    csv: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Infeasible(_) | Error::CompletionInfeasible(_) | Error::UncoverableCover => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

type Outcome = std::result::Result<u8, Failure>;

fn read(path: &Path) -> std::result::Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> std::result::Result<Instance, Failure> {
    Ok(parse_instance(&read(path)?)?)
}

fn emit(output: Option<&Path>, text: &str) -> std::result::Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| usage(e.to_string()))
        }
    }
}

fn json_text(v: &Value) -> String {
    let mut s = pretty(v);
    s.push('\n');
    s
}

struct Solved {
    value: Value,
    active: Rational,
    jobs: usize,
    complete: bool,
}

fn integral(inst: &Instance, s: activetime::IntegralSchedule, fmt: NumberFormat) -> Solved {
    Solved {
        active: int(s.active_time() as i64),
        jobs: s.jobs_scheduled(),
        complete: s.jobs_scheduled() == inst.len(),
        value: schedule_to_value(&s, fmt),
    }
}

fn batches(inst: &Instance, s: activetime::BatchSchedule, fmt: NumberFormat) -> Solved {
    Solved {
        active: int(s.count() as i64),
        jobs: s.jobs_scheduled(),
        complete: s.jobs_scheduled() == inst.len(),
        value: batches_to_value(&s, fmt),
    }
}

fn solve(
    inst: &Instance,
    algo: Algo,
    budget: Option<usize>,
    alpha: Option<usize>,
    fmt: NumberFormat,
) -> std::result::Result<Solved, Failure> {
    Ok(match algo {
        Algo::Lazy => integral(inst, lazyact::lazy_activation(inst)?, fmt),
        Algo::LazyLinear => integral(inst, lazyact::lazy_activation_linear(inst)?, fmt),
        Algo::B2 => integral(inst, multiwin::solve_b2(inst)?.0, fmt),
        Algo::B2Lengths => integral(inst, multiwin::solve_b2_lengths(inst)?, fmt),
        Algo::Greedy => integral(inst, multiwin::greedy_general_b(inst)?, fmt),
        Algo::Oracle => match alpha {
            Some(a) => integral(inst, oracle::brute_max_throughput(inst, a)?.witness, fmt),
            None => integral(inst, oracle::brute_min_active(inst)?.witness, fmt),
        },
        Algo::B2Budget => {
            let table = multiwin::budget_schedules(inst)?;
            let last = table.entries.last().expect("budget 0 is always present");
            match alpha {
                Some(a) => {
                    let e = &table.entries[a.min(table.entries.len() - 1)];
                    integral(inst, e.schedule.clone(), fmt)
                }
                None => Solved {
                    active: int(last.schedule.active_time() as i64),
                    jobs: last.jobs,
                    complete: last.jobs == inst.len(),
                    value: table.to_value(),
                },
            }
        }
        Algo::DpBatch => batches(inst, batchdp::min_batches(inst)?.1, fmt),
        Algo::DpThroughput => {
            let k = budget.ok_or_else(|| usage("dp-throughput needs --budget"))?;
            batches(inst, batchdp::max_throughput_batches(inst, k)?.1, fmt)
        }
        Algo::Preempt => {
            let opt = preemptive_opt_b2(inst)?;
            let timed = assignment_to_timed(inst, &opt.assignment)?;
            let mut value = preemptive_to_value(&opt.assignment, fmt);
            value["active_time"] = fmt.value(&opt.active);
            value["segments"] = timed_to_value(&timed, fmt)["segments"].clone();
            Solved { value, active: opt.active, jobs: inst.len(), complete: true }
        }
    })
}

fn cmd_solve(a: SolveArgs) -> Outcome {
    let inst = load_instance(&a.input)?;
    let fmt = if a.float { NumberFormat::Float } else { NumberFormat::Exact };
    let s = solve(&inst, a.algo, a.budget, a.alpha, fmt)?;
    emit(a.output.as_deref(), &json_text(&s.value))?;
    if !s.complete && a.alpha.is_none() && a.budget.is_none() {
        eprintln!("{} of {} jobs scheduled", s.jobs, inst.len());
        return Ok(1);
    }
    Ok(0)
}

fn cmd_verify(a: VerifyArgs) -> Outcome {
    let inst = load_instance(&a.input)?;
    let text = read(&a.schedule)?;
    let v: Value = serde_json::from_slice(&text).map_err(|e| usage(format!("schedule: {e}")))?;
    let report = if v.get("batches").is_some() {
        validate_batches(&inst, &parse_batches(&text)?)
    } else if v.get("x").is_some() {
        validate_preemptive(&inst, &parse_preemptive(&text)?)
    } else {
        validate_integral(&inst, &parse_schedule(&text)?)
    };
    emit(a.output.as_deref(), &json_text(&report.to_json()))?;
    Ok(if report.is_valid() { 0 } else { 1 })
}

fn cmd_gen(a: GenArgs) -> Outcome {
    let inst = match a.kind {
        Kind::Random => gen_random(&RandomSpec {
            n: a.n,
            horizon: a.horizon,
            b: a.b,
            region: match a.region {
                RegionArg::Window => RegionKind::Window,
                RegionArg::Slots => RegionKind::SlotSet,
            },
            max_length: a.max_length,
            grid: a.grid,
            density: a.density,
            seed: a.seed,
        })?,
        Kind::Gap => tight_gap_family(a.k)?,
        Kind::Xc3 => {
            let path = a.input.as_deref().ok_or_else(|| usage("xc3 needs --input"))?;
            let v: Value = serde_json::from_slice(&read(path)?).map_err(|e| usage(format!("xc3: {e}")))?;
            let nums = |x: &Value| -> Option<Vec<u32>> {
                x.as_array()?.iter().map(|e| e.as_u64().and_then(|n| u32::try_from(n).ok())).collect()
            };
            let elements = v.get("elements").and_then(nums).ok_or_else(|| usage("xc3: bad elements"))?;
            let triples = v
                .get("triples")
                .and_then(Value::as_array)
                .and_then(|ts| {
                    ts.iter()
                        .map(|t| nums(t).and_then(|t| <[u32; 3]>::try_from(t).ok()))
                        .collect::<Option<Vec<_>>>()
                })
                .ok_or_else(|| usage("xc3: triples must be lists of three integers"))?;
            from_3xc(&elements, &triples)?
        }
    };
    emit(a.output.as_deref(), &json_text(&instance_to_value(&inst)))?;
    Ok(0)
}

fn cmd_export(a: ExportArgs) -> Outcome {
    let inst = load_instance(&a.input)?;
    let form = match a.form {
        FormArg::Slot => LpForm::Slot,
        FormArg::Interval => LpForm::Interval,
    };
    let style = if a.fractions { LpNumbers::Fraction } else { LpNumbers::Decimal };
    emit(a.output.as_deref(), &emit_lp_file(&build_lp(&inst, form), style))?;
    Ok(0)
}

fn cmd_compare(a: CompareArgs) -> Outcome {
    let inst = load_instance(&a.input)?;
    let fmt = if a.float { NumberFormat::Float } else { NumberFormat::Exact };
    let g = preemption_gap(&inst)?;
    let v = json!({
        "integral_active": fmt.value(&g.integral),
        "preemptive_active": fmt.value(&g.preemptive),
        "ratio": fmt.value(&g.ratio),
        "pi": g.pi,
    });
    emit(a.output.as_deref(), &json_text(&v))?;
    Ok(0)
}

fn cmd_bench(a: BenchArgs) -> Outcome {
    let mut out = String::from("instance,algo,active_time,jobs,wall_ms\n");
    for path in &a.input {
        let inst = load_instance(path)?;
        let name = path.display().to_string().replace(',', "_");
        for &algo in &a.algo {
            let start = Instant::now();
            let res = solve(&inst, algo, a.budget, a.alpha, NumberFormat::Exact);
            let ms = start.elapsed().as_secs_f64() * 1000.0;
            let (active, jobs) = match res {
                Ok(s) => (format_rational(&s.active), s.jobs.to_string()),
                Err(_) => ("NA".to_string(), "NA".to_string()),
            };
            out.push_str(&format!("{name},{},{active},{jobs},{ms:.3}\n", algo.name()));
        }
    }
    emit(a.csv.as_deref(), &out)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Gen(a) => cmd_gen(a),
        Command::ExportLp(a) => cmd_export(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
