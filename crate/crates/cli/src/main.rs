//! `crashbench` command-line front end.
//!
//! Exit codes: 0 success, 2 usage, 3 solver failure, 4 output parse
//! failure, 1 anything else (geometry, i/o, aborted runs).

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use crashbench::harness::{self, Algorithm, Clock, FixedClock, HarnessError, RunConfig, SystemClock};
use crashbench::problem::work_root_under;
use crashbench::solver::SOLVER_ENV;
use crashbench::{create_problem, Error, ErrorCategory, ObjectiveKind, ProblemId, RunSettings, SolverMode};

#[derive(Parser, Debug)]
#[command(name = "crashbench", version, about = "Crashworthiness black-box optimization benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one design point and print key=value results.
    Evaluate(EvaluateArgs),
    /// Run a baseline optimizer and write a run log.
    Optimize(OptimizeArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// Problem number (1, 2, 3) or name.
    #[arg(long)]
    problem: ProblemId,
    #[arg(long)]
    dim: usize,
    /// Use the closed-form mock instead of an external solver.
    #[arg(long)]
    mock: bool,
    /// Solver directory, or a single wrapper executable. Ignored with --mock.
    #[arg(long, env = SOLVER_ENV)]
    solver_path: Option<PathBuf>,
    /// Threads handed to each solver run.
    #[arg(long, default_value_t = 1)]
    cores: usize,
    /// Output directory; evaluation working directories go under `<out>/work`.
    #[arg(long, default_value = "crashbench-out")]
    out: PathBuf,
    /// Request animation output from the external solver.
    #[arg(long)]
    vtk: bool,
}

impl Common {
    fn solver(&self) -> Result<SolverMode, Failure> {
        if self.mock {
            return Ok(SolverMode::Mock);
        }
        SolverMode::external_from(self.solver_path.as_deref())
            .ok_or_else(|| Failure::usage(format!("either --mock or --solver-path (or {SOLVER_ENV}) is required")))
    }
}

#[derive(Args, Debug)]
struct EvaluateArgs {
    #[command(flatten)]
    common: Common,
    /// Objectives to report, comma-separated; all when omitted.
    #[arg(long, value_delimiter = ',')]
    objective: Vec<String>,
    /// Normalized design vector in [-5, 5]^d, comma-separated.
    #[arg(short = 'x', long = "x", allow_hyphen_values = true)]
    x: String,
    /// Keep the working directory after a successful evaluation.
    #[arg(long)]
    keep_work: bool,
    /// Wall-clock limit for the external solver, seconds.
    #[arg(long)]
    timeout: Option<u64>,
}

#[derive(Args, Debug)]
struct OptimizeArgs {
    #[command(flatten)]
    common: Common,
    /// Objective to minimize; the problem's default when omitted.
    #[arg(long)]
    objective: Option<String>,
    #[arg(long)]
    budget: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// random-search or one-plus-one-es.
    #[arg(long, default_value = "one-plus-one-es")]
    algo: String,
    /// Run seeds `seed .. seed + N` concurrently, one log each.
    #[arg(long, default_value_t = 1)]
    parallel: usize,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

fn category_code(c: ErrorCategory) -> u8 {
    match c {
        ErrorCategory::Usage => 2,
        ErrorCategory::Solver => 3,
        ErrorCategory::Parse => 4,
        ErrorCategory::Geometry | ErrorCategory::Io => 1,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: category_code(e.category()),
            message: format!("{} error: {e}", e.category().as_str()),
        }
    }
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Problem(e) => e.into(),
            HarnessError::InvalidConfig(m) => Failure::usage(m),
            other => Failure {
                code: 1,
                message: other.to_string(),
            },
        }
    }
}

fn parse_x(text: &str) -> Result<Vec<f64>, Failure> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Failure::usage(format!("invalid design component `{s}`")))
        })
        .collect()
}

fn parse_objective(s: &str) -> Result<ObjectiveKind, Failure> {
    s.parse::<ObjectiveKind>().map_err(Failure::from)
}

fn clock() -> Box<dyn Clock> {
    match std::env::var("SOURCE_DATE_EPOCH") {
        Ok(t) if !t.is_empty() => Box::new(FixedClock(t)),
        _ => Box::new(SystemClock),
    }
}

fn evaluate(args: EvaluateArgs) -> Result<(), Failure> {
    let c = &args.common;
    let objectives = if args.objective.is_empty() {
        ObjectiveKind::ALL.to_vec()
    } else {
        args.objective.iter().map(|s| parse_objective(s)).collect::<Result<_, _>>()?
    };
    let x = parse_x(&args.x)?;
    let mut settings = RunSettings {
        work_root: work_root_under(&c.out),
        cores: c.cores,
        keep_work_dirs: args.keep_work,
        vtk: c.vtk,
        ..RunSettings::default()
    };
    if let Some(t) = args.timeout {
        settings.timeout = Duration::from_secs(t);
    }
    if c.cores == 0 {
        return Err(Failure::usage("--cores must be at least 1"));
    }
    let problem = create_problem(c.problem, c.dim, &objectives, c.solver()?)?.with_settings(settings);
    let result = problem.evaluate(&x)?;
    for (k, v) in result.to_key_values() {
        println!("{k}={v}");
    }
    if args.keep_work {
        println!("work_dir={}", result.work_dir.display());
    }
    Ok(())
}

fn optimize(args: OptimizeArgs) -> Result<(), Failure> {
    let c = &args.common;
    let problem = c.problem;
    let objective = match &args.objective {
        Some(s) => parse_objective(s)?,
        None => problem.default_objective(),
    };
    let algorithm: Algorithm = args.algo.parse().map_err(Failure::usage)?;
    if args.parallel == 0 {
        return Err(Failure::usage("--parallel must be at least 1"));
    }
    let cfg = RunConfig {
        problem,
        dim: c.dim,
        objective,
        budget: args.budget,
        seed: args.seed,
        algorithm,
        solver: c.solver()?,
        cores: c.cores,
        out_dir: c.out.clone(),
        vtk: c.vtk,
    };
    cfg.validate()?;
    let clock = clock();
    let seeds: Vec<u64> = (0..args.parallel as u64).map(|i| args.seed + i).collect();
    let runs = harness::run_seeds(&cfg, &seeds, args.parallel, clock.as_ref())?;
    let mut first_error = None;
    for (seed, run) in seeds.iter().zip(runs) {
        println!("seed={seed}");
        match run {
            Ok(s) => {
                println!("log={}", s.log_path.display());
                println!("evaluations={}", s.evaluations);
                println!("failures={}", s.failures);
                println!("best_y={}", s.best_y);
                if let Some(x) = &s.best_x {
                    let x: Vec<String> = x.iter().map(f64::to_string).collect();
                    println!("best_x={}", x.join(","));
                }
            }
            Err(e) => {
                println!("status=failed");
                first_error.get_or_insert(e);
            }
        }
    }
    match first_error {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Evaluate(a) => evaluate(a),
        Command::Optimize(a) => optimize(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("crashbench: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
