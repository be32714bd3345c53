//! Baseline optimizers and standardized run logs.
//!
//! A run is strictly sequential: ask a point, evaluate it, append one row
//! to the log. Independent seeds can be run side by side with
//! [`run_seeds`], each writing its own log.

mod log;
mod optimizer;

use std::collections::BTreeMap;
use std::fmt;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use log::{Clock, FixedClock, LogRow, LogWriter, RunLog, SystemClock};
pub use optimizer::{mirror_into_domain, OnePlusOneEs, Optimizer, RandomSearch};

use crate::objectives::ObjectiveKind;
use crate::problem::{work_root_under, ProblemId, ProblemInstance, RunSettings};
use crate::solver::{ExternalSolver, SolverMode};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Problem(#[from] crate::Error),
    #[error("run log i/o: {0}")]
    Io(#[from] io::Error),
    #[error("invalid run configuration: {0}")]
    InvalidConfig(String),
    #[error("run aborted at evaluation {evaluation} after {consecutive_failures} consecutive failures; last error: {last_error}")]
    Aborted {
        evaluation: usize,
        consecutive_failures: usize,
        last_error: String,
    },
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    RandomSearch,
    OnePlusOneEs,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::RandomSearch => "random-search",
            Algorithm::OnePlusOneEs => "one-plus-one-es",
        }
    }

    fn build(self, dim: usize) -> Box<dyn Optimizer> {
        match self {
            Algorithm::RandomSearch => Box::new(RandomSearch::new(dim)),
            Algorithm::OnePlusOneEs => Box::new(OnePlusOneEs::new(dim)),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "random-search" | "random" | "rs" => Ok(Algorithm::RandomSearch),
            "one-plus-one-es" | "1+1-es" | "(1+1)-es" | "es" => Ok(Algorithm::OnePlusOneEs),
            _ => Err(format!("unknown algorithm `{s}` (expected random-search or one-plus-one-es)")),
        }
    }
}

/// Everything needed to reproduce one optimization run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: ProblemId,
    pub dim: usize,
    pub objective: ObjectiveKind,
    pub budget: usize,
    pub seed: u64,
    pub algorithm: Algorithm,
    pub solver: SolverMode,
    pub cores: usize,
    pub out_dir: PathBuf,
    pub vtk: bool,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.budget == 0 {
            return Err(HarnessError::InvalidConfig("budget must be at least 1".into()));
        }
        if self.cores == 0 {
            return Err(HarnessError::InvalidConfig("cores must be at least 1".into()));
        }
        self.problem.check_dim(self.dim)?;
        Ok(())
    }

    pub fn log_file_name(&self) -> String {
        format!(
            "{}_d{}_{}_{}_s{}.csv",
            self.problem.name(),
            self.dim,
            self.objective.name(),
            self.algorithm.name(),
            self.seed
        )
    }

    pub fn log_path(&self) -> PathBuf {
        self.out_dir.join(self.log_file_name())
    }

    /// Metadata written at the top of the log.
    pub fn metadata(&self) -> Vec<(String, String)> {
        let mut m = vec![
            ("problem", self.problem.number().to_string()),
            ("problem_name", self.problem.name().to_string()),
            ("dim", self.dim.to_string()),
            ("objective", self.objective.name().to_string()),
            ("algorithm", self.algorithm.name().to_string()),
            ("budget", self.budget.to_string()),
            ("seed", self.seed.to_string()),
            ("mode", self.solver.label().to_string()),
        ];
        if let SolverMode::External(ext) = &self.solver {
            m.push(("solver_starter", ext.starter.display().to_string()));
            m.push(("solver_engine", ext.engine.display().to_string()));
            if let Some(c) = &ext.converter {
                m.push(("solver_converter", c.display().to_string()));
            }
        }
        m.push(("cores", self.cores.to_string()));
        m.push(("vtk", self.vtk.to_string()));
        m.push(("out_dir", self.out_dir.display().to_string()));
        m.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }

    /// Rebuilds the configuration from log metadata.
    pub fn from_metadata(meta: &BTreeMap<String, String>) -> Result<Self, HarnessError> {
        let get = |k: &str| {
            meta.get(k)
                .ok_or_else(|| HarnessError::InvalidConfig(format!("missing `{k}` in log header")))
        };
        let bad = |k: &str, v: &str| HarnessError::InvalidConfig(format!("bad `{k}` value `{v}`"));
        let parse = |k: &str| -> Result<u64, HarnessError> {
            let v = get(k)?;
            v.parse().map_err(|_| bad(k, v))
        };
        let problem: ProblemId = get("problem")?.parse().map_err(HarnessError::InvalidConfig)?;
        let objective: ObjectiveKind = get("objective")?.parse()?;
        let algorithm: Algorithm = get("algorithm")?.parse().map_err(HarnessError::InvalidConfig)?;
        let solver = match get("mode")?.as_str() {
            "mock" => SolverMode::Mock,
            "external" => SolverMode::External(ExternalSolver {
                starter: get("solver_starter")?.into(),
                engine: get("solver_engine")?.into(),
                converter: meta.get("solver_converter").map(PathBuf::from),
            }),
            other => return Err(bad("mode", other)),
        };
        let vtk = get("vtk")?;
        Ok(RunConfig {
            problem,
            dim: parse("dim")? as usize,
            objective,
            budget: parse("budget")? as usize,
            seed: parse("seed")?,
            algorithm,
            solver,
            cores: parse("cores")? as usize,
            out_dir: get("out_dir")?.into(),
            vtk: vtk.parse().map_err(|_| bad("vtk", vtk))?,
        })
    }

    pub fn problem_instance(&self) -> Result<ProblemInstance, HarnessError> {
        let settings = RunSettings {
            work_root: work_root_under(&self.out_dir),
            cores: self.cores,
            vtk: self.vtk,
            ..RunSettings::default()
        };
        Ok(ProblemInstance::new(
            self.problem,
            self.dim,
            &[self.objective],
            self.solver.clone(),
            settings,
        )?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub log_path: PathBuf,
    pub evaluations: usize,
    pub failures: usize,
    /// `+inf` when no evaluation succeeded.
    pub best_y: f64,
    pub best_x: Option<Vec<f64>>,
}

fn join(x: &[f64]) -> String {
    x.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

/// Runs `cfg.budget` evaluations, appending each to the log as it
/// completes. Evaluation errors are logged and the run continues until the
/// consecutive-failure count exceeds half the budget.
pub fn run_optimize(cfg: &RunConfig, clock: &dyn Clock) -> Result<RunSummary, HarnessError> {
    cfg.validate()?;
    let problem = cfg.problem_instance()?;
    let log_path = cfg.log_path();
    let mut meta = cfg.metadata();
    meta.push(("started".into(), clock.timestamp()));
    let mut log = LogWriter::create(&log_path, &meta, cfg.dim)?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut opt = cfg.algorithm.build(cfg.dim);
    let mut best_y = f64::INFINITY;
    let mut best_x = None;
    let mut failures = 0;
    let mut consecutive = 0;

    for evaluation in 1..=cfg.budget {
        let x = opt.ask(&mut rng);
        let (y, status) = match problem.evaluate(&x) {
            Ok(r) => (r.objective(cfg.objective).unwrap_or(f64::NAN), "ok".to_string()),
            Err(e) => {
                failures += 1;
                consecutive += 1;
                log.row(&LogRow {
                    evaluation,
                    y: f64::NAN,
                    best_y,
                    status: e.category().as_str().to_string(),
                    x: x.clone(),
                })?;
                opt.tell(&x, None);
                if 2 * consecutive > cfg.budget {
                    log.trailer(&[
                        ("status".into(), "aborted".into()),
                        ("finished".into(), clock.timestamp()),
                    ])?;
                    return Err(HarnessError::Aborted {
                        evaluation,
                        consecutive_failures: consecutive,
                        last_error: e.to_string(),
                    });
                }
                continue;
            }
        };
        consecutive = 0;
        if y < best_y {
            best_y = y;
            best_x = Some(x.clone());
        }
        log.row(&LogRow {
            evaluation,
            y,
            best_y,
            status,
            x: x.clone(),
        })?;
        opt.tell(&x, Some(y));
    }

    let mut trailer = vec![
        ("status".to_string(), "completed".to_string()),
        ("evaluations".to_string(), cfg.budget.to_string()),
        ("best_y".to_string(), best_y.to_string()),
    ];
    if let Some(x) = &best_x {
        trailer.push(("best_x".to_string(), join(x)));
    }
    trailer.push(("finished".to_string(), clock.timestamp()));
    log.trailer(&trailer)?;
    Ok(RunSummary {
        log_path,
        evaluations: cfg.budget,
        failures,
        best_y,
        best_x,
    })
}

/// Runs one log per seed, up to `threads` at a time. Results are returned
/// in seed order.
pub fn run_seeds(
    cfg: &RunConfig,
    seeds: &[u64],
    threads: usize,
    clock: &dyn Clock,
) -> Result<Vec<Result<RunSummary, HarnessError>>, HarnessError> {
    let one = |seed: u64| {
        let c = RunConfig {
            seed,
            ..cfg.clone()
        };
        run_optimize(&c, clock)
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build()
            .map_err(|e| HarnessError::ThreadPool(e.to_string()))?;
        Ok(pool.install(|| seeds.par_iter().map(|&s| one(s)).collect()))
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        Ok(seeds.iter().map(|&s| one(s)).collect())
    }
}

/// Reads a log back and returns its configuration.
pub fn config_from_log(path: &Path) -> Result<RunConfig, HarnessError> {
    let text = std::fs::read_to_string(path)?;
    let log = RunLog::parse(&text).map_err(HarnessError::InvalidConfig)?;
    RunConfig::from_metadata(&log.metadata)
}
