//! Simulation stage: the external solver in an isolated working directory,
//! or the built-in closed-form mock.

mod external;
mod mock;
mod workdir;

use std::io;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use thiserror::Error;

pub use external::{ExternalSolver, ENGINE_BINARY, STARTER_BINARY, TH_CONVERTER_BINARY};
pub use mock::{mock_surrogate, GeometrySummary, MockInputs};
pub use workdir::WorkDir;

use crate::deck::{DeckBundle, SimConfig};
use external::{log_tail, run_stage, StageOutcome};

/// Environment variable overriding the configured solver path.
pub const SOLVER_ENV: &str = "CRASHBENCH_SOLVER";
/// Twice the slowest single-core run time reported for the suite, rounded.
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(4000);
const LOG_EXCERPT_LINES: usize = 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("failed to start `{}`: {message}", program.display())]
    Spawn { program: PathBuf, message: String },
    #[error("core count must be at least 1")]
    InvalidCores,
    #[error("mock mode requires surrogate inputs")]
    MissingMockInputs,
    #[error("solver finished but produced no time history at {}", .0.display())]
    MissingOutput(PathBuf),
    #[error("solver stage `{stage}` {}{}", exit_text(*.code), excerpt_text(.log_excerpt))]
    Failed {
        stage: String,
        code: Option<i32>,
        log_excerpt: String,
    },
    #[error("solver stage `{stage}` timed out after {after:?}")]
    TimedOut { stage: String, after: Duration },
    #[error("i/o error in working directory: {0}")]
    Io(String),
}

fn exit_text(code: Option<i32>) -> String {
    match code {
        Some(c) => format!("exited with status {c}"),
        None => "was terminated by a signal".into(),
    }
}

fn excerpt_text(log: &str) -> String {
    if log.trim().is_empty() {
        String::new()
    } else {
        format!("; log tail:\n{}", log.trim_end())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolverMode {
    Mock,
    External(ExternalSolver),
}

impl SolverMode {
    /// External mode from an explicit path, else from [`SOLVER_ENV`].
    pub fn external_from(path: Option<&Path>) -> Option<SolverMode> {
        let env = std::env::var_os(SOLVER_ENV).map(PathBuf::from);
        path.map(Path::to_path_buf)
            .or(env)
            .map(|p| SolverMode::External(ExternalSolver::from_path(&p)))
    }

    pub fn label(&self) -> &'static str {
        match self {
            SolverMode::Mock => "mock",
            SolverMode::External(_) => "external",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolverJob {
    /// Exclusively owned, initially empty.
    pub work_dir: PathBuf,
    pub case: String,
    pub deck: DeckBundle,
    pub cfg: SimConfig,
    pub cores: usize,
    pub timeout: Duration,
    pub mode: SolverMode,
    pub mock: Option<MockInputs>,
}

impl SolverJob {
    pub fn write_deck(&self) -> io::Result<(PathBuf, PathBuf)> {
        self.deck.write_to(&self.work_dir, &self.case)
    }

    /// Path of the schema CSV inside the working directory.
    pub fn time_history_path(&self) -> PathBuf {
        self.work_dir.join(format!("{}_th.csv", self.case))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Ok,
    Failed,
    TimedOut,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOutput {
    pub time_history_csv: PathBuf,
    pub exit_status: ExitStatus,
    pub log_excerpt: String,
    /// Stage that failed or timed out.
    pub stage: Option<String>,
    pub exit_code: Option<i32>,
    pub elapsed: Duration,
}

impl SolverOutput {
    /// Turns a failed or timed-out run into an error.
    pub fn into_ok(self) -> Result<SolverOutput, SolverError> {
        let stage = self.stage.clone().unwrap_or_default();
        match self.exit_status {
            ExitStatus::Ok => Ok(self),
            ExitStatus::Failed => Err(SolverError::Failed {
                stage,
                code: self.exit_code,
                log_excerpt: self.log_excerpt,
            }),
            ExitStatus::TimedOut => Err(SolverError::TimedOut {
                stage,
                after: self.elapsed,
            }),
        }
    }
}

/// Runs the simulation stage of `job`. The deck must already be written for
/// external runs.
///
/// `Ok` carries the exit status; failures to start a process or a missing
/// time history after a clean exit are errors.
pub fn run(job: &SolverJob) -> Result<SolverOutput, SolverError> {
    if job.cores == 0 {
        return Err(SolverError::InvalidCores);
    }
    let started = Instant::now();
    match &job.mode {
        SolverMode::Mock => {
            let inputs = job.mock.as_ref().ok_or(SolverError::MissingMockInputs)?;
            let th = mock_surrogate(inputs, &job.cfg);
            let path = job.time_history_path();
            std::fs::write(&path, th.to_csv_bytes()).map_err(|e| SolverError::Io(e.to_string()))?;
            Ok(SolverOutput {
                time_history_csv: path,
                exit_status: ExitStatus::Ok,
                log_excerpt: String::new(),
                stage: None,
                exit_code: Some(0),
                elapsed: started.elapsed(),
            })
        }
        SolverMode::External(solver) => run_external(job, solver, started),
    }
}

fn run_external(job: &SolverJob, solver: &ExternalSolver, started: Instant) -> Result<SolverOutput, SolverError> {
    let deadline = started + job.timeout;
    let nt = job.cores.to_string();
    let mut stages: Vec<(&str, &Path, Vec<String>)> = vec![
        (
            "starter",
            &solver.starter,
            vec!["-i".into(), DeckBundle::starter_file_name(&job.case), "-nt".into(), nt.clone()],
        ),
        (
            "engine",
            &solver.engine,
            vec!["-i".into(), DeckBundle::engine_file_name(&job.case), "-nt".into(), nt],
        ),
    ];
    if let Some(conv) = &solver.converter {
        stages.push(("th_to_csv", conv, vec![format!("{}T01", job.case)]));
    }

    for (stage, program, args) in &stages {
        let outcome = run_stage(stage, program, args, &job.work_dir, job.cores, deadline)?;
        let failed = |status: ExitStatus, code: Option<i32>| SolverOutput {
            time_history_csv: job.time_history_path(),
            exit_status: status,
            log_excerpt: log_tail(&job.work_dir, stage, LOG_EXCERPT_LINES),
            stage: Some(stage.to_string()),
            exit_code: code,
            elapsed: started.elapsed(),
        };
        match outcome {
            StageOutcome::TimedOut => return Ok(failed(ExitStatus::TimedOut, None)),
            StageOutcome::Exited(status) if !status.success() => {
                return Ok(failed(ExitStatus::Failed, status.code()));
            }
            StageOutcome::Exited(_) => {}
        }
    }

    let candidates = [
        job.time_history_path(),
        job.work_dir.join(format!("{}T01.csv", job.case)),
    ];
    let csv = candidates
        .iter()
        .find(|p| p.is_file())
        .cloned()
        .ok_or_else(|| SolverError::MissingOutput(candidates[0].clone()))?;
    Ok(SolverOutput {
        time_history_csv: csv,
        exit_status: ExitStatus::Ok,
        log_excerpt: log_tail(&job.work_dir, "engine", LOG_EXCERPT_LINES),
        stage: None,
        exit_code: Some(0),
        elapsed: started.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deck::{build_deck, material_for};
    use crate::mesh::mesh_for_design;
    use crate::problem::ProblemId;
    use std::os::unix::fs::PermissionsExt;

    fn job(dir: &Path, mode: SolverMode, timeout: Duration) -> SolverJob {
        let id = ProblemId::StarBox;
        let mesh = mesh_for_design(id, 1, &[90.0]).unwrap();
        let cfg = SimConfig::for_problem(id);
        SolverJob {
            work_dir: dir.to_path_buf(),
            case: id.name().into(),
            deck: build_deck(&mesh, &material_for(id), &cfg, id.name()).unwrap(),
            cfg,
            cores: 2,
            timeout,
            mode,
            mock: Some(MockInputs {
                mass_kg: 0.71,
                sigma_y_mpa: 360.0,
                density: 7830.0,
                geometry: GeometrySummary::for_problem(id),
            }),
        }
    }

    fn script(dir: &Path, body: &str) -> PathBuf {
        let path = dir.join("fake_solver.sh");
        std::fs::write(&path, format!("#!/bin/sh\n{body}\n")).unwrap();
        std::fs::set_permissions(&path, std::fs::Permissions::from_mode(0o755)).unwrap();
        path
    }

    #[test]
    fn mock_writes_csv() {
        let dir = tempfile::tempdir().unwrap();
        let out = run(&job(dir.path(), SolverMode::Mock, DEFAULT_TIMEOUT)).unwrap();
        assert_eq!(out.exit_status, ExitStatus::Ok);
        assert!(out.time_history_csv.is_file());
    }

    #[test]
    fn nonexistent_binary_is_spawn_failure() {
        let dir = tempfile::tempdir().unwrap();
        let mode = SolverMode::External(ExternalSolver::from_path(Path::new("/nonexistent/solver/bin")));
        let j = job(dir.path(), mode, DEFAULT_TIMEOUT);
        j.write_deck().unwrap();
        assert!(matches!(run(&j), Err(SolverError::Spawn { .. })));
    }

    #[test]
    fn tiny_timeout_kills_the_process() {
        let bin = tempfile::tempdir().unwrap();
        let exe = script(bin.path(), "sleep 30");
        let dir = tempfile::tempdir().unwrap();
        let j = job(dir.path(), SolverMode::External(ExternalSolver::from_path(&exe)), Duration::from_millis(1));
        let t = Instant::now();
        let out = run(&j).unwrap();
        assert_eq!(out.exit_status, ExitStatus::TimedOut);
        assert!(t.elapsed() < Duration::from_secs(10));
        assert!(matches!(out.into_ok(), Err(SolverError::TimedOut { .. })));
    }

    #[test]
    fn external_wrapper_runs_both_stages_with_thread_count() {
        let bin = tempfile::tempdir().unwrap();
        // the wrapper records its arguments and emits the CSV on the engine stage
        let exe = script(
            bin.path(),
            r#"echo "$@ OMP=$OMP_NUM_THREADS" >> calls.txt
case "$2" in *_0001.rad) printf 'time_ms,contact_force_kN,impactor_disp_mm,internal_energy_J,kinetic_energy_J\n0,0,0,0,1\n1,1,1,1,0\n' > StarBox_th.csv ;; esac"#,
        );
        let dir = tempfile::tempdir().unwrap();
        let j = job(dir.path(), SolverMode::External(ExternalSolver::from_path(&exe)), DEFAULT_TIMEOUT);
        j.write_deck().unwrap();
        let out = run(&j).unwrap().into_ok().unwrap();
        assert_eq!(out.time_history_csv, dir.path().join("StarBox_th.csv"));
        let calls = std::fs::read_to_string(dir.path().join("calls.txt")).unwrap();
        assert_eq!(
            calls,
            "-i StarBox_0000.rad -nt 2 OMP=2\n-i StarBox_0001.rad -nt 2 OMP=2\n"
        );
    }

    #[test]
    fn failing_stage_reports_log() {
        let bin = tempfile::tempdir().unwrap();
        let exe = script(bin.path(), "echo 'ERROR: bad deck'\nexit 7");
        let dir = tempfile::tempdir().unwrap();
        let j = job(dir.path(), SolverMode::External(ExternalSolver::from_path(&exe)), DEFAULT_TIMEOUT);
        let out = run(&j).unwrap();
        assert_eq!(out.exit_status, ExitStatus::Failed);
        assert_eq!(out.exit_code, Some(7));
        assert!(out.log_excerpt.contains("bad deck"));
        assert_eq!(out.stage.as_deref(), Some("starter"));
    }

    #[test]
    fn clean_exit_without_csv_is_missing_output() {
        let bin = tempfile::tempdir().unwrap();
        let exe = script(bin.path(), "exit 0");
        let dir = tempfile::tempdir().unwrap();
        let j = job(dir.path(), SolverMode::External(ExternalSolver::from_path(&exe)), DEFAULT_TIMEOUT);
        assert!(matches!(run(&j), Err(SolverError::MissingOutput(_))));
    }

    #[test]
    fn zero_cores_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let mut j = job(dir.path(), SolverMode::Mock, DEFAULT_TIMEOUT);
        j.cores = 0;
        assert_eq!(run(&j).unwrap_err(), SolverError::InvalidCores);
    }
}
