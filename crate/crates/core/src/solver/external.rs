use std::fs::File;
use std::io;
use std::os::unix::process::CommandExt;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitStatus, Stdio};
use std::time::{Duration, Instant};

use super::SolverError;

pub const STARTER_BINARY: &str = "starter_linux64_gf";
pub const ENGINE_BINARY: &str = "engine_linux64_gf";
pub const TH_CONVERTER_BINARY: &str = "th_to_csv_linux64_gf";

/// Location of the external solver executables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalSolver {
    pub starter: PathBuf,
    pub engine: PathBuf,
    /// Converts the binary time history to CSV after the engine run.
    pub converter: Option<PathBuf>,
}

impl ExternalSolver {
    /// A directory is searched for the stock starter, engine and converter
    /// names; a file is used as a single wrapper for both stages.
    pub fn from_path(path: &Path) -> Self {
        let path = std::path::absolute(path).unwrap_or_else(|_| path.to_path_buf());
        if path.is_dir() {
            let converter = path.join(TH_CONVERTER_BINARY);
            ExternalSolver {
                starter: path.join(STARTER_BINARY),
                engine: path.join(ENGINE_BINARY),
                converter: converter.is_file().then_some(converter),
            }
        } else {
            ExternalSolver {
                starter: path.clone(),
                engine: path,
                converter: None,
            }
        }
    }
}

pub(super) enum StageOutcome {
    Exited(ExitStatus),
    TimedOut,
}

/// Runs one solver stage in `work_dir` in its own process group, killing
/// the whole group once `deadline` passes.
pub(super) fn run_stage(
    stage: &str,
    program: &Path,
    args: &[String],
    work_dir: &Path,
    cores: usize,
    deadline: Instant,
) -> Result<StageOutcome, SolverError> {
    let io_err = |e: io::Error| SolverError::Io(e.to_string());
    let log = File::create(work_dir.join(format!("{stage}.log"))).map_err(io_err)?;
    let mut attempts = 0;
    let mut child = loop {
        let spawned = Command::new(program)
            .args(args)
            .current_dir(work_dir)
            .env("OMP_NUM_THREADS", cores.to_string())
            .stdin(Stdio::null())
            .stdout(log.try_clone().map_err(io_err)?)
            .stderr(log.try_clone().map_err(io_err)?)
            .process_group(0)
            .spawn();
        match spawned {
            Ok(child) => break child,
            // a freshly written executable can be briefly busy
            Err(e) if e.raw_os_error() == Some(libc::ETXTBSY) && attempts < 50 => {
                attempts += 1;
                std::thread::sleep(Duration::from_millis(10));
            }
            Err(e) => {
                return Err(SolverError::Spawn {
                    program: program.to_path_buf(),
                    message: e.to_string(),
                })
            }
        }
    };
    loop {
        if let Some(status) = child.try_wait().map_err(io_err)? {
            return Ok(StageOutcome::Exited(status));
        }
        let now = Instant::now();
        if now >= deadline {
            // SAFETY: the child leads its own process group, so this only
            // signals processes this job started.
            unsafe {
                libc::killpg(child.id() as libc::pid_t, libc::SIGKILL);
            }
            let _ = child.wait();
            return Ok(StageOutcome::TimedOut);
        }
        std::thread::sleep((deadline - now).min(Duration::from_millis(5)));
    }
}

/// Last `n` lines of a stage log, empty when it cannot be read.
pub(super) fn log_tail(work_dir: &Path, stage: &str, n: usize) -> String {
    let text = std::fs::read_to_string(work_dir.join(format!("{stage}.log"))).unwrap_or_default();
    let lines: Vec<&str> = text.lines().collect();
    lines[lines.len().saturating_sub(n)..].join("\n")
}
