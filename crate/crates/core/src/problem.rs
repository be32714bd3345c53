//! Benchmark problem definitions, the normalized design domain, and the
//! evaluation pipeline entry point.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Duration;

use crate::deck::{build_deck, material_for, MaterialModel, SimConfig};
use crate::error::{Error, Result};
use crate::mesh::{compute_mass, mesh_for_design, MassReport};
use crate::objectives::{
    self, ForceWindow, ObjectiveKind, BEAM_INTRUSION_LIMIT_MM, STARBOX_INTRUSION_LIMIT_MM,
};
use crate::parameterization::trigger_variable_bounds;
use crate::post::{extract_scalars_with, parse_time_history_with, ColumnMapping, SimulationRecord};
use crate::solver::{self, MockInputs, SolverJob, SolverMode, WorkDir};

/// Lower edge of the normalized domain.
pub const NORMALIZED_LOWER: f64 = -5.0;
/// Upper edge of the normalized domain.
pub const NORMALIZED_UPPER: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProblemId {
    StarBox = 1,
    ThreePointBending = 2,
    LongCrashTube = 3,
}

impl ProblemId {
    pub const ALL: [ProblemId; 3] = [
        ProblemId::StarBox,
        ProblemId::ThreePointBending,
        ProblemId::LongCrashTube,
    ];

    pub fn from_number(n: u32) -> Option<Self> {
        match n {
            1 => Some(ProblemId::StarBox),
            2 => Some(ProblemId::ThreePointBending),
            3 => Some(ProblemId::LongCrashTube),
            _ => None,
        }
    }

    pub fn number(self) -> u32 {
        self as u32
    }

    pub fn name(self) -> &'static str {
        match self {
            ProblemId::StarBox => "StarBox",
            ProblemId::ThreePointBending => "ThreePointBending",
            ProblemId::LongCrashTube => "LongCrashTube",
        }
    }

    pub fn max_dim(self) -> usize {
        match self {
            ProblemId::StarBox => 34,
            ProblemId::ThreePointBending => 40,
            ProblemId::LongCrashTube => 30,
        }
    }

    pub fn check_dim(self, d: usize) -> Result<()> {
        if d == 0 || d > self.max_dim() {
            return Err(Error::DimensionOutOfRange {
                problem: self,
                dim: d,
                max: self.max_dim(),
            });
        }
        Ok(())
    }

    /// Intrusion limit defining feasibility, `None` for the unconstrained tube.
    pub fn intrusion_limit_mm(self) -> Option<f64> {
        match self {
            ProblemId::StarBox => Some(STARBOX_INTRUSION_LIMIT_MM),
            ProblemId::ThreePointBending => Some(BEAM_INTRUSION_LIMIT_MM),
            ProblemId::LongCrashTube => None,
        }
    }

    /// The objective each problem is stated with.
    pub fn default_objective(self) -> ObjectiveKind {
        match self {
            ProblemId::StarBox => ObjectiveKind::PenalizedSea,
            ProblemId::ThreePointBending => ObjectiveKind::PenalizedMass,
            ProblemId::LongCrashTube => ObjectiveKind::LoadUniformity,
        }
    }

    pub fn bounds(self, d: usize) -> Result<Bounds> {
        self.check_dim(d)?;
        let (lower, upper) = (1..=d).map(|k| self.variable_bounds(d, k)).unzip();
        Ok(Bounds { lower, upper })
    }

    /// Physical bounds of variable `x_k` (1-based) at dimension `d`.
    fn variable_bounds(self, d: usize, k: usize) -> (f64, f64) {
        const SIDE: (f64, f64) = (60.0, 120.0);
        const INSET: (f64, f64) = (0.0, 30.0);
        const STAR_THICKNESS: (f64, f64) = (0.7, 3.0);
        const RIB_THICKNESS: (f64, f64) = (0.5, 3.0);
        match self {
            ProblemId::StarBox => match (d, k) {
                (_, 1 | 2) => SIDE,
                (3, 3) => STAR_THICKNESS,
                (_, 3 | 4) => INSET,
                _ => STAR_THICKNESS,
            },
            ProblemId::ThreePointBending => RIB_THICKNESS,
            ProblemId::LongCrashTube => trigger_variable_bounds(k),
        }
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "problem {} ({})", self.number(), self.name())
    }
}

impl FromStr for ProblemId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if let Ok(n) = s.trim().parse::<u32>() {
            return ProblemId::from_number(n).ok_or_else(|| format!("problem number {n} is not 1, 2 or 3"));
        }
        ProblemId::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown problem `{s}`"))
    }
}

/// Per-component physical bounds, mm.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Bounds {
    pub fn dim(&self) -> usize {
        self.lower.len()
    }
}

/// Settings that affect where and how the simulation stage runs but never
/// the objective values in mock mode.
#[derive(Debug, Clone)]
pub struct RunSettings {
    /// Directory under which each evaluation creates its own working directory.
    pub work_root: PathBuf,
    pub cores: usize,
    pub timeout: Duration,
    /// Keep working directories of successful evaluations.
    pub keep_work_dirs: bool,
    /// Forward the animation-output request to the external solver.
    pub vtk: bool,
    pub columns: ColumnMapping,
    pub force_window: ForceWindow,
}

impl Default for RunSettings {
    fn default() -> Self {
        RunSettings {
            work_root: std::env::temp_dir().join("crashbench"),
            cores: 1,
            timeout: solver::DEFAULT_TIMEOUT,
            keep_work_dirs: false,
            vtk: false,
            columns: ColumnMapping::default(),
            force_window: ForceWindow::default(),
        }
    }
}

/// One benchmark instance. Immutable once created; share it freely between
/// threads, each `evaluate` call owns its working directory.
#[derive(Debug, Clone)]
pub struct ProblemInstance {
    id: ProblemId,
    dim: usize,
    bounds: Bounds,
    objectives: Vec<ObjectiveKind>,
    solver: SolverMode,
    settings: RunSettings,
}

pub fn create_problem(
    id: ProblemId,
    dim: usize,
    objectives: &[ObjectiveKind],
    solver: SolverMode,
) -> Result<ProblemInstance> {
    ProblemInstance::new(id, dim, objectives, solver, RunSettings::default())
}

/// Result of one pipeline run.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationResult {
    pub problem: ProblemId,
    pub raw: BTreeMap<ObjectiveKind, f64>,
    pub feasible: bool,
    pub intrusion_mm: f64,
    pub mass_kg: f64,
    pub record: SimulationRecord,
    pub x_normalized: Vec<f64>,
    pub x_physical: Vec<f64>,
    /// Working directory used; removed after success unless kept.
    pub work_dir: PathBuf,
}

impl EvaluationResult {
    pub fn objective(&self, kind: ObjectiveKind) -> Option<f64> {
        self.raw.get(&kind).copied()
    }

    /// Machine-readable `key=value` lines; floats use the shortest
    /// representation that parses back to the same bits.
    pub fn to_key_values(&self) -> Vec<(String, String)> {
        let join = |v: &[f64]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
        let mut out = vec![
            ("problem".to_string(), self.problem.number().to_string()),
            ("dim".to_string(), self.x_normalized.len().to_string()),
            ("feasible".to_string(), self.feasible.to_string()),
            ("mass_kg".to_string(), self.mass_kg.to_string()),
            ("intrusion_mm".to_string(), self.intrusion_mm.to_string()),
            ("absorbed_energy_J".to_string(), self.record.e_abs_j.to_string()),
            ("peak_force_kN".to_string(), self.record.f_peak_kn.to_string()),
            ("mean_force_kN".to_string(), self.record.f_mean_kn.to_string()),
        ];
        for (kind, value) in &self.raw {
            out.push((kind.name().to_string(), value.to_string()));
        }
        out.push(("x_normalized".to_string(), join(&self.x_normalized)));
        out.push(("x_physical".to_string(), join(&self.x_physical)));
        out
    }
}

impl ProblemInstance {
    pub fn new(
        id: ProblemId,
        dim: usize,
        objectives: &[ObjectiveKind],
        solver: SolverMode,
        settings: RunSettings,
    ) -> Result<Self> {
        let bounds = id.bounds(dim)?;
        if objectives.is_empty() {
            return Err(Error::NoObjectives);
        }
        let mut objectives = objectives.to_vec();
        let mut seen = std::collections::HashSet::new();
        objectives.retain(|o| seen.insert(*o));
        Ok(ProblemInstance {
            id,
            dim,
            bounds,
            objectives,
            solver,
            settings,
        })
    }

    /// Copy of this instance with different run settings.
    pub fn with_settings(&self, settings: RunSettings) -> Self {
        ProblemInstance {
            settings,
            ..self.clone()
        }
    }

    pub fn id(&self) -> ProblemId {
        self.id
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    pub fn objectives(&self) -> &[ObjectiveKind] {
        &self.objectives
    }

    pub fn solver(&self) -> &SolverMode {
        &self.solver
    }

    pub fn settings(&self) -> &RunSettings {
        &self.settings
    }

    pub fn material(&self) -> MaterialModel {
        material_for(self.id)
    }

    pub fn sim_config(&self) -> SimConfig {
        let mut cfg = SimConfig::for_problem(self.id);
        cfg.animation = self.settings.vtk;
        cfg
    }

    fn check_normalized(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::WrongLength {
                expected: self.dim,
                got: x.len(),
            });
        }
        for (i, &v) in x.iter().enumerate() {
            if !(NORMALIZED_LOWER..=NORMALIZED_UPPER).contains(&v) {
                return Err(Error::OutOfDomain {
                    index: i + 1,
                    value: v,
                });
            }
        }
        Ok(())
    }

    /// Affine map from `[-5, 5]^d` onto the physical bounds. Rejects
    /// out-of-domain components instead of clamping them.
    pub fn denormalize(&self, x_norm: &[f64]) -> Result<Vec<f64>> {
        self.check_normalized(x_norm)?;
        Ok(x_norm
            .iter()
            .zip(self.bounds.lower.iter().zip(&self.bounds.upper))
            .map(|(&x, (&lo, &hi))| {
                let s = (x - NORMALIZED_LOWER) / (NORMALIZED_UPPER - NORMALIZED_LOWER);
                if s == 1.0 {
                    hi
                } else {
                    lo + s * (hi - lo)
                }
            })
            .collect())
    }

    /// Inverse of [`denormalize`](Self::denormalize).
    pub fn normalize(&self, x_phys: &[f64]) -> Result<Vec<f64>> {
        if x_phys.len() != self.dim {
            return Err(Error::WrongLength {
                expected: self.dim,
                got: x_phys.len(),
            });
        }
        Ok(x_phys
            .iter()
            .zip(self.bounds.lower.iter().zip(&self.bounds.upper))
            .map(|(&x, (&lo, &hi))| {
                NORMALIZED_LOWER + (x - lo) / (hi - lo) * (NORMALIZED_UPPER - NORMALIZED_LOWER)
            })
            .collect())
    }

    /// Runs the full pipeline for one normalized design vector.
    ///
    /// In mock mode the result is a pure function of `(problem, d, x_norm)`.
    pub fn evaluate(&self, x_norm: &[f64]) -> Result<EvaluationResult> {
        let x_physical = self.denormalize(x_norm)?;
        let mesh = mesh_for_design(self.id, self.dim, &x_physical)?;
        let material = self.material();
        let mass = compute_mass(&mesh, material.rho);
        let cfg = self.sim_config();
        let case = self.id.name();
        let deck = build_deck(&mesh, &material, &cfg, case)?;

        let work_dir = WorkDir::create(&self.settings.work_root, case)?;
        let mock = MockInputs {
            mass_kg: mass.total_kg,
            sigma_y_mpa: material.sigma_y,
            density: material.rho,
            geometry: solver::GeometrySummary::for_problem(self.id),
        };
        let job = SolverJob {
            work_dir: work_dir.path().to_path_buf(),
            case: case.to_string(),
            deck,
            cfg: cfg.clone(),
            cores: self.settings.cores,
            timeout: self.settings.timeout,
            mode: self.solver.clone(),
            mock: Some(mock),
        };
        let outcome = self.finish(&job, &mass, x_norm, x_physical);
        match outcome {
            Ok(mut result) => {
                result.work_dir = if self.settings.keep_work_dirs {
                    work_dir.keep()
                } else {
                    let path = work_dir.path().to_path_buf();
                    work_dir.remove()?;
                    path
                };
                Ok(result)
            }
            Err(e) => {
                // left in place for inspection
                work_dir.keep();
                Err(e)
            }
        }
    }

    fn finish(
        &self,
        job: &SolverJob,
        mass: &MassReport,
        x_norm: &[f64],
        x_physical: Vec<f64>,
    ) -> Result<EvaluationResult> {
        job.write_deck()?;
        let output = solver::run(job)?.into_ok()?;
        let bytes = std::fs::read(&output.time_history_csv)?;
        let th = parse_time_history_with(&bytes, &self.settings.columns)?;
        let record = extract_scalars_with(
            th,
            mass,
            self.id.intrusion_limit_mm(),
            self.settings.force_window,
        )?;
        let raw = self.objective_values(&record)?;
        let feasible = record.is_feasible();
        Ok(EvaluationResult {
            problem: self.id,
            raw,
            feasible,
            intrusion_mm: record.delta_mm,
            mass_kg: record.m_s_kg,
            record,
            x_normalized: x_norm.to_vec(),
            x_physical,
            work_dir: job.work_dir.clone(),
        })
    }

    fn objective_values(&self, r: &SimulationRecord) -> Result<BTreeMap<ObjectiveKind, f64>> {
        let mut raw = BTreeMap::new();
        for &kind in &self.objectives {
            let value = match kind {
                ObjectiveKind::Sea => objectives::sea(r.e_abs_j, r.m_s_kg)?,
                ObjectiveKind::PenalizedSea => {
                    if r.delta_mm <= STARBOX_INTRUSION_LIMIT_MM {
                        objectives::penalized_sea(objectives::sea(r.e_abs_j, r.m_s_kg)?, r.delta_mm)
                    } else {
                        objectives::penalized_sea(f64::NAN, r.delta_mm)
                    }
                }
                ObjectiveKind::Mass => r.m_s_kg,
                ObjectiveKind::PenalizedMass => objectives::penalized_mass(r.m_s_kg, r.delta_mm),
                ObjectiveKind::LoadUniformity => r.load_uniformity(),
                ObjectiveKind::Intrusion => r.delta_mm,
                ObjectiveKind::AbsorbedEnergy => r.e_abs_j,
                ObjectiveKind::PeakForce => r.f_peak_kn,
                ObjectiveKind::MeanForce => r.f_mean_kn,
            };
            raw.insert(kind, value);
        }
        Ok(raw)
    }
}

/// Working directory root for a CLI output directory.
pub fn work_root_under(out_dir: &Path) -> PathBuf {
    out_dir.join("work")
}
