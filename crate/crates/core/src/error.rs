use std::io;

use thiserror::Error;

use crate::deck::DeckError;
use crate::mesh::MeshError;
use crate::post::{ExtractError, ParseError};
use crate::problem::ProblemId;
use crate::solver::SolverError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension {dim} is not supported by {problem} (valid range 1..={max})")]
    DimensionOutOfRange {
        problem: ProblemId,
        dim: usize,
        max: usize,
    },
    #[error("unknown objective `{0}`")]
    UnknownObjective(String),
    #[error("at least one objective must be requested")]
    NoObjectives,
    #[error("design vector has {got} components, expected {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("component x{index} = {value} lies outside the normalized domain [-5, 5]")]
    OutOfDomain { index: usize, value: f64 },
    #[error("z = {z} mm lies outside the profile extent [0, {extent}] mm")]
    OutOfExtent { z: f64, extent: f64 },
    #[error("invalid thickness profile: {0}")]
    InvalidProfile(String),
    #[error("structural mass must be positive, got {0} kg")]
    NonPositiveMass(f64),
    #[error("force series is empty or identically zero")]
    DegenerateForce,
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Deck(#[from] DeckError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Extract(#[from] ExtractError),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

/// Coarse error classes, stable across releases; the CLI maps them to exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorCategory {
    Usage,
    Geometry,
    Solver,
    Parse,
    Io,
}

impl ErrorCategory {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCategory::Usage => "usage",
            ErrorCategory::Geometry => "geometry",
            ErrorCategory::Solver => "solver",
            ErrorCategory::Parse => "parse",
            ErrorCategory::Io => "io",
        }
    }
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::DimensionOutOfRange { .. }
            | Error::UnknownObjective(_)
            | Error::NoObjectives
            | Error::WrongLength { .. }
            | Error::OutOfDomain { .. }
            | Error::OutOfExtent { .. }
            | Error::InvalidProfile(_) => ErrorCategory::Usage,
            Error::Mesh(_) | Error::Deck(_) | Error::NonPositiveMass(_) => ErrorCategory::Geometry,
            Error::Solver(_) => ErrorCategory::Solver,
            Error::Parse(_) | Error::Extract(_) | Error::DegenerateForce => ErrorCategory::Parse,
            Error::Io(_) => ErrorCategory::Io,
        }
    }
}
