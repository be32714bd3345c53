//! Physical realization of design vectors: crash-box sections and thickness
//! profiles, beam rib layouts, and crash-tube trigger sets.
//!
//! All functions take the design vector in physical units (mm).

mod beam;
mod starbox;
mod thickness;
mod triggers;

pub use beam::{
    beam_rib_layout, rib_variables, RibLayout, FIXED_RIB_THICKNESS_MM, RIB_COUNT, RIB_HEIGHT_MM,
};
pub use starbox::{
    starbox_geometry, CrossSection, STARBOX_DEFAULT_THICKNESS_MM, STARBOX_LENGTH_MM,
};
pub use thickness::ThicknessProfile;
pub use triggers::{
    trigger_mapping, variable_bounds as trigger_variable_bounds, TriggerSet, TriggerTriplet,
    MIRRORED_MAX_DIM, TRIGGERS_PER_FACE, TRIGGER_COUNT, TRIGGER_HEIGHT_BOUNDS,
    TRIGGER_OFFSET_BOUNDS, TRIGGER_PROTRUSION_BOUNDS,
};

use crate::error::{Error, Result};
use crate::problem::ProblemId;

fn check_design(problem: ProblemId, d: usize, x: &[f64]) -> Result<()> {
    problem.check_dim(d)?;
    if x.len() != d {
        return Err(Error::WrongLength {
            expected: d,
            got: x.len(),
        });
    }
    Ok(())
}
