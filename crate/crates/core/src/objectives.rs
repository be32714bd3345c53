//! Crashworthiness objectives and the piecewise feasibility reformulations.
//!
//! All reported values are minimization targets except the raw physical
//! quantities (`SEA`, `AbsorbedEnergy`, ...), which are exposed unchanged so
//! callers can build their own constraint handling on top of them.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Intrusion limit of the star-box problem, mm.
pub const STARBOX_INTRUSION_LIMIT_MM: f64 = 60.0;
/// Intrusion limit of the three-point bending problem, mm.
pub const BEAM_INTRUSION_LIMIT_MM: f64 = 50.0;
/// Slope of the infeasible branch of the penalized SEA, per mm of excess intrusion.
pub const SEA_PENALTY_SLOPE: f64 = 100.0;
/// Value the penalized mass takes just above the intrusion limit, kg.
pub const MASS_PENALTY_OFFSET: f64 = 4.25952;
pub const MASS_PENALTY_SCALE: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ObjectiveKind {
    Sea,
    PenalizedSea,
    Mass,
    PenalizedMass,
    LoadUniformity,
    Intrusion,
    AbsorbedEnergy,
    PeakForce,
    MeanForce,
}

impl ObjectiveKind {
    pub const ALL: [ObjectiveKind; 9] = [
        ObjectiveKind::Sea,
        ObjectiveKind::PenalizedSea,
        ObjectiveKind::Mass,
        ObjectiveKind::PenalizedMass,
        ObjectiveKind::LoadUniformity,
        ObjectiveKind::Intrusion,
        ObjectiveKind::AbsorbedEnergy,
        ObjectiveKind::PeakForce,
        ObjectiveKind::MeanForce,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ObjectiveKind::Sea => "SEA",
            ObjectiveKind::PenalizedSea => "PenalizedSEA",
            ObjectiveKind::Mass => "Mass",
            ObjectiveKind::PenalizedMass => "PenalizedMass",
            ObjectiveKind::LoadUniformity => "LoadUniformity",
            ObjectiveKind::Intrusion => "Intrusion",
            ObjectiveKind::AbsorbedEnergy => "AbsorbedEnergy",
            ObjectiveKind::PeakForce => "PeakForce",
            ObjectiveKind::MeanForce => "MeanForce",
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            ObjectiveKind::Sea => "J/kg",
            ObjectiveKind::PenalizedSea => "-",
            ObjectiveKind::Mass | ObjectiveKind::PenalizedMass => "kg",
            ObjectiveKind::LoadUniformity => "kN/kN",
            ObjectiveKind::Intrusion => "mm",
            ObjectiveKind::AbsorbedEnergy => "J",
            ObjectiveKind::PeakForce | ObjectiveKind::MeanForce => "kN",
        }
    }
}

impl fmt::Display for ObjectiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ObjectiveKind {
    type Err = Error;

    /// Case-insensitive; `-` and `_` are ignored, so `penalized-sea` works.
    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| *c != '-' && *c != '_')
            .flat_map(char::to_lowercase)
            .collect();
        let kind = match key.as_str() {
            "sea" => ObjectiveKind::Sea,
            "penalizedsea" => ObjectiveKind::PenalizedSea,
            "mass" => ObjectiveKind::Mass,
            "penalizedmass" => ObjectiveKind::PenalizedMass,
            "loaduniformity" | "lu" => ObjectiveKind::LoadUniformity,
            "intrusion" | "delta" => ObjectiveKind::Intrusion,
            "absorbedenergy" | "eabs" => ObjectiveKind::AbsorbedEnergy,
            "peakforce" | "fpeak" => ObjectiveKind::PeakForce,
            "meanforce" | "fmean" => ObjectiveKind::MeanForce,
            _ => return Err(Error::UnknownObjective(s.to_string())),
        };
        Ok(kind)
    }
}

/// Specific energy absorption, J/kg.
pub fn sea(absorbed_energy_j: f64, mass_kg: f64) -> Result<f64> {
    if !(mass_kg > 0.0) {
        return Err(Error::NonPositiveMass(mass_kg));
    }
    Ok(absorbed_energy_j / mass_kg)
}

/// `-SEA` while the intrusion stays within 60 mm, `100 (δ - 60)` beyond it.
/// The SEA argument is ignored on the infeasible branch.
pub fn penalized_sea(sea_value: f64, intrusion_mm: f64) -> f64 {
    if intrusion_mm <= STARBOX_INTRUSION_LIMIT_MM {
        -sea_value
    } else {
        SEA_PENALTY_SLOPE * (intrusion_mm - STARBOX_INTRUSION_LIMIT_MM)
    }
}

/// Mass while the intrusion stays within 50 mm, `4.25952 + 10 (δ/50 - 1)` beyond it.
///
/// The two branches are not required to meet at δ = 50.
pub fn penalized_mass(mass_kg: f64, intrusion_mm: f64) -> f64 {
    if intrusion_mm <= BEAM_INTRUSION_LIMIT_MM {
        mass_kg
    } else {
        MASS_PENALTY_OFFSET + MASS_PENALTY_SCALE * (intrusion_mm / BEAM_INTRUSION_LIMIT_MM - 1.0)
    }
}

/// Window over which the mean crush force is averaged.
///
/// The window opens at the first sample whose absolute force exceeds
/// `onset_fraction` of the global absolute peak and runs to the last sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceWindow {
    pub onset_fraction: f64,
}

impl Default for ForceWindow {
    fn default() -> Self {
        ForceWindow {
            onset_fraction: 0.01,
        }
    }
}

impl ForceWindow {
    /// Index of the first sample above the onset threshold, `None` when the
    /// series is empty or identically zero.
    pub fn onset(&self, abs_forces: &[f64]) -> Option<usize> {
        let peak = abs_forces.iter().copied().fold(0.0_f64, f64::max);
        if !(peak > 0.0) {
            return None;
        }
        let threshold = self.onset_fraction * peak;
        abs_forces.iter().position(|&f| f > threshold)
    }

    /// `(peak, mean)` of the absolute force over the window.
    pub fn peak_and_mean(&self, abs_forces: &[f64]) -> Option<(f64, f64)> {
        let start = self.onset(abs_forces)?;
        let peak = abs_forces.iter().copied().fold(0.0_f64, f64::max);
        let window = &abs_forces[start..];
        let mean = window.iter().sum::<f64>() / window.len() as f64;
        Some((peak, mean))
    }
}

/// Ratio of peak to mean absolute contact force over `(time, force)` samples.
pub fn load_uniformity(force_series: &[(f64, f64)]) -> Result<f64> {
    load_uniformity_with(force_series, ForceWindow::default())
}

pub fn load_uniformity_with(force_series: &[(f64, f64)], window: ForceWindow) -> Result<f64> {
    let abs: Vec<f64> = force_series.iter().map(|&(_, f)| f.abs()).collect();
    let (peak, mean) = window.peak_and_mean(&abs).ok_or(Error::DegenerateForce)?;
    Ok((peak / mean).abs())
}
