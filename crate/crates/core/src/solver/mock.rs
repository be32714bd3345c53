use std::f64::consts::PI;

use crate::deck::SimConfig;
use crate::post::{Sample, TimeHistory};
use crate::problem::ProblemId;

/// Lengths the surrogate needs from the structure, mm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometrySummary {
    /// Length over which the wall material is spread; the mean load-bearing
    /// section is `mass / (density × extrusion_length)`.
    pub extrusion_length_mm: f64,
    /// Travel available before the impactor bottoms out.
    pub free_length_mm: f64,
}

impl GeometrySummary {
    pub fn for_problem(id: ProblemId) -> Self {
        let (extrusion_length_mm, free_length_mm) = match id {
            ProblemId::StarBox => (120.0, 120.0),
            ProblemId::ThreePointBending => (800.0, 120.0),
            ProblemId::LongCrashTube => (800.0, 800.0),
        };
        GeometrySummary {
            extrusion_length_mm,
            free_length_mm,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MockInputs {
    pub mass_kg: f64,
    pub sigma_y_mpa: f64,
    /// kg/m³.
    pub density: f64,
    pub geometry: GeometrySummary,
}

/// Closed-form crush response, sampled every `cfg.output_interval_ms`.
///
/// The impactor closes the initial gap at constant speed, then crushes
/// the structure over `T = 2δ/v₀` with velocity `v₀(1 + cos πφ)/2`,
/// `φ = t/T`. Contact starts on the first sample after the gap closes.
/// Force is a half-sine of amplitude `1.8 R` with a `2.2 R` spike on the
/// contact sample, and internal energy is `E·(1 − (v/v₀)²)` with
/// `E = min(KE₀, R δ)`.
pub fn mock_surrogate(inputs: &MockInputs, cfg: &SimConfig) -> TimeHistory {
    let dt = cfg.output_interval_ms;
    let samples_per_ms = 1.0 / dt;
    let n = (cfg.sim_time_ms / dt).round() as usize;
    let time = |k: usize| k as f64 / samples_per_ms;

    let v0 = cfg.impactor_velocity_ms();
    let m_i = cfg.impactor_mass_kg;
    let ke0 = cfg.initial_kinetic_energy_j();
    if !(v0 > 0.0) {
        return TimeHistory {
            samples: (0..=n)
                .map(|k| Sample {
                    time_ms: time(k),
                    contact_force_kn: 0.0,
                    impactor_disp_mm: 0.0,
                    internal_energy_j: 0.0,
                    kinetic_energy_j: 0.0,
                })
                .collect(),
        };
    }

    let area_mm2 = inputs.mass_kg / (inputs.density * 1e-9 * inputs.geometry.extrusion_length_mm);
    let resistance_n = inputs.sigma_y_mpa * area_mm2;
    let resistance_kn = resistance_n * 1e-3;
    // J / N = m, reported in mm
    let delta = (0.9 * inputs.geometry.free_length_mm).min(1e3 * ke0 / resistance_n);
    let e_final = ke0.min(resistance_n * delta * 1e-3);
    let crush_time = 2.0 * delta / v0;

    let contact_k = (cfg.impact_gap_mm / v0 * samples_per_ms).ceil() as usize;
    let t_contact = time(contact_k);
    let gap = v0 * t_contact;

    let samples = (0..=n)
        .map(|k| {
            let t = time(k);
            if k < contact_k {
                return Sample {
                    time_ms: t,
                    contact_force_kn: 0.0,
                    impactor_disp_mm: v0 * t,
                    internal_energy_j: 0.0,
                    kinetic_energy_j: ke0,
                };
            }
            let phi = ((t - t_contact) / crush_time).min(1.0);
            let v = 0.5 * v0 * (1.0 + (PI * phi).cos());
            let ratio = v / v0;
            let force = if k == contact_k {
                2.2 * resistance_kn
            } else {
                1.8 * resistance_kn * (PI * phi).sin()
            };
            Sample {
                time_ms: t,
                contact_force_kn: force.max(0.0),
                impactor_disp_mm: gap + delta * (phi + (PI * phi).sin() / PI),
                internal_energy_j: e_final * (1.0 - ratio * ratio),
                kinetic_energy_j: 0.5 * m_i * v * v,
            }
        })
        .collect();
    TimeHistory { samples }
}
