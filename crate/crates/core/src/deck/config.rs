use crate::problem::ProblemId;

pub const ELEMENT_FORMULATION: &str = "Belytschko-Lin-Tsay";
pub const CONTACT_KEYWORD: &str = "/INTER/TYPE24";

/// Self-contact parameters; the defaults are conventional values for
/// thin-walled steel and aluminium crush.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactSettings {
    pub friction: f64,
    /// Minimum contact gap, mm.
    pub gap_min: f64,
    pub stiffness_scale: f64,
}

impl Default for ContactSettings {
    fn default() -> Self {
        ContactSettings {
            friction: 0.2,
            gap_min: 0.0,
            stiffness_scale: 1.0,
        }
    }
}

/// Load case and solver controls in source units.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub problem: ProblemId,
    pub impactor_mass_kg: f64,
    pub impactor_velocity_kmh: f64,
    /// Cylindrical impactor radius; a flat rigid wall when `None`.
    pub impactor_radius_mm: Option<f64>,
    /// Clearance between impactor and structure at t = 0.
    pub impact_gap_mm: f64,
    pub sim_time_ms: f64,
    pub element_formulation: &'static str,
    pub contact: &'static str,
    pub contact_settings: ContactSettings,
    /// Time-history sampling interval.
    pub output_interval_ms: f64,
    /// Request animation output from the external solver.
    pub animation: bool,
    pub animation_interval_ms: f64,
    /// Nominal structure envelope (height, width, depth), mm.
    pub dims_mm: (f64, f64, f64),
}

impl SimConfig {
    pub fn for_problem(problem: ProblemId) -> Self {
        let (mass, velocity, radius, time, dims) = match problem {
            ProblemId::StarBox => (250.0, 25.2, None, 45.0, (120.0, 120.0, 120.0)),
            ProblemId::ThreePointBending => (86.0, 36.0, Some(36.0), 40.0, (120.0, 800.0, 80.0)),
            ProblemId::LongCrashTube => (300.0, 30.0, None, 45.0, (800.0, 120.0, 80.0)),
        };
        SimConfig {
            problem,
            impactor_mass_kg: mass,
            impactor_velocity_kmh: velocity,
            impactor_radius_mm: radius,
            impact_gap_mm: 2.0,
            sim_time_ms: time,
            element_formulation: ELEMENT_FORMULATION,
            contact: CONTACT_KEYWORD,
            contact_settings: ContactSettings::default(),
            output_interval_ms: 0.1,
            animation: false,
            animation_interval_ms: 1.0,
            dims_mm: dims,
        }
    }

    /// Impactor speed in m/s, numerically equal to mm/ms.
    pub fn impactor_velocity_ms(&self) -> f64 {
        self.impactor_velocity_kmh / 3.6
    }

    /// ½·m·v², J.
    pub fn initial_kinetic_energy_j(&self) -> f64 {
        let v = self.impactor_velocity_ms();
        0.5 * self.impactor_mass_kg * v * v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn load_cases() {
        let c1 = SimConfig::for_problem(ProblemId::StarBox);
        assert_eq!((c1.impactor_velocity_kmh, c1.impactor_mass_kg, c1.sim_time_ms), (25.2, 250.0, 45.0));
        let c2 = SimConfig::for_problem(ProblemId::ThreePointBending);
        assert_eq!(c2.impactor_radius_mm, Some(36.0));
        assert_eq!((c2.impactor_velocity_kmh, c2.impactor_mass_kg, c2.sim_time_ms), (36.0, 86.0, 40.0));
        let c3 = SimConfig::for_problem(ProblemId::LongCrashTube);
        assert_eq!((c3.impactor_velocity_kmh, c3.impactor_mass_kg, c3.sim_time_ms), (30.0, 300.0, 45.0));
        for c in [c1, c2, c3] {
            assert_eq!(c.element_formulation, "Belytschko-Lin-Tsay");
            assert_eq!(c.contact, "/INTER/TYPE24");
        }
    }

    #[test]
    fn starbox_kinetic_energy() {
        let c = SimConfig::for_problem(ProblemId::StarBox);
        assert!((c.initial_kinetic_energy_j() - 6125.0).abs() < 1e-9);
    }
}
