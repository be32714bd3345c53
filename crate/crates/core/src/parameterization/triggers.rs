use super::check_design;
use crate::error::Result;
use crate::problem::ProblemId;

pub const TRIGGER_COUNT: usize = 10;
pub const TRIGGERS_PER_FACE: usize = 5;
/// Dimensions up to this value drive both faces with the same variables.
pub const MIRRORED_MAX_DIM: usize = 15;

pub const TRIGGER_OFFSET_BOUNDS: (f64, f64) = (-40.0, 40.0);
pub const TRIGGER_PROTRUSION_BOUNDS: (f64, f64) = (-4.0, 4.0);
pub const TRIGGER_HEIGHT_BOUNDS: (f64, f64) = (0.0, 16.0);

/// Geometric imperfection seeded on a tube face.
///
/// `z` is the axial offset of the trigger centroid from its nominal station,
/// `epsilon` the signed protrusion (positive outwards) and `h` its height.
/// A zero height means the trigger is absent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriggerTriplet {
    pub z: f64,
    pub epsilon: f64,
    pub h: f64,
}

impl TriggerTriplet {
    pub const DEFAULT: TriggerTriplet = TriggerTriplet {
        z: 0.0,
        epsilon: 0.0,
        h: 8.0,
    };

    pub fn within_bounds(&self) -> bool {
        let inside = |v: f64, (lo, hi): (f64, f64)| v >= lo && v <= hi;
        inside(self.z, TRIGGER_OFFSET_BOUNDS)
            && inside(self.epsilon, TRIGGER_PROTRUSION_BOUNDS)
            && inside(self.h, TRIGGER_HEIGHT_BOUNDS)
    }

    fn set(&mut self, component: usize, value: f64) {
        match component {
            0 => self.z = value,
            1 => self.epsilon = value,
            _ => self.h = value,
        }
    }
}

/// Ten triggers: indices 0..5 on face A (long sides), 5..10 on face B.
#[derive(Debug, Clone, PartialEq)]
pub struct TriggerSet {
    pub triggers: [TriggerTriplet; TRIGGER_COUNT],
}

impl Default for TriggerSet {
    fn default() -> Self {
        TriggerSet {
            triggers: [TriggerTriplet::DEFAULT; TRIGGER_COUNT],
        }
    }
}

impl TriggerSet {
    pub fn face_a(&self) -> &[TriggerTriplet] {
        &self.triggers[..TRIGGERS_PER_FACE]
    }

    pub fn face_b(&self) -> &[TriggerTriplet] {
        &self.triggers[TRIGGERS_PER_FACE..]
    }
}

/// Bounds of variable `x_k` (1-based): variables cycle through `(z, ε, h)`.
pub fn variable_bounds(k: usize) -> (f64, f64) {
    match (k - 1) % 3 {
        0 => TRIGGER_OFFSET_BOUNDS,
        1 => TRIGGER_PROTRUSION_BOUNDS,
        _ => TRIGGER_HEIGHT_BOUNDS,
    }
}

/// Triggers controlled by a design vector, following the equivalence tables.
///
/// For `d <= 15` variable `x_k` sets component `(k-1) mod 3` of trigger
/// `(k-1)/3` on face A and the same component of its face-B counterpart.
/// For `d >= 16` face A takes `x1..x15` and face B takes `x16..xd`.
/// Components not reached keep the defaults `(0, 0, 8)`, with one exception
/// carried over from the tables: at `d = 2` the face-A trigger 1 has zero
/// height while its face-B counterpart keeps the default.
pub fn trigger_mapping(d: usize, x: &[f64]) -> Result<TriggerSet> {
    check_design(ProblemId::LongCrashTube, d, x)?;
    let mut set = TriggerSet::default();
    if d <= MIRRORED_MAX_DIM {
        for (i, &value) in x.iter().enumerate() {
            let (trigger, component) = (i / 3, i % 3);
            set.triggers[trigger].set(component, value);
            set.triggers[trigger + TRIGGERS_PER_FACE].set(component, value);
        }
        if d == 2 {
            set.triggers[0].h = 0.0;
        }
    } else {
        for (i, &value) in x.iter().enumerate() {
            let (trigger, component) = (i / 3, i % 3);
            set.triggers[trigger].set(component, value);
        }
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d1_moves_first_pair_only() {
        let s = trigger_mapping(1, &[10.0]).unwrap();
        for i in [0, 5] {
            assert_eq!(s.triggers[i], TriggerTriplet { z: 10.0, epsilon: 0.0, h: 8.0 });
        }
        for i in [1, 2, 3, 4, 6, 7, 8, 9] {
            assert_eq!(s.triggers[i], TriggerTriplet::DEFAULT);
        }
    }

    #[test]
    fn d16_takes_over_face_b() {
        let mut x: Vec<f64> = (0..15).map(|i| variable_bounds(i + 1).1 / 2.0).collect();
        x.push(-15.0);
        let s = trigger_mapping(16, &x).unwrap();
        assert_eq!(s.triggers[5], TriggerTriplet { z: -15.0, epsilon: 0.0, h: 8.0 });
        for i in 0..5 {
            assert_eq!(s.triggers[i].z, x[3 * i]);
            assert_eq!(s.triggers[i].epsilon, x[3 * i + 1]);
            assert_eq!(s.triggers[i].h, x[3 * i + 2]);
        }
        for i in 6..10 {
            assert_eq!(s.triggers[i], TriggerTriplet::DEFAULT);
        }
    }

    #[test]
    fn d15_mirrors_faces() {
        let x: Vec<f64> = (0..15).map(|i| variable_bounds(i + 1).0 + 0.5).collect();
        let s = trigger_mapping(15, &x).unwrap();
        assert_eq!(s.face_a(), s.face_b());
    }

    #[test]
    fn d2_face_a_height_is_zero() {
        let s = trigger_mapping(2, &[5.0, -2.0]).unwrap();
        assert_eq!(s.triggers[0], TriggerTriplet { z: 5.0, epsilon: -2.0, h: 0.0 });
        assert_eq!(s.triggers[5], TriggerTriplet { z: 5.0, epsilon: -2.0, h: 8.0 });
    }

    #[test]
    fn mirror_holds_for_mirrored_dims_except_d2() {
        for d in (1..=15).filter(|&d| d != 2) {
            let x: Vec<f64> = (0..d).map(|i| variable_bounds(i + 1).1 * 0.3).collect();
            let s = trigger_mapping(d, &x).unwrap();
            for i in 0..5 {
                assert_eq!(s.triggers[i], s.triggers[i + 5], "d = {d}, trigger {i}");
            }
        }
    }

    #[test]
    fn outputs_respect_bounds() {
        for d in 1..=30 {
            let x: Vec<f64> = (0..d).map(|i| variable_bounds(i + 1).1).collect();
            let s = trigger_mapping(d, &x).unwrap();
            assert!(s.triggers.iter().all(TriggerTriplet::within_bounds));
        }
    }
}
