use super::{check_design, ThicknessProfile};
use crate::error::Result;
use crate::problem::ProblemId;

pub const RIB_COUNT: usize = 5;
/// Rib height, mm.
pub const RIB_HEIGHT_MM: f64 = 120.0;
/// Thickness of ribs that no variable controls, mm.
pub const FIXED_RIB_THICKNESS_MM: f64 = 1.7;

/// Thickness profiles of the five ribs, ordered left to right.
#[derive(Debug, Clone, PartialEq)]
pub struct RibLayout {
    pub ribs: [ThicknessProfile; RIB_COUNT],
}

/// Rib slot (left to right) that each variable of the five-variable layout
/// controls: x5, x3, x1, x2, x4.
const D5_RIB_OF_VARIABLE: [usize; RIB_COUNT] = [2, 3, 1, 4, 0];

/// Variable (1-based, `0` = fixed 1.7 mm) per rib slot for `d <= 5`.
fn low_dim_assignment(d: usize) -> [usize; RIB_COUNT] {
    match d {
        1 => [1, 1, 1, 1, 1],
        2 => [2, 0, 0, 0, 1],
        3 => [3, 0, 1, 0, 2],
        4 => [4, 2, 0, 1, 3],
        _ => [5, 3, 1, 2, 4],
    }
}

/// Variable indices (1-based) feeding each rib, in control-point order.
///
/// Beyond `d = 5`, variable `k` is appended to the rib that `x_{((k-6) mod 5)+1}`
/// controls in the five-variable layout, so ribs gain points one at a time
/// until every rib carries eight at `d = 40`.
pub fn rib_variables(d: usize) -> [Vec<usize>; RIB_COUNT] {
    let mut ribs: [Vec<usize>; RIB_COUNT] = Default::default();
    for (slot, &var) in low_dim_assignment(d.min(5)).iter().enumerate() {
        if var != 0 {
            ribs[slot].push(var);
        }
    }
    for k in 6..=d {
        let base = (k - 6) % RIB_COUNT;
        ribs[D5_RIB_OF_VARIABLE[base]].push(k);
    }
    ribs
}

pub fn beam_rib_layout(d: usize, x: &[f64]) -> Result<RibLayout> {
    check_design(ProblemId::ThreePointBending, d, x)?;
    let vars = rib_variables(d);
    let mut profiles = Vec::with_capacity(RIB_COUNT);
    for rib in vars.iter() {
        let profile = if rib.is_empty() {
            ThicknessProfile::uniform(RIB_HEIGHT_MM, FIXED_RIB_THICKNESS_MM)
        } else {
            let values: Vec<f64> = rib.iter().map(|&v| x[v - 1]).collect();
            ThicknessProfile::uniformly_spaced(RIB_HEIGHT_MM, &values)?
        };
        profiles.push(profile);
    }
    let ribs: [ThicknessProfile; RIB_COUNT] = profiles.try_into().expect("five ribs");
    Ok(RibLayout { ribs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constants(layout: &RibLayout) -> Vec<f64> {
        layout
            .ribs
            .iter()
            .map(|p| {
                assert!(p.is_constant());
                p.thickness_at(0.0).unwrap()
            })
            .collect()
    }

    #[test]
    fn low_dimensional_layouts() {
        let l = beam_rib_layout(1, &[2.0]).unwrap();
        assert_eq!(constants(&l), vec![2.0; 5]);
        let l = beam_rib_layout(2, &[1.0, 2.0]).unwrap();
        assert_eq!(constants(&l), vec![2.0, 1.7, 1.7, 1.7, 1.0]);
        let l = beam_rib_layout(3, &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(constants(&l), vec![3.0, 1.7, 1.0, 1.7, 2.0]);
        let l = beam_rib_layout(4, &[1.0, 2.0, 3.0, 0.5]).unwrap();
        assert_eq!(constants(&l), vec![0.5, 2.0, 1.7, 1.0, 3.0]);
        let l = beam_rib_layout(5, &[1.0, 2.0, 3.0, 0.5, 2.5]).unwrap();
        assert_eq!(constants(&l), vec![2.5, 3.0, 1.0, 2.0, 0.5]);
    }

    #[test]
    fn d5_uniform_matches_d1() {
        let c = 1.3;
        assert_eq!(beam_rib_layout(5, &[c; 5]).unwrap(), beam_rib_layout(1, &[c]).unwrap());
    }

    #[test]
    fn d6_adds_second_point_to_centre_rib() {
        let l = beam_rib_layout(6, &[1.0, 2.0, 3.0, 0.5, 2.5, 0.8]).unwrap();
        assert_eq!(l.ribs[2].control_points(), &[(0.0, 1.0), (120.0, 0.8)]);
        assert!(l.ribs.iter().enumerate().all(|(i, p)| i == 2 || p.is_constant()));
    }

    #[test]
    fn point_counts_grow_cyclically() {
        for d in 1..=40 {
            let vars = rib_variables(d);
            let total: usize = vars.iter().map(Vec::len).sum();
            let expected = match d {
                2 => 2,
                3 => 3,
                4 => 4,
                1 => 5,
                _ => d,
            };
            assert_eq!(total, expected, "d = {d}");
            let max = vars.iter().map(Vec::len).max().unwrap();
            let min = vars.iter().map(Vec::len).min().unwrap();
            if d >= 5 {
                assert!(max - min <= 1, "d = {d}");
            }
        }
        assert!(rib_variables(40).iter().all(|r| r.len() == 8));
    }

    #[test]
    fn saturated_rows_take_their_own_variable() {
        let x: Vec<f64> = (0..40).map(|i| 0.5 + 0.0625 * i as f64).collect();
        let l = beam_rib_layout(40, &x).unwrap();
        let vars = rib_variables(40);
        for (rib, profile) in l.ribs.iter().enumerate() {
            let rows = profile.row_thicknesses(8);
            for (j, t) in rows.iter().enumerate() {
                assert_eq!(*t, x[vars[rib][j] - 1]);
            }
        }
    }
}
