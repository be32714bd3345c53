use std::collections::BTreeMap;

use super::{MeshError, ShellElement, ShellMesh};
use crate::parameterization::{RibLayout, FIXED_RIB_THICKNESS_MM, RIB_COUNT};

/// Layered beam geometry: span along x, depth along y, height along z.
///
/// Ribs are longitudinal webs at `y = -depth/2 + (k + 1) depth / 6` for
/// `k = 0..5`, joined by top and bottom flanges spanning the full depth.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamDims {
    pub span: f64,
    pub depth: f64,
    pub height: f64,
    pub span_elements: usize,
    /// Must be a multiple of 6 so every rib sits on a flange node line.
    pub depth_elements: usize,
    pub rib_rows: usize,
    pub flange_thickness: f64,
}

impl Default for BeamDims {
    fn default() -> Self {
        BeamDims {
            span: 800.0,
            depth: 80.0,
            height: 120.0,
            span_elements: 200,
            depth_elements: 24,
            rib_rows: 8,
            flange_thickness: FIXED_RIB_THICKNESS_MM,
        }
    }
}

impl BeamDims {
    pub fn rib_line(&self, rib: usize) -> usize {
        (rib + 1) * self.depth_elements / (RIB_COUNT + 1)
    }

    pub fn bottom_flange_part(&self) -> u32 {
        (RIB_COUNT * self.rib_rows) as u32 + 1
    }

    pub fn top_flange_part(&self) -> u32 {
        self.bottom_flange_part() + 1
    }

    pub fn rib_part(&self, rib: usize, row: usize) -> u32 {
        (rib * self.rib_rows + row) as u32 + 1
    }
}

/// Five ribs with `rib_rows` rows each, plus flanges at the fixed thickness.
///
/// Parts `1..=5*rows` are rib rows (rib-major), followed by the bottom and
/// top flange.
pub fn mesh_beam(layout: &RibLayout, dims: &BeamDims) -> Result<ShellMesh, MeshError> {
    if !dims.depth_elements.is_multiple_of(RIB_COUNT + 1) || dims.rib_rows == 0 || dims.span_elements == 0 {
        return Err(MeshError::InvalidLayout(format!(
            "depth elements {} must be a positive multiple of {}",
            dims.depth_elements,
            RIB_COUNT + 1
        )));
    }
    for (i, rib) in layout.ribs.iter().enumerate() {
        if rib.extent() != dims.height {
            return Err(MeshError::InvalidLayout(format!(
                "rib {} profile extent {} differs from beam height {}",
                i + 1,
                rib.extent(),
                dims.height
            )));
        }
    }

    let nx = dims.span_elements + 1;
    let ny = dims.depth_elements + 1;
    let xs: Vec<f64> = (0..nx)
        .map(|i| i as f64 * dims.span / dims.span_elements as f64)
        .collect();
    let ys: Vec<f64> = (0..ny)
        .map(|j| -dims.depth / 2.0 + j as f64 * dims.depth / dims.depth_elements as f64)
        .collect();
    let row_height = dims.height / dims.rib_rows as f64;

    let flange_nodes = nx * ny;
    let rib_level_nodes = RIB_COUNT * nx;
    let interior_levels = dims.rib_rows - 1;
    let top_start = flange_nodes + interior_levels * rib_level_nodes;

    let mut nodes = Vec::with_capacity(2 * flange_nodes + interior_levels * rib_level_nodes);
    for y in &ys {
        nodes.extend(xs.iter().map(|&x| [x, *y, 0.0]));
    }
    for level in 1..dims.rib_rows {
        let z = level as f64 * row_height;
        for rib in 0..RIB_COUNT {
            let y = ys[dims.rib_line(rib)];
            nodes.extend(xs.iter().map(|&x| [x, y, z]));
        }
    }
    for y in &ys {
        nodes.extend(xs.iter().map(|&x| [x, *y, dims.height]));
    }

    let flange_id = |start: usize, j: usize, i: usize| start + j * nx + i + 1;
    // node id of rib `rib` at level `level`, span station `i`
    let rib_id = |rib: usize, level: usize, i: usize| -> usize {
        if level == 0 {
            flange_id(0, dims.rib_line(rib), i)
        } else if level == dims.rib_rows {
            flange_id(top_start, dims.rib_line(rib), i)
        } else {
            flange_nodes + (level - 1) * rib_level_nodes + rib * nx + i + 1
        }
    };

    let mut elements = Vec::new();
    let mut parts = BTreeMap::new();
    let bottom = dims.bottom_flange_part();
    let top = dims.top_flange_part();
    parts.insert(bottom, dims.flange_thickness);
    parts.insert(top, dims.flange_thickness);

    // bottom flange, normal -z
    for j in 0..dims.depth_elements {
        for i in 0..dims.span_elements {
            elements.push(ShellElement {
                nodes: [
                    flange_id(0, j, i),
                    flange_id(0, j + 1, i),
                    flange_id(0, j + 1, i + 1),
                    flange_id(0, j, i + 1),
                ],
                part: bottom,
            });
        }
    }
    // ribs, normal +y
    for (rib, profile) in layout.ribs.iter().enumerate() {
        let thickness = profile.row_thicknesses(dims.rib_rows);
        for row in 0..dims.rib_rows {
            let part = dims.rib_part(rib, row);
            parts.insert(part, thickness[row]);
            for i in 0..dims.span_elements {
                elements.push(ShellElement {
                    nodes: [
                        rib_id(rib, row, i + 1),
                        rib_id(rib, row, i),
                        rib_id(rib, row + 1, i),
                        rib_id(rib, row + 1, i + 1),
                    ],
                    part,
                });
            }
        }
    }
    // top flange, normal +z
    for j in 0..dims.depth_elements {
        for i in 0..dims.span_elements {
            elements.push(ShellElement {
                nodes: [
                    flange_id(top_start, j, i),
                    flange_id(top_start, j, i + 1),
                    flange_id(top_start, j + 1, i + 1),
                    flange_id(top_start, j + 1, i),
                ],
                part: top,
            });
        }
    }

    Ok(ShellMesh {
        nodes,
        elements,
        parts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{compute_mass, element_normal};
    use crate::parameterization::beam_rib_layout;

    #[test]
    fn constant_layout_mass_and_parts() {
        let layout = beam_rib_layout(1, &[1.7]).unwrap();
        let dims = BeamDims::default();
        let mesh = mesh_beam(&layout, &dims).unwrap();
        assert_eq!(mesh.parts.len(), 42);
        assert!(mesh.parts.values().all(|&t| t == 1.7));
        let analytic = (5.0 * 800.0 * 120.0 + 2.0 * 800.0 * 80.0) * 1.7 * 1e-9 * 2700.0;
        let m = compute_mass(&mesh, 2700.0).total_kg;
        assert!((m - analytic).abs() / analytic < 1e-12);
    }

    #[test]
    fn fig5_d3_rib_parts() {
        let layout = beam_rib_layout(3, &[1.0, 2.0, 3.0]).unwrap();
        let dims = BeamDims::default();
        let mesh = mesh_beam(&layout, &dims).unwrap();
        let expected = [3.0, 1.7, 1.0, 1.7, 2.0];
        for (rib, &t) in expected.iter().enumerate() {
            for row in 0..8 {
                assert_eq!(mesh.parts[&dims.rib_part(rib, row)], t);
            }
        }
    }

    #[test]
    fn saturated_layout_has_forty_distinct_rib_thicknesses() {
        let x: Vec<f64> = (0..40).map(|i| 0.5 + 0.0625 * i as f64).collect();
        let layout = beam_rib_layout(40, &x).unwrap();
        let dims = BeamDims::default();
        let mesh = mesh_beam(&layout, &dims).unwrap();
        let mut rib_t: Vec<f64> = (0..5)
            .flat_map(|r| (0..8).map(move |j| (r, j)))
            .map(|(r, j)| mesh.parts[&dims.rib_part(r, j)])
            .collect();
        rib_t.sort_by(f64::total_cmp);
        rib_t.dedup();
        assert_eq!(rib_t.len(), 40);
    }

    #[test]
    fn ribs_connect_to_flanges_and_rows_are_fifteen_mm() {
        let layout = beam_rib_layout(1, &[2.0]).unwrap();
        let dims = BeamDims::default();
        let mesh = mesh_beam(&layout, &dims).unwrap();
        for e in &mesh.elements {
            assert!(mesh.element_area(e) > 0.0);
            assert!(mesh.aspect_ratio(e) < 10.0);
            let n = element_normal(&mesh, e);
            if e.part <= 40 {
                assert!((n[1] - 1.0).abs() < 1e-12);
                let b = mesh.barycenter(e);
                let row = (e.part as usize - 1) % 8;
                assert!((b[2] - (7.5 + 15.0 * row as f64)).abs() < 1e-12);
            } else if e.part == dims.bottom_flange_part() {
                assert!((n[2] + 1.0).abs() < 1e-12);
            } else {
                assert!((n[2] - 1.0).abs() < 1e-12);
            }
        }
        // every node is used by some element
        let mut used = vec![false; mesh.nodes.len()];
        for e in &mesh.elements {
            for id in e.nodes {
                used[id - 1] = true;
            }
        }
        assert!(used.iter().all(|&u| u));
    }

    #[test]
    fn rejects_bad_depth_division() {
        let layout = beam_rib_layout(1, &[2.0]).unwrap();
        let dims = BeamDims {
            depth_elements: 20,
            ..BeamDims::default()
        };
        assert!(matches!(mesh_beam(&layout, &dims), Err(MeshError::InvalidLayout(_))));
    }
}
