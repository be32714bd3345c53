use std::collections::BTreeMap;

use super::{MeshError, ShellElement, ShellMesh};
use crate::parameterization::{CrossSection, ThicknessProfile};

/// Element rows along the extrusion.
pub const STARBOX_ROWS: usize = 30;
/// Elements per polygon edge; fixed per vertex count so that the topology
/// depends only on the dimension. Sized for a 4 mm target at the longest
/// admissible edge (120 mm for rectangles, about 67 mm for star flanks).
const RECTANGLE_EDGE_ELEMENTS: usize = 30;
const STAR_EDGE_ELEMENTS: usize = 17;

/// Extrudes the section into `STARBOX_ROWS` rows; row `k` is part `k + 1`
/// with the thickness the profile assigns to that row.
pub fn mesh_starbox(section: &CrossSection, profile: &ThicknessProfile) -> Result<ShellMesh, MeshError> {
    let verts = &section.vertices;
    if verts.len() < 3 {
        return Err(MeshError::DegeneratePolygon(format!(
            "{} vertices",
            verts.len()
        )));
    }
    let n = verts.len();
    for i in 0..n {
        let (a, b) = (verts[i], verts[(i + 1) % n]);
        let len = (b.0 - a.0).hypot(b.1 - a.1);
        if !(len > 0.0) || !a.0.is_finite() || !a.1.is_finite() {
            return Err(MeshError::DegeneratePolygon(format!(
                "edge {i} has zero or invalid length"
            )));
        }
    }
    if section.extrusion_length != profile.extent() {
        return Err(MeshError::InvalidLayout(format!(
            "profile extent {} does not match extrusion length {}",
            profile.extent(),
            section.extrusion_length
        )));
    }

    let per_edge = if n == 4 {
        RECTANGLE_EDGE_ELEMENTS
    } else {
        STAR_EDGE_ELEMENTS
    };
    let mut ring = Vec::with_capacity(n * per_edge);
    for i in 0..n {
        let (a, b) = (verts[i], verts[(i + 1) % n]);
        for k in 0..per_edge {
            let s = k as f64 / per_edge as f64;
            ring.push((a.0 + s * (b.0 - a.0), a.1 + s * (b.1 - a.1)));
        }
    }
    let ring_len = ring.len();
    let row_height = section.extrusion_length / STARBOX_ROWS as f64;

    let mut nodes = Vec::with_capacity(ring_len * (STARBOX_ROWS + 1));
    for level in 0..=STARBOX_ROWS {
        let z = level as f64 * row_height;
        nodes.extend(ring.iter().map(|&(x, y)| [x, y, z]));
    }

    let thickness = profile.row_thicknesses(STARBOX_ROWS);
    let mut elements = Vec::with_capacity(ring_len * STARBOX_ROWS);
    let mut parts = BTreeMap::new();
    for row in 0..STARBOX_ROWS {
        let part = row as u32 + 1;
        parts.insert(part, thickness[row]);
        let base = row * ring_len;
        for p in 0..ring_len {
            let q = (p + 1) % ring_len;
            elements.push(ShellElement {
                nodes: [
                    base + p + 1,
                    base + q + 1,
                    base + ring_len + q + 1,
                    base + ring_len + p + 1,
                ],
                part,
            });
        }
    }
    Ok(ShellMesh {
        nodes,
        elements,
        parts,
    })
}
