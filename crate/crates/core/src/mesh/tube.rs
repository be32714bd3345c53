use std::collections::BTreeMap;

use super::{MeshError, ShellElement, ShellMesh};
use crate::parameterization::{TriggerSet, TriggerTriplet, TRIGGERS_PER_FACE};

/// Rectangular tube: width along x (Face A walls at `y = ±depth/2`),
/// depth along y (Face B walls at `x = ±width/2`), length along z.
#[derive(Debug, Clone, PartialEq)]
pub struct TubeDims {
    pub width: f64,
    pub depth: f64,
    pub length: f64,
    pub element_size: f64,
    pub wall_thickness: f64,
    /// Axial length of the linear transition above and below each band.
    pub ramp: f64,
}

impl Default for TubeDims {
    fn default() -> Self {
        TubeDims {
            width: 120.0,
            depth: 80.0,
            length: 800.0,
            element_size: 4.0,
            wall_thickness: 1.5,
            ramp: 4.0,
        }
    }
}

impl TubeDims {
    /// Nominal axial station of trigger `slot` (0-based within a face).
    pub fn station(&self, slot: usize) -> f64 {
        (slot + 1) as f64 * self.length / (TRIGGERS_PER_FACE + 1) as f64
    }

    pub fn rows(&self) -> usize {
        (self.length / self.element_size).round() as usize
    }

    fn edge_elements(&self, len: f64) -> usize {
        (len / self.element_size).round() as usize
    }
}

pub const TUBE_PART: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Wall {
    Bottom,
    Right,
    Top,
    Left,
}

/// Lateral band weight at axial position `z` for one trigger.
fn band_weight(t: &TriggerTriplet, centre: f64, ramp: f64, z: f64) -> f64 {
    if t.h <= 0.0 {
        return 0.0;
    }
    let dist = (z - centre).abs() - t.h / 2.0;
    if dist <= 0.0 {
        1.0
    } else if dist < ramp {
        1.0 - dist / ramp
    } else {
        0.0
    }
}

fn check_bands(triggers: &[TriggerTriplet], face: char, offset: usize, dims: &TubeDims) -> Result<(), MeshError> {
    let span = |slot: usize, t: &TriggerTriplet| {
        let c = dims.station(slot) + t.z;
        let half = t.h / 2.0 + dims.ramp;
        (c - half, c + half)
    };
    for (i, t) in triggers.iter().enumerate() {
        if t.h <= 0.0 {
            continue;
        }
        let (lo, hi) = span(i, t);
        if lo < 0.0 || hi > dims.length {
            return Err(MeshError::BandOutsideTube {
                index: offset + i + 1,
                lo,
                hi,
            });
        }
        for (j, u) in triggers.iter().enumerate().skip(i + 1) {
            if u.h <= 0.0 {
                continue;
            }
            let (lo2, hi2) = span(j, u);
            if lo < hi2 && lo2 < hi {
                return Err(MeshError::BandOverlap {
                    face,
                    first: offset + i + 1,
                    second: offset + j + 1,
                });
            }
        }
    }
    Ok(())
}

/// Tube mesh with trigger bands pushed along the outward wall normal.
///
/// Each Face A trigger acts on both long walls and each Face B trigger on
/// both short walls, symmetric about the tube axis. Corner nodes stay on the
/// nominal prism.
pub fn mesh_crashtube(triggers: &TriggerSet, dims: &TubeDims) -> Result<ShellMesh, MeshError> {
    let (nw, nd) = (dims.edge_elements(dims.width), dims.edge_elements(dims.depth));
    if nw == 0 || nd == 0 || dims.rows() == 0 {
        return Err(MeshError::InvalidLayout(format!(
            "element size {} too coarse",
            dims.element_size
        )));
    }
    check_bands(triggers.face_a(), 'A', 0, dims)?;
    check_bands(triggers.face_b(), 'B', TRIGGERS_PER_FACE, dims)?;

    let (hw, hd) = (dims.width / 2.0, dims.depth / 2.0);
    let step_w = dims.width / nw as f64;
    let step_d = dims.depth / nd as f64;
    // ring starts at (-hw, -hd) and runs counterclockwise
    let mut ring: Vec<(f64, f64, Option<Wall>)> = Vec::with_capacity(2 * (nw + nd));
    for k in 0..nw {
        let wall = (k > 0).then_some(Wall::Bottom);
        ring.push((-hw + k as f64 * step_w, -hd, wall));
    }
    for k in 0..nd {
        let wall = (k > 0).then_some(Wall::Right);
        ring.push((hw, -hd + k as f64 * step_d, wall));
    }
    for k in 0..nw {
        let wall = (k > 0).then_some(Wall::Top);
        ring.push((hw - k as f64 * step_w, hd, wall));
    }
    for k in 0..nd {
        let wall = (k > 0).then_some(Wall::Left);
        ring.push((-hw, hd - k as f64 * step_d, wall));
    }

    let rows = dims.rows();
    let row_height = dims.length / rows as f64;
    let ring_len = ring.len();
    let mut nodes = Vec::with_capacity(ring_len * (rows + 1));
    for level in 0..=rows {
        let z = level as f64 * row_height;
        let lateral = |face: &[TriggerTriplet]| -> f64 {
            face.iter()
                .enumerate()
                .map(|(slot, t)| t.epsilon * band_weight(t, dims.station(slot) + t.z, dims.ramp, z))
                .sum()
        };
        let (ea, eb) = (lateral(triggers.face_a()), lateral(triggers.face_b()));
        for &(x, y, wall) in &ring {
            let p = match wall {
                Some(Wall::Bottom) => [x, y - ea, z],
                Some(Wall::Top) => [x, y + ea, z],
                Some(Wall::Right) => [x + eb, y, z],
                Some(Wall::Left) => [x - eb, y, z],
                None => [x, y, z],
            };
            nodes.push(p);
        }
    }

    let mut elements = Vec::with_capacity(ring_len * rows);
    for row in 0..rows {
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
                part: TUBE_PART,
            });
        }
    }
    let parts = BTreeMap::from([(TUBE_PART, dims.wall_thickness)]);
    Ok(ShellMesh {
        nodes,
        elements,
        parts,
    })
}
