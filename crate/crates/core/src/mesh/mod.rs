//! Structured quadrilateral shell meshes for the three benchmark structures
//! and their closed-form structural mass.
//!
//! Node and element ids are 1-based and assigned level by level (along the
//! extrusion or height axis), then by position around the section.

mod beam;
mod starbox;
mod tube;

use std::collections::BTreeMap;
use std::io::{self, Write};

use thiserror::Error;

pub use beam::{mesh_beam, BeamDims};
pub use starbox::{mesh_starbox, STARBOX_ROWS};
pub use tube::{mesh_crashtube, TubeDims};

use crate::error::Result;
use crate::parameterization::{beam_rib_layout, starbox_geometry, trigger_mapping};
use crate::problem::ProblemId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshError {
    #[error("degenerate cross-section: {0}")]
    DegeneratePolygon(String),
    #[error("triggers {first} and {second} overlap on face {face}")]
    BandOverlap {
        face: char,
        first: usize,
        second: usize,
    },
    #[error("trigger {index} band [{lo}, {hi}] mm extends outside the tube")]
    BandOutsideTube { index: usize, lo: f64, hi: f64 },
    #[error("invalid mesh layout: {0}")]
    InvalidLayout(String),
}

/// Four-node shell element. `nodes` holds 1-based node ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShellElement {
    pub nodes: [usize; 4],
    pub part: u32,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ShellMesh {
    /// Coordinates in mm; node id `i + 1` lives at index `i`.
    pub nodes: Vec<[f64; 3]>,
    /// Element id `i + 1` lives at index `i`.
    pub elements: Vec<ShellElement>,
    /// Shell thickness per part id, mm.
    pub parts: BTreeMap<u32, f64>,
}

impl ShellMesh {
    pub fn node(&self, id: usize) -> [f64; 3] {
        self.nodes[id - 1]
    }

    fn corners(&self, e: &ShellElement) -> [[f64; 3]; 4] {
        e.nodes.map(|id| self.node(id))
    }

    pub fn barycenter(&self, e: &ShellElement) -> [f64; 3] {
        let c = self.corners(e);
        let mut b = [0.0; 3];
        for p in &c {
            for k in 0..3 {
                b[k] += p[k] / 4.0;
            }
        }
        b
    }

    pub fn barycenters(&self) -> Vec<[f64; 3]> {
        self.elements.iter().map(|e| self.barycenter(e)).collect()
    }

    /// Vector area of the quad, half the norm of the diagonal cross product;
    /// exact for planar quads. mm².
    pub fn element_area(&self, e: &ShellElement) -> f64 {
        let [a, b, c, d] = self.corners(e);
        let d1 = sub(c, a);
        let d2 = sub(d, b);
        0.5 * norm(cross(d1, d2))
    }

    /// Longest over shortest edge.
    pub fn aspect_ratio(&self, e: &ShellElement) -> f64 {
        let c = self.corners(e);
        let edges: Vec<f64> = (0..4).map(|i| norm(sub(c[(i + 1) % 4], c[i]))).collect();
        let max = edges.iter().copied().fold(0.0, f64::max);
        let min = edges.iter().copied().fold(f64::INFINITY, f64::min);
        max / min
    }

    pub fn thickness_of(&self, e: &ShellElement) -> f64 {
        self.parts[&e.part]
    }

    /// Writes a plain-text listing:
    ///
    /// ```text
    /// NODES <count>
    /// <id> <x> <y> <z>
    /// ELEMENTS <count>
    /// <id> <n1> <n2> <n3> <n4> <part>
    /// PARTS <count>
    /// <part> <thickness>
    /// ```
    ///
    /// Floats use the shortest representation that round-trips.
    pub fn write_listing<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "NODES {}", self.nodes.len())?;
        for (i, p) in self.nodes.iter().enumerate() {
            writeln!(w, "{} {} {} {}", i + 1, p[0], p[1], p[2])?;
        }
        writeln!(w, "ELEMENTS {}", self.elements.len())?;
        for (i, e) in self.elements.iter().enumerate() {
            let [a, b, c, d] = e.nodes;
            writeln!(w, "{} {a} {b} {c} {d} {}", i + 1, e.part)?;
        }
        writeln!(w, "PARTS {}", self.parts.len())?;
        for (part, t) in &self.parts {
            writeln!(w, "{part} {t}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MassReport {
    pub total_kg: f64,
    pub per_part_kg: BTreeMap<u32, f64>,
}

/// Sum of element area × thickness × density; `density` in kg/m³.
pub fn compute_mass(mesh: &ShellMesh, density: f64) -> MassReport {
    const MM3_TO_M3: f64 = 1e-9;
    let mut per_part_kg: BTreeMap<u32, f64> = mesh.parts.keys().map(|&p| (p, 0.0)).collect();
    for e in &mesh.elements {
        let volume = mesh.element_area(e) * mesh.thickness_of(e) * MM3_TO_M3;
        *per_part_kg.get_mut(&e.part).expect("part registered") += volume * density;
    }
    let total_kg = per_part_kg.values().sum();
    MassReport {
        total_kg,
        per_part_kg,
    }
}

/// Mesh of the structure a physical design vector describes.
pub fn mesh_for_design(problem: ProblemId, d: usize, x_physical: &[f64]) -> Result<ShellMesh> {
    let mesh = match problem {
        ProblemId::StarBox => {
            let (section, profile) = starbox_geometry(d, x_physical)?;
            mesh_starbox(&section, &profile)?
        }
        ProblemId::ThreePointBending => {
            let layout = beam_rib_layout(d, x_physical)?;
            mesh_beam(&layout, &BeamDims::default())?
        }
        ProblemId::LongCrashTube => {
            let triggers = trigger_mapping(d, x_physical)?;
            mesh_crashtube(&triggers, &TubeDims::default())?
        }
    };
    Ok(mesh)
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm(a: [f64; 3]) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

/// Unit normal of a quad from its diagonals.
pub fn element_normal(mesh: &ShellMesh, e: &ShellElement) -> [f64; 3] {
    let [a, b, c, d] = mesh.corners(e);
    let n = cross(sub(c, a), sub(d, b));
    let l = norm(n);
    [n[0] / l, n[1] / l, n[2] / l]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parameterization::CrossSection;
    use crate::parameterization::ThicknessProfile;

    #[test]
    fn starbox_square_mass_matches_perimeter_formula() {
        let cs = CrossSection::rectangle(90.0, 90.0, 120.0);
        let mesh = mesh_starbox(&cs, &ThicknessProfile::uniform(120.0, 2.1)).unwrap();
        let mass = compute_mass(&mesh, 7830.0);
        // 0.36 m perimeter × 0.12 m × 0.0021 m × 7830 kg/m³
        let analytic = 0.36 * 0.12 * 0.0021 * 7830.0;
        assert!((mass.total_kg - analytic).abs() / analytic < 1e-12);
        assert!((mass.total_kg - 0.7103).abs() < 1e-4);
        let sum: f64 = mass.per_part_kg.values().sum();
        assert_eq!(sum, mass.total_kg);
    }

    #[test]
    fn zero_density_and_linearity() {
        let cs = CrossSection::star(100.0, 80.0, 10.0, 20.0, 120.0);
        let profile = ThicknessProfile::uniformly_spaced(120.0, &[1.0, 2.0, 1.5]).unwrap();
        let mesh = mesh_starbox(&cs, &profile).unwrap();
        assert_eq!(compute_mass(&mesh, 0.0).total_kg, 0.0);
        let mut doubled = mesh.clone();
        for t in doubled.parts.values_mut() {
            *t *= 2.0;
        }
        let m1 = compute_mass(&mesh, 7830.0).total_kg;
        let m2 = compute_mass(&doubled, 7830.0).total_kg;
        assert!((m2 - 2.0 * m1).abs() < 1e-12 * m2);
    }

    #[test]
    fn listing_has_expected_sections() {
        let cs = CrossSection::rectangle(60.0, 60.0, 120.0);
        let mesh = mesh_starbox(&cs, &ThicknessProfile::uniform(120.0, 2.1)).unwrap();
        let mut buf = Vec::new();
        mesh.write_listing(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], format!("NODES {}", mesh.nodes.len()));
        assert_eq!(lines.len(), 3 + mesh.nodes.len() + mesh.elements.len() + mesh.parts.len());
        assert!(lines.contains(&"PARTS 30"));
    }
}
