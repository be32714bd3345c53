use super::{check_design, ThicknessProfile};
use crate::error::Result;
use crate::problem::ProblemId;

/// Crash-box extrusion length, mm.
pub const STARBOX_LENGTH_MM: f64 = 120.0;
/// Wall thickness used whenever no variable controls it, mm.
pub const STARBOX_DEFAULT_THICKNESS_MM: f64 = 2.1;

/// Closed cross-section polygon, counter-clockwise, extruded along `+z`.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossSection {
    pub vertices: Vec<(f64, f64)>,
    pub extrusion_length: f64,
}

impl CrossSection {
    /// Axis-aligned rectangle, `height` along y and `width` along x, starting
    /// at the `(+x, +y)` corner.
    pub fn rectangle(height: f64, width: f64, extrusion_length: f64) -> Self {
        let (hx, hy) = (width / 2.0, height / 2.0);
        CrossSection {
            vertices: vec![(hx, hy), (-hx, hy), (-hx, -hy), (hx, -hy)],
            extrusion_length,
        }
    }

    /// Eight-point star: bounding-rectangle corners alternating with edge
    /// midpoints pulled inwards by `inset_y` (top/bottom) and `inset_x`
    /// (left/right).
    pub fn star(height: f64, width: f64, inset_y: f64, inset_x: f64, extrusion_length: f64) -> Self {
        let (hx, hy) = (width / 2.0, height / 2.0);
        CrossSection {
            vertices: vec![
                (hx, hy),
                (0.0, hy - inset_y),
                (-hx, hy),
                (-hx + inset_x, 0.0),
                (-hx, -hy),
                (0.0, -hy + inset_y),
                (hx, -hy),
                (hx - inset_x, 0.0),
            ],
            extrusion_length,
        }
    }

    pub fn perimeter(&self) -> f64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
                (b.0 - a.0).hypot(b.1 - a.1)
            })
            .sum()
    }

    /// Vertices that are true corners of the polygon (collinear points removed).
    pub fn vertex_set(&self) -> Vec<(f64, f64)> {
        let n = self.vertices.len();
        let mut out: Vec<(f64, f64)> = (0..n)
            .filter(|&i| {
                let p = self.vertices[(i + n - 1) % n];
                let c = self.vertices[i];
                let q = self.vertices[(i + 1) % n];
                let cross = (c.0 - p.0) * (q.1 - c.1) - (c.1 - p.1) * (q.0 - c.0);
                cross.abs() > 1e-12 * (1.0 + c.0.abs() + c.1.abs())
            })
            .map(|i| self.vertices[i])
            .collect();
        out.sort_by(|a, b| a.partial_cmp(b).expect("finite vertices"));
        out
    }
}

/// Cross-section and wall-thickness profile of the star-shaped crash box.
///
/// | d     | section                          | thickness                      |
/// |-------|----------------------------------|--------------------------------|
/// | 1     | square of side x1                | 2.1 mm                          |
/// | 2     | rectangle x1 (y) by x2 (x)       | 2.1 mm                          |
/// | 3     | rectangle                        | x3                              |
/// | 4     | star, insets x3 (y) and x4 (x)   | 2.1 mm                          |
/// | >= 5  | star                             | control points x5..xd over z   |
pub fn starbox_geometry(d: usize, x: &[f64]) -> Result<(CrossSection, ThicknessProfile)> {
    check_design(ProblemId::StarBox, d, x)?;
    let len = STARBOX_LENGTH_MM;
    let uniform = |t: f64| ThicknessProfile::uniform(len, t);
    let geometry = match d {
        1 => (CrossSection::rectangle(x[0], x[0], len), uniform(STARBOX_DEFAULT_THICKNESS_MM)),
        2 => (CrossSection::rectangle(x[0], x[1], len), uniform(STARBOX_DEFAULT_THICKNESS_MM)),
        3 => (CrossSection::rectangle(x[0], x[1], len), uniform(x[2])),
        4 => (
            CrossSection::star(x[0], x[1], x[2], x[3], len),
            uniform(STARBOX_DEFAULT_THICKNESS_MM),
        ),
        _ => (
            CrossSection::star(x[0], x[1], x[2], x[3], len),
            ThicknessProfile::uniformly_spaced(len, &x[4..])?,
        ),
    };
    Ok(geometry)
}
