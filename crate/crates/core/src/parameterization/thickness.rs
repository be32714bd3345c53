use crate::error::{Error, Result};

/// Piecewise-linear wall thickness along an axis of length `extent`.
///
/// Control points are strictly increasing in `z`, start at `0` and end at
/// `extent`. A single control point describes a constant profile.
#[derive(Debug, Clone, PartialEq)]
pub struct ThicknessProfile {
    extent: f64,
    points: Vec<(f64, f64)>,
}

impl ThicknessProfile {
    pub fn uniform(extent: f64, thickness: f64) -> Self {
        ThicknessProfile {
            extent,
            points: vec![(0.0, thickness)],
        }
    }

    /// Control points at `z` uniformly spaced over `[0, extent]`.
    pub fn uniformly_spaced(extent: f64, thicknesses: &[f64]) -> Result<Self> {
        match thicknesses.len() {
            0 => Err(Error::InvalidProfile("no control points".into())),
            1 => Ok(Self::uniform(extent, thicknesses[0])),
            n => {
                let step = extent / (n - 1) as f64;
                let points = thicknesses
                    .iter()
                    .enumerate()
                    .map(|(i, &t)| {
                        let z = if i == n - 1 { extent } else { i as f64 * step };
                        (z, t)
                    })
                    .collect();
                Ok(ThicknessProfile { extent, points })
            }
        }
    }

    pub fn from_points(extent: f64, points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidProfile("no control points".into()));
        }
        if points.len() > 1 {
            if points[0].0 != 0.0 || points[points.len() - 1].0 != extent {
                return Err(Error::InvalidProfile(format!(
                    "control points must span [0, {extent}]"
                )));
            }
            if points.windows(2).any(|w| !(w[1].0 > w[0].0)) {
                return Err(Error::InvalidProfile(
                    "control point z must be strictly increasing".into(),
                ));
            }
        }
        Ok(ThicknessProfile { extent, points })
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn control_points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.points.len() == 1
    }

    pub fn thickness_at(&self, z: f64) -> Result<f64> {
        if !(0.0..=self.extent).contains(&z) {
            return Err(Error::OutOfExtent {
                z,
                extent: self.extent,
            });
        }
        if self.points.len() == 1 {
            return Ok(self.points[0].1);
        }
        // first segment whose right end is at or beyond z
        let seg = self
            .points
            .windows(2)
            .position(|w| z <= w[1].0)
            .unwrap_or(self.points.len() - 2);
        let (z0, t0) = self.points[seg];
        let (z1, t1) = self.points[seg + 1];
        if z == z0 {
            return Ok(t0);
        }
        if z == z1 {
            return Ok(t1);
        }
        let s = (z - z0) / (z1 - z0);
        Ok(t0 + s * (t1 - t0))
    }

    /// Thickness of each of `rows` equal element rows spanning the extent.
    ///
    /// When the profile has exactly one control point per row, row `k` takes
    /// control value `k` verbatim; otherwise each row samples the profile at
    /// its barycenter.
    pub fn row_thicknesses(&self, rows: usize) -> Vec<f64> {
        if self.points.len() == rows {
            return self.points.iter().map(|&(_, t)| t).collect();
        }
        let h = self.extent / rows as f64;
        (0..rows)
            .map(|k| {
                let z = (k as f64 + 0.5) * h;
                self.thickness_at(z).expect("row barycenter inside extent")
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig4() -> ThicknessProfile {
        ThicknessProfile::uniformly_spaced(120.0, &[1.6, 2.7, 0.95]).unwrap()
    }

    // Independent two-point interpolation used as the reference.
    fn lerp_oracle(a: (f64, f64), b: (f64, f64), z: f64) -> f64 {
        let w = (b.0 - z) / (b.0 - a.0);
        w * a.1 + (1.0 - w) * b.1
    }

    #[test]
    fn fig4_control_points_and_samples() {
        let p = fig4();
        assert_eq!(p.control_points(), &[(0.0, 1.6), (60.0, 2.7), (120.0, 0.95)]);
        assert_eq!(p.thickness_at(60.0).unwrap(), 2.7);
        assert_eq!(p.thickness_at(0.0).unwrap(), 1.6);
        assert_eq!(p.thickness_at(120.0).unwrap(), 0.95);
        let z30 = p.thickness_at(30.0).unwrap();
        assert!((z30 - 2.15).abs() < 1e-12);
        assert!((z30 - lerp_oracle((0.0, 1.6), (60.0, 2.7), 30.0)).abs() < 1e-12);
        let z58 = p.thickness_at(58.0).unwrap();
        assert!((z58 - lerp_oracle((0.0, 1.6), (60.0, 2.7), 58.0)).abs() < 1e-12);
        let z90 = p.thickness_at(90.0).unwrap();
        assert!((z90 - lerp_oracle((60.0, 2.7), (120.0, 0.95), 90.0)).abs() < 1e-12);
    }

    #[test]
    fn constant_profile() {
        let p = ThicknessProfile::uniform(120.0, 2.1);
        assert_eq!(p.thickness_at(57.0).unwrap(), 2.1);
        assert!(p.row_thicknesses(30).iter().all(|&t| t == 2.1));
    }

    #[test]
    fn out_of_extent() {
        let p = fig4();
        assert!(matches!(p.thickness_at(-0.1), Err(Error::OutOfExtent { .. })));
        assert!(matches!(p.thickness_at(120.5), Err(Error::OutOfExtent { .. })));
    }

    #[test]
    fn saturated_rows_are_verbatim() {
        let values: Vec<f64> = (0..30).map(|k| 0.7 + 0.07 * k as f64).collect();
        let p = ThicknessProfile::uniformly_spaced(120.0, &values).unwrap();
        assert_eq!(p.row_thicknesses(30), values);
    }

    #[test]
    fn rejects_bad_points() {
        assert!(ThicknessProfile::from_points(120.0, vec![]).is_err());
        assert!(ThicknessProfile::from_points(120.0, vec![(0.0, 1.0), (0.0, 2.0), (120.0, 1.0)]).is_err());
        assert!(ThicknessProfile::from_points(120.0, vec![(5.0, 1.0), (120.0, 1.0)]).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn piecewise_linear_and_bounded(values in proptest::collection::vec(0.7..3.0f64, 2..12), z in 0.0..120.0f64) {
                let p = ThicknessProfile::uniformly_spaced(120.0, &values).unwrap();
                for &(zc, tc) in p.control_points() {
                    prop_assert_eq!(p.thickness_at(zc).unwrap(), tc);
                }
                let t = p.thickness_at(z).unwrap();
                let pts = p.control_points();
                let seg = pts.windows(2).find(|w| z >= w[0].0 && z <= w[1].0).unwrap();
                let lo = seg[0].1.min(seg[1].1);
                let hi = seg[0].1.max(seg[1].1);
                prop_assert!(t >= lo - 1e-12 && t <= hi + 1e-12);
                // vanishing second differences inside a segment
                let (a, b) = (seg[0].0, seg[1].0);
                let h = (b - a) / 4.0;
                let s: Vec<f64> = (0..3).map(|i| p.thickness_at(a + h * (i as f64 + 1.0)).unwrap()).collect();
                prop_assert!((s[0] - 2.0 * s[1] + s[2]).abs() < 1e-12);
            }
        }
    }
}
