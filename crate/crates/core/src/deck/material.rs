use crate::problem::ProblemId;

/// Cowper-Symonds strain-rate scaling `1 + (rate / C)^(1/p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CowperSymonds {
    pub c: f64,
    pub p: f64,
}

/// Elastic-plastic shell material in source units.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialModel {
    pub name: &'static str,
    /// Young's modulus, GPa.
    pub e: f64,
    pub nu: f64,
    /// Density, kg/m³.
    pub rho: f64,
    /// Yield strength, MPa.
    pub sigma_y: f64,
    pub strain_rate: Option<CowperSymonds>,
    /// (effective plastic strain, effective stress MPa), piecewise linear.
    pub plasticity_curve: Vec<(f64, f64)>,
}

impl MaterialModel {
    pub fn steel() -> Self {
        MaterialModel {
            name: "steel",
            e: 200.0,
            nu: 0.3,
            rho: 7830.0,
            sigma_y: 360.0,
            strain_rate: Some(CowperSymonds { c: 40.0, p: 5.0 }),
            plasticity_curve: vec![
                (0.000, 366.0),
                (0.025, 424.0),
                (0.049, 476.0),
                (0.072, 507.0),
                (0.095, 529.0),
                (0.118, 546.0),
                (0.140, 559.0),
                (0.182, 584.0),
            ],
        }
    }

    pub fn aluminium() -> Self {
        MaterialModel {
            name: "aluminium",
            e: 70.0,
            nu: 0.33,
            rho: 2700.0,
            sigma_y: 180.0,
            strain_rate: None,
            plasticity_curve: vec![
                (0.0, 180.0),
                (0.01, 190.0),
                (0.02, 197.0),
                (0.05, 211.5),
                (0.1, 225.8),
                (0.15, 233.6),
                (0.2, 238.5),
                (0.4, 248.5),
            ],
        }
    }

    /// Curve starts at zero strain and rises strictly in both coordinates.
    pub fn curve_is_valid(&self) -> bool {
        let c = &self.plasticity_curve;
        c.len() >= 2
            && c[0].0 == 0.0
            && c.windows(2).all(|w| w[1].0 > w[0].0 && w[1].1 > w[0].1)
    }
}

pub fn material_for(id: ProblemId) -> MaterialModel {
    match id {
        ProblemId::StarBox | ProblemId::LongCrashTube => MaterialModel::steel(),
        ProblemId::ThreePointBending => MaterialModel::aluminium(),
    }
}
