//! Solver input decks in the OpenRadioss starter/engine block format.
//!
//! Model units are kg, mm and ms, so forces come out in kN, stresses in GPa
//! and energies in J. Every source-unit value converted on the way in is
//! echoed on a `#` comment line next to the converted field. Floats are
//! written with 15 significant digits in scientific notation, which makes
//! the output independent of locale and platform.

mod config;
mod material;
mod parse;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use thiserror::Error;

pub use config::{ContactSettings, SimConfig, CONTACT_KEYWORD, ELEMENT_FORMULATION};
pub use material::{material_for, CowperSymonds, MaterialModel};
pub use parse::parse_starter_mesh;

use crate::mesh::ShellMesh;
use crate::problem::ProblemId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DeckError {
    #[error("element {element} references part {part}, which has no thickness")]
    InconsistentPartTable { element: usize, part: u32 },
    #[error("part {part} has non-positive thickness {thickness}")]
    InvalidThickness { part: u32, thickness: f64 },
    #[error("mesh has no elements")]
    EmptyMesh,
    #[error("template error: {0}")]
    Template(String),
    #[error("deck line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Starter and engine text of one case plus a SHA-256 over both.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeckBundle {
    pub starter_text: String,
    pub engine_text: String,
    pub checksum: String,
}

impl DeckBundle {
    fn new(starter_text: String, engine_text: String) -> Self {
        let mut h = Sha256::new();
        h.update(starter_text.as_bytes());
        h.update(engine_text.as_bytes());
        let checksum = h.finalize().iter().map(|b| format!("{b:02x}")).collect();
        DeckBundle {
            starter_text,
            engine_text,
            checksum,
        }
    }

    pub fn starter_file_name(case: &str) -> String {
        format!("{case}_0000.rad")
    }

    pub fn engine_file_name(case: &str) -> String {
        format!("{case}_0001.rad")
    }

    /// Writes `<case>_0000.rad` and `<case>_0001.rad` into `dir`.
    pub fn write_to(&self, dir: &Path, case: &str) -> io::Result<(PathBuf, PathBuf)> {
        let starter = dir.join(Self::starter_file_name(case));
        let engine = dir.join(Self::engine_file_name(case));
        std::fs::write(&starter, &self.starter_text)?;
        std::fs::write(&engine, &self.engine_text)?;
        Ok((starter, engine))
    }
}

/// Starter layout with `{{NAME}}` placeholders for the generated blocks.
///
/// Recognized placeholders: `CASE`, `NODE`, `SHELL`, `PART`, `PROP`, `MAT`,
/// `IMPACTOR`, `CONTACT`, `BCS`, `TH`. The first five mesh-related ones are
/// required; a template may carry hand-written blocks for the rest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeckTemplate {
    pub text: String,
}

const REQUIRED_PLACEHOLDERS: [&str; 4] = ["NODE", "SHELL", "PART", "PROP"];

impl Default for DeckTemplate {
    fn default() -> Self {
        DeckTemplate {
            text: "\
#RADIOSS STARTER
# units: kg mm ms (force kN, stress GPa, energy J)
/BEGIN
{{CASE}}
      2022         0
                  kg                  mm                  ms
                  kg                  mm                  ms
{{NODE}}{{SHELL}}{{PART}}{{PROP}}{{MAT}}{{IMPACTOR}}{{CONTACT}}{{BCS}}{{TH}}/END
"
            .to_string(),
        }
    }
}

impl DeckTemplate {
    pub fn new(text: impl Into<String>) -> Result<Self, DeckError> {
        let t = DeckTemplate { text: text.into() };
        for name in REQUIRED_PLACEHOLDERS {
            if !t.text.contains(&format!("{{{{{name}}}}}")) {
                return Err(DeckError::Template(format!("missing placeholder {{{{{name}}}}}")));
            }
        }
        Ok(t)
    }

    fn render(&self, blocks: &BTreeMap<&str, String>) -> Result<String, DeckError> {
        let mut out = String::with_capacity(self.text.len() + blocks.values().map(String::len).sum::<usize>());
        let mut rest = self.text.as_str();
        while let Some(start) = rest.find("{{") {
            out.push_str(&rest[..start]);
            let after = &rest[start + 2..];
            let end = after
                .find("}}")
                .ok_or_else(|| DeckError::Template("unterminated placeholder".into()))?;
            let name = &after[..end];
            let block = blocks
                .get(name)
                .ok_or_else(|| DeckError::Template(format!("unknown placeholder {{{{{name}}}}}")))?;
            out.push_str(block);
            rest = &after[end + 2..];
        }
        out.push_str(rest);
        Ok(out)
    }
}

/// Fixed-format float: 15 significant digits, scientific notation.
pub fn fmt_float(v: f64) -> String {
    // collapse -0.0 so the sign never depends on how a zero was produced
    format!("{:>22}", format!("{:.14e}", v + 0.0))
}

fn fmt_int(v: usize) -> String {
    format!("{v:>10}")
}

pub fn build_deck(mesh: &ShellMesh, mat: &MaterialModel, cfg: &SimConfig, case: &str) -> Result<DeckBundle, DeckError> {
    build_deck_with_template(mesh, mat, cfg, case, &DeckTemplate::default())
}

/// Renders the starter through `template` and writes the engine deck.
pub fn build_deck_with_template(
    mesh: &ShellMesh,
    mat: &MaterialModel,
    cfg: &SimConfig,
    case: &str,
    template: &DeckTemplate,
) -> Result<DeckBundle, DeckError> {
    if mesh.elements.is_empty() {
        return Err(DeckError::EmptyMesh);
    }
    for (i, e) in mesh.elements.iter().enumerate() {
        if !mesh.parts.contains_key(&e.part) {
            return Err(DeckError::InconsistentPartTable {
                element: i + 1,
                part: e.part,
            });
        }
    }
    for (&part, &thickness) in &mesh.parts {
        if !(thickness > 0.0) {
            return Err(DeckError::InvalidThickness { part, thickness });
        }
    }

    let blocks = BTreeMap::from([
        ("CASE", case.to_string()),
        ("NODE", node_block(mesh)),
        ("SHELL", shell_block(mesh)),
        ("PART", part_block(mesh)),
        ("PROP", prop_block(mesh, cfg)),
        ("MAT", material_block(mat)),
        ("IMPACTOR", impactor_block(mesh, cfg)),
        ("CONTACT", contact_block(mesh, cfg)),
        ("BCS", bcs_block(mesh, cfg.problem)),
        ("TH", th_block(mesh)),
    ]);
    let starter = template.render(&blocks)?;
    Ok(DeckBundle::new(starter, engine_deck(cfg, case)))
}

fn node_block(mesh: &ShellMesh) -> String {
    let mut s = String::from("/NODE\n#   node_id                     x                     y                     z\n");
    for (i, p) in mesh.nodes.iter().enumerate() {
        let _ = writeln!(s, "{}{}{}{}", fmt_int(i + 1), fmt_float(p[0]), fmt_float(p[1]), fmt_float(p[2]));
    }
    s
}

fn elements_by_part(mesh: &ShellMesh) -> BTreeMap<u32, Vec<usize>> {
    let mut by_part: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (i, e) in mesh.elements.iter().enumerate() {
        by_part.entry(e.part).or_default().push(i);
    }
    by_part
}

fn shell_block(mesh: &ShellMesh) -> String {
    let mut s = String::new();
    for (part, ids) in elements_by_part(mesh) {
        let _ = writeln!(s, "/SHELL/{part}\n#  shell_id        n1        n2        n3        n4");
        for i in ids {
            let n = mesh.elements[i].nodes;
            let _ = writeln!(
                s,
                "{}{}{}{}{}",
                fmt_int(i + 1),
                fmt_int(n[0]),
                fmt_int(n[1]),
                fmt_int(n[2]),
                fmt_int(n[3])
            );
        }
    }
    s
}

fn part_block(mesh: &ShellMesh) -> String {
    let mut s = String::new();
    for &part in mesh.parts.keys() {
        let _ = writeln!(
            s,
            "/PART/{part}\npart_{part}\n#  prop_id    mat_id\n{}{}",
            fmt_int(part as usize),
            fmt_int(1)
        );
    }
    s
}

fn prop_block(mesh: &ShellMesh, cfg: &SimConfig) -> String {
    let mut s = String::new();
    for (&part, &t) in &mesh.parts {
        let _ = writeln!(
            s,
            "/PROP/SHELL/{part}\nprop_{part}\n#    Ishell  formulation: {}\n{}\n#              thickness\n{}",
            cfg.element_formulation,
            fmt_int(1),
            fmt_float(t)
        );
    }
    s
}

fn material_block(mat: &MaterialModel) -> String {
    const MPA_TO_GPA: f64 = 1e-3;
    const KG_M3_TO_KG_MM3: f64 = 1e-9;
    let mut s = String::new();
    let _ = writeln!(s, "/MAT/PLAS_TAB/1\n{}", mat.name);
    let _ = writeln!(s, "# rho = {} kg/m^3", mat.rho);
    let _ = writeln!(s, "#              rho_init\n{}", fmt_float(mat.rho * KG_M3_TO_KG_MM3));
    let _ = writeln!(s, "# E = {} GPa, nu = {}", mat.e, mat.nu);
    let _ = writeln!(s, "#                     E                    nu\n{}{}", fmt_float(mat.e), fmt_float(mat.nu));
    let _ = writeln!(s, "# sigma_y = {} MPa", mat.sigma_y);
    let _ = writeln!(s, "#               sigma_y\n{}", fmt_float(mat.sigma_y * MPA_TO_GPA));
    match mat.strain_rate {
        Some(cs) => {
            let _ = writeln!(s, "# Cowper-Symonds C = {} p = {}", cs.c, cs.p);
            let _ = writeln!(s, "#   Icc                     C                     p\n{}{}{}", fmt_int(1), fmt_float(cs.c), fmt_float(cs.p));
        }
        None => {
            let _ = writeln!(s, "# no strain-rate scaling\n#   Icc\n{}", fmt_int(0));
        }
    }
    let _ = writeln!(s, "#    fct_id\n{}", fmt_int(1));
    let _ = writeln!(s, "/FUNCT/1\n{} plasticity", mat.name);
    let _ = writeln!(s, "#                 eps_p                 sigma");
    for &(eps, sigma) in &mat.plasticity_curve {
        let _ = writeln!(s, "# eps_p = {eps} sigma = {sigma} MPa");
        let _ = writeln!(s, "{}{}", fmt_float(eps), fmt_float(sigma * MPA_TO_GPA));
    }
    s
}

fn bounding_box(mesh: &ShellMesh) -> ([f64; 3], [f64; 3]) {
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for p in &mesh.nodes {
        for k in 0..3 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    (lo, hi)
}

fn impactor_block(mesh: &ShellMesh, cfg: &SimConfig) -> String {
    let (lo, hi) = bounding_box(mesh);
    let v = cfg.impactor_velocity_ms();
    let mut s = String::new();
    let (keyword, m, m1) = match cfg.impactor_radius_mm {
        Some(r) => {
            // cylinder axis along y, centred over mid-span
            let m = [(lo[0] + hi[0]) / 2.0, (lo[1] + hi[1]) / 2.0, hi[2] + cfg.impact_gap_mm + r];
            ("CYL", m, [m[0], m[1] + 1.0, m[2]])
        }
        None => {
            let m = [(lo[0] + hi[0]) / 2.0, (lo[1] + hi[1]) / 2.0, hi[2] + cfg.impact_gap_mm];
            ("PLANE", m, [m[0], m[1], m[2] - 1.0])
        }
    };
    let _ = writeln!(s, "/RWALL/{keyword}/1\nimpactor");
    let _ = writeln!(s, "#   node_id     slide   grnod_s\n{}{}{}", fmt_int(0), fmt_int(0), fmt_int(0));
    let diameter = cfg.impactor_radius_mm.map_or(0.0, |r| 2.0 * r);
    if let Some(r) = cfg.impactor_radius_mm {
        let _ = writeln!(s, "# impactor radius = {r} mm");
    }
    let _ = writeln!(
        s,
        "#               dsearch                  fric              diameter\n{}{}{}",
        fmt_float(0.0),
        fmt_float(cfg.contact_settings.friction),
        fmt_float(diameter)
    );
    let _ = writeln!(s, "# impactor mass = {} kg, velocity = {} km/h", cfg.impactor_mass_kg, cfg.impactor_velocity_kmh);
    let _ = writeln!(
        s,
        "#                  mass                   VX0                   VY0                   VZ0\n{}{}{}{}",
        fmt_float(cfg.impactor_mass_kg),
        fmt_float(0.0),
        fmt_float(0.0),
        fmt_float(-v)
    );
    let _ = writeln!(s, "#                   X_M                   Y_M                   Z_M\n{}{}{}", fmt_float(m[0]), fmt_float(m[1]), fmt_float(m[2]));
    let _ = writeln!(s, "#                  X_M1                  Y_M1                  Z_M1\n{}{}{}", fmt_float(m1[0]), fmt_float(m1[1]), fmt_float(m1[2]));
    s
}

fn id_list(ids: impl IntoIterator<Item = usize>) -> String {
    let ids: Vec<usize> = ids.into_iter().collect();
    let mut s = String::new();
    for chunk in ids.chunks(10) {
        for &id in chunk {
            s.push_str(&fmt_int(id));
        }
        s.push('\n');
    }
    s
}

fn contact_block(mesh: &ShellMesh, cfg: &SimConfig) -> String {
    let c = cfg.contact_settings;
    let mut s = String::new();
    let _ = writeln!(s, "{}/1\nself_contact", cfg.contact);
    let _ = writeln!(s, "#  surf_s    surf_m      Istf\n{}{}{}", fmt_int(1), fmt_int(0), fmt_int(0));
    let _ = writeln!(
        s,
        "#                 stfac                  fric               gap_min\n{}{}{}",
        fmt_float(c.stiffness_scale),
        fmt_float(c.friction),
        fmt_float(c.gap_min)
    );
    let _ = write!(s, "/SURF/PART/1\nall_parts\n{}", id_list(mesh.parts.keys().map(|&p| p as usize)));
    s
}

/// Nodes held fixed: the base for the axial problems, both span ends for
/// the beam.
pub fn clamped_nodes(mesh: &ShellMesh, problem: ProblemId) -> Vec<usize> {
    let (lo, hi) = bounding_box(mesh);
    mesh.nodes
        .iter()
        .enumerate()
        .filter(|(_, p)| match problem {
            ProblemId::ThreePointBending => p[0] == lo[0] || p[0] == hi[0],
            _ => p[2] == lo[2],
        })
        .map(|(i, _)| i + 1)
        .collect()
}

fn bcs_block(mesh: &ShellMesh, problem: ProblemId) -> String {
    let nodes = clamped_nodes(mesh, problem);
    let mut s = String::new();
    let _ = write!(s, "/GRNOD/NODE/1\nclamped\n{}", id_list(nodes));
    let _ = writeln!(s, "/BCS/1\nclamped\n#  Tra rot      skew     grnod\n   111 111{}{}", fmt_int(0), fmt_int(1));
    s
}

fn th_block(mesh: &ShellMesh) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "/TH/RWALL/1\nimpactor_force\n#     var_1     var_2     var_3     var_4\n        FX        FY        FZ      FNZ\n{}", fmt_int(1));
    let _ = writeln!(s, "/TH/INTER/2\nself_contact\n#     var_1     var_2\n        FNX       FNY       FNZ\n{}", fmt_int(1));
    let _ = write!(s, "/TH/PART/3\nparts\n#     var_1     var_2\n        IE        KE\n{}", id_list(mesh.parts.keys().map(|&p| p as usize)));
    s
}

fn engine_deck(cfg: &SimConfig, case: &str) -> String {
    let mut s = String::from("#RADIOSS ENGINE\n");
    let _ = writeln!(s, "/RUN/{case}/1\n#                  tend\n{}", fmt_float(cfg.sim_time_ms));
    let _ = writeln!(s, "/TFILE/4\n#                 dt_th\n{}", fmt_float(cfg.output_interval_ms));
    let _ = writeln!(s, "/PRINT/-1000");
    if cfg.animation {
        let _ = writeln!(
            s,
            "/ANIM/DT\n#               t_start                 dt_an\n{}{}\n/ANIM/VECT/DISP\n/ANIM/ELEM/EPSP",
            fmt_float(0.0),
            fmt_float(cfg.animation_interval_ms)
        );
    }
    s.push_str("/END\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{mesh_for_design, ShellElement};

    fn starbox_mesh() -> ShellMesh {
        mesh_for_design(ProblemId::StarBox, 1, &[90.0]).unwrap()
    }

    fn deck(id: ProblemId, mesh: &ShellMesh) -> DeckBundle {
        build_deck(mesh, &material_for(id), &SimConfig::for_problem(id), id.name()).unwrap()
    }

    #[test]
    fn deterministic_and_checksummed() {
        let mesh = starbox_mesh();
        let a = deck(ProblemId::StarBox, &mesh);
        let b = deck(ProblemId::StarBox, &mesh);
        assert_eq!(a, b);
        assert_eq!(a.checksum.len(), 64);
        assert!(a.starter_text.contains("/INTER/TYPE24"));
        assert!(a.starter_text.contains("/RWALL/PLANE/1"));
    }

    #[test]
    fn one_property_block_per_part() {
        let mesh = mesh_for_design(ProblemId::ThreePointBending, 3, &[1.0, 2.0, 3.0]).unwrap();
        let d = deck(ProblemId::ThreePointBending, &mesh);
        for part in mesh.parts.keys() {
            let tag = format!("/PROP/SHELL/{part}\n");
            assert_eq!(d.starter_text.matches(&tag).count(), 1);
        }
        assert_eq!(d.starter_text.matches("/PROP/SHELL/").count(), mesh.parts.len());
        assert!(d.starter_text.contains("/RWALL/CYL/1"));
        assert!(d.starter_text.contains("# impactor radius = 36 mm"));
    }

    #[test]
    fn engine_end_time_and_animation() {
        let mesh = starbox_mesh();
        let mut cfg = SimConfig::for_problem(ProblemId::StarBox);
        let d = build_deck(&mesh, &material_for(ProblemId::StarBox), &cfg, "StarBox").unwrap();
        assert!(d.engine_text.contains(&fmt_float(45.0)));
        assert!(!d.engine_text.contains("/ANIM"));
        cfg.animation = true;
        let d2 = build_deck(&mesh, &material_for(ProblemId::StarBox), &cfg, "StarBox").unwrap();
        assert!(d2.engine_text.contains("/ANIM/DT"));
        assert_ne!(d.checksum, d2.checksum);
    }

    #[test]
    fn missing_part_is_rejected() {
        let mut mesh = starbox_mesh();
        mesh.elements.push(ShellElement {
            nodes: [1, 2, 3, 4],
            part: 99,
        });
        let err = build_deck(&mesh, &MaterialModel::steel(), &SimConfig::for_problem(ProblemId::StarBox), "x").unwrap_err();
        assert!(matches!(err, DeckError::InconsistentPartTable { part: 99, .. }));
    }

    #[test]
    fn clamped_sets() {
        let mesh = starbox_mesh();
        let base = clamped_nodes(&mesh, ProblemId::StarBox);
        assert_eq!(base.len(), 120);
        assert!(base.iter().all(|&id| mesh.node(id)[2] == 0.0));
        let beam = mesh_for_design(ProblemId::ThreePointBending, 1, &[1.0]).unwrap();
        let ends = clamped_nodes(&beam, ProblemId::ThreePointBending);
        assert!(ends.iter().all(|&id| {
            let x = beam.node(id)[0];
            x == 0.0 || x == 800.0
        }));
        assert!(ends.iter().any(|&id| beam.node(id)[0] == 0.0));
        assert!(ends.iter().any(|&id| beam.node(id)[0] == 800.0));
    }

    #[test]
    fn template_hook() {
        let mesh = starbox_mesh();
        let t = DeckTemplate::new("# custom\n{{NODE}}{{SHELL}}{{PART}}{{PROP}}/MAT/CUSTOM\n/END\n").unwrap();
        let d = build_deck_with_template(&mesh, &MaterialModel::steel(), &SimConfig::for_problem(ProblemId::StarBox), "c", &t)
            .unwrap();
        assert!(d.starter_text.starts_with("# custom\n/NODE\n"));
        assert!(d.starter_text.contains("/MAT/CUSTOM"));
        assert!(!d.starter_text.contains("/INTER/TYPE24"));
        assert!(matches!(DeckTemplate::new("{{NODE}}"), Err(DeckError::Template(_))));
        let bad = DeckTemplate {
            text: "{{NODE}}{{SHELL}}{{PART}}{{PROP}}{{NOPE}}".into(),
        };
        assert!(matches!(
            build_deck_with_template(&mesh, &MaterialModel::steel(), &SimConfig::for_problem(ProblemId::StarBox), "c", &bad),
            Err(DeckError::Template(_))
        ));
    }

    #[test]
    fn float_format() {
        assert_eq!(fmt_float(7.83e-6).trim(), "7.83000000000000e-6");
        assert_eq!(fmt_float(-0.0).trim(), "0.00000000000000e0");
        assert_eq!(fmt_float(-60.0).trim(), "-6.00000000000000e1");
    }
}
