//! Time-history parsing and extraction of the scalar crash responses.
//!
//! The CSV schema has one header row and five required channels:
//!
//! | column              | unit |
//! |---------------------|------|
//! | `time_ms`           | ms   |
//! | `contact_force_kN`  | kN   |
//! | `impactor_disp_mm`  | mm   |
//! | `internal_energy_J` | J    |
//! | `kinetic_energy_J`  | J    |
//!
//! Extra columns are ignored. Exports with other column names are mapped
//! onto the schema with a [`ColumnMapping`].

use std::io::{self, Write};

use thiserror::Error;

use crate::mesh::MassReport;
use crate::objectives::ForceWindow;

pub const TIME_COLUMN: &str = "time_ms";
pub const FORCE_COLUMN: &str = "contact_force_kN";
pub const DISP_COLUMN: &str = "impactor_disp_mm";
pub const INTERNAL_ENERGY_COLUMN: &str = "internal_energy_J";
pub const KINETIC_ENERGY_COLUMN: &str = "kinetic_energy_J";

const CHANNELS: [&str; 5] = [
    TIME_COLUMN,
    FORCE_COLUMN,
    DISP_COLUMN,
    INTERNAL_ENERGY_COLUMN,
    KINETIC_ENERGY_COLUMN,
];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("required column `{0}` not found in header")]
    MissingColumn(String),
    #[error("line {line}: time {time} ms does not increase")]
    NonMonotoneTime { line: u64, time: f64 },
    #[error("line {line}: time {time} ms is negative")]
    NegativeTime { line: u64, time: f64 },
    #[error("line {line}: column `{column}` holds malformed number `{value}`")]
    MalformedNumber { line: u64, column: String, value: String },
    #[error("line {line}: {message}")]
    Csv { line: u64, message: String },
    #[error("time history has {0} samples, at least 2 are required")]
    TooFewSamples(usize),
    #[error("invalid column mapping: {0}")]
    Mapping(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExtractError {
    #[error("no contact detected: force series is identically zero")]
    DegenerateSeries,
    #[error("structural mass must be positive, got {0} kg")]
    NonPositiveMass(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub time_ms: f64,
    pub contact_force_kn: f64,
    pub impactor_disp_mm: f64,
    pub internal_energy_j: f64,
    pub kinetic_energy_j: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TimeHistory {
    pub samples: Vec<Sample>,
}

impl TimeHistory {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn abs_forces(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.contact_force_kn.abs()).collect()
    }

    /// Writes the schema header and one row per sample; floats use the
    /// shortest representation that parses back to the same value.
    pub fn write_csv<W: Write>(&self, w: W) -> io::Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(CHANNELS).map_err(io::Error::other)?;
        for s in &self.samples {
            wtr.write_record([
                s.time_ms.to_string(),
                s.contact_force_kn.to_string(),
                s.impactor_disp_mm.to_string(),
                s.internal_energy_j.to_string(),
                s.kinetic_energy_j.to_string(),
            ])
            .map_err(io::Error::other)?;
        }
        wtr.flush()
    }

    pub fn to_csv_bytes(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        buf
    }
}

/// Source column and scale factor for one schema channel.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    pub column: String,
    pub scale: f64,
}

/// Maps the five schema channels onto columns of an arbitrary export.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnMapping {
    pub time: Channel,
    pub force: Channel,
    pub disp: Channel,
    pub internal_energy: Channel,
    pub kinetic_energy: Channel,
}

impl Default for ColumnMapping {
    fn default() -> Self {
        let ch = |c: &str| Channel {
            column: c.to_string(),
            scale: 1.0,
        };
        ColumnMapping {
            time: ch(TIME_COLUMN),
            force: ch(FORCE_COLUMN),
            disp: ch(DISP_COLUMN),
            internal_energy: ch(INTERNAL_ENERGY_COLUMN),
            kinetic_energy: ch(KINETIC_ENERGY_COLUMN),
        }
    }
}

impl ColumnMapping {
    /// Parses `channel = column [* scale]` lines; `#` starts a comment and
    /// unlisted channels keep their schema name.
    ///
    /// ```
    /// use crashbench::post::ColumnMapping;
    /// let m = ColumnMapping::parse("time_ms = TIME * 1000\ncontact_force_kN = RWALL_FZ").unwrap();
    /// assert_eq!(m.time.column, "TIME");
    /// assert_eq!(m.time.scale, 1000.0);
    /// ```
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut m = ColumnMapping::default();
        for raw in text.lines() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ParseError::Mapping(format!("expected `channel = column`, got `{line}`")))?;
            let (column, scale) = match value.split_once('*') {
                Some((c, s)) => {
                    let scale = s
                        .trim()
                        .parse()
                        .map_err(|_| ParseError::Mapping(format!("bad scale `{}`", s.trim())))?;
                    (c.trim(), scale)
                }
                None => (value.trim(), 1.0),
            };
            let channel = Channel {
                column: column.to_string(),
                scale,
            };
            match key.trim() {
                TIME_COLUMN => m.time = channel,
                FORCE_COLUMN => m.force = channel,
                DISP_COLUMN => m.disp = channel,
                INTERNAL_ENERGY_COLUMN => m.internal_energy = channel,
                KINETIC_ENERGY_COLUMN => m.kinetic_energy = channel,
                other => return Err(ParseError::Mapping(format!("unknown channel `{other}`"))),
            }
        }
        Ok(m)
    }

    fn channels(&self) -> [&Channel; 5] {
        [
            &self.time,
            &self.force,
            &self.disp,
            &self.internal_energy,
            &self.kinetic_energy,
        ]
    }
}

pub fn parse_time_history(bytes: &[u8]) -> Result<TimeHistory, ParseError> {
    parse_time_history_with(bytes, &ColumnMapping::default())
}

pub fn parse_time_history_with(bytes: &[u8], mapping: &ColumnMapping) -> Result<TimeHistory, ParseError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(bytes);
    let csv_err = |e: csv::Error| ParseError::Csv {
        line: e.position().map_or(0, |p| p.line()),
        message: e.to_string(),
    };
    let header = rdr.headers().map_err(csv_err)?.clone();
    let mut index = [0usize; 5];
    for (slot, ch) in index.iter_mut().zip(mapping.channels()) {
        *slot = header
            .iter()
            .position(|h| h == ch.column)
            .ok_or_else(|| ParseError::MissingColumn(ch.column.clone()))?;
    }

    let mut samples: Vec<Sample> = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(csv_err)?;
        let line = record.position().map_or(0, |p| p.line());
        let mut v = [0.0; 5];
        for (k, ch) in mapping.channels().into_iter().enumerate() {
            let raw = record.get(index[k]).unwrap_or("");
            let parsed: f64 = raw.parse().map_err(|_| ParseError::MalformedNumber {
                line,
                column: ch.column.clone(),
                value: raw.to_string(),
            })?;
            if !parsed.is_finite() {
                return Err(ParseError::MalformedNumber {
                    line,
                    column: ch.column.clone(),
                    value: raw.to_string(),
                });
            }
            v[k] = if ch.scale == 1.0 { parsed } else { parsed * ch.scale };
        }
        let time = v[0];
        if samples.is_empty() && time < 0.0 {
            return Err(ParseError::NegativeTime { line, time });
        }
        if let Some(prev) = samples.last() {
            if !(time > prev.time_ms) {
                return Err(ParseError::NonMonotoneTime { line, time });
            }
        }
        samples.push(Sample {
            time_ms: time,
            contact_force_kn: v[1],
            impactor_disp_mm: v[2],
            internal_energy_j: v[3],
            kinetic_energy_j: v[4],
        });
    }
    if samples.len() < 2 {
        return Err(ParseError::TooFewSamples(samples.len()));
    }
    Ok(TimeHistory { samples })
}

/// Scalar responses of one simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationRecord {
    pub th: TimeHistory,
    /// Maximum impactor travel after first contact, mm.
    pub delta_mm: f64,
    pub f_peak_kn: f64,
    pub f_mean_kn: f64,
    /// Internal energy at the last sample, J.
    pub e_abs_j: f64,
    pub m_s_kg: f64,
    pub intrusion_limit_mm: Option<f64>,
}

impl SimulationRecord {
    pub fn is_feasible(&self) -> bool {
        self.intrusion_limit_mm.is_none_or(|limit| self.delta_mm <= limit)
    }

    pub fn load_uniformity(&self) -> f64 {
        self.f_peak_kn / self.f_mean_kn
    }
}

pub fn extract_scalars(
    th: TimeHistory,
    mass: &MassReport,
    constraint_limit_mm: Option<f64>,
) -> Result<SimulationRecord, ExtractError> {
    extract_scalars_with(th, mass, constraint_limit_mm, ForceWindow::default())
}

pub fn extract_scalars_with(
    th: TimeHistory,
    mass: &MassReport,
    constraint_limit_mm: Option<f64>,
    window: ForceWindow,
) -> Result<SimulationRecord, ExtractError> {
    if !(mass.total_kg > 0.0) {
        return Err(ExtractError::NonPositiveMass(mass.total_kg));
    }
    let forces = th.abs_forces();
    let onset = window.onset(&forces).ok_or(ExtractError::DegenerateSeries)?;
    let (f_peak_kn, f_mean_kn) = window.peak_and_mean(&forces).ok_or(ExtractError::DegenerateSeries)?;
    let d0 = th.samples[onset].impactor_disp_mm;
    let delta_mm = th.samples[onset..]
        .iter()
        .map(|s| s.impactor_disp_mm - d0)
        .fold(0.0_f64, f64::max);
    let e_abs_j = th.samples.last().map_or(0.0, |s| s.internal_energy_j);
    Ok(SimulationRecord {
        th,
        delta_mm,
        f_peak_kn,
        f_mean_kn,
        e_abs_j,
        m_s_kg: mass.total_kg,
        intrusion_limit_mm: constraint_limit_mm,
    })
}
