use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

/// Source of the timestamps written into run logs.
pub trait Clock: Send + Sync {
    fn timestamp(&self) -> String;
}

/// Wall-clock time as Unix seconds with millisecond resolution.
#[derive(Debug, Clone, Copy, Default)]
pub struct SystemClock;

impl Clock for SystemClock {
    fn timestamp(&self) -> String {
        let d = SystemTime::now().duration_since(UNIX_EPOCH).unwrap_or_default();
        format!("{}.{:03}", d.as_secs(), d.subsec_millis())
    }
}

/// Always returns the same timestamp, for reproducible logs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedClock(pub String);

impl Clock for FixedClock {
    fn timestamp(&self) -> String {
        self.0.clone()
    }
}

/// One evaluation row.
#[derive(Debug, Clone, PartialEq)]
pub struct LogRow {
    pub evaluation: usize,
    /// `NaN` for failed evaluations.
    pub y: f64,
    pub best_y: f64,
    pub status: String,
    pub x: Vec<f64>,
}

/// Headered CSV written one flushed row at a time.
///
/// ```text
/// # key=value            metadata, one per line
/// evaluation,y,best_y,status,x1,...,xd
/// 1,<y>,<best>,ok,<x1>,...
/// # key=value            trailer written when the run ends
/// ```
pub struct LogWriter {
    out: BufWriter<File>,
}

impl LogWriter {
    pub fn create(path: &Path, metadata: &[(String, String)], dim: usize) -> io::Result<Self> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        let mut out = BufWriter::new(File::create(path)?);
        for (k, v) in metadata {
            writeln!(out, "# {k}={v}")?;
        }
        let xs: Vec<String> = (1..=dim).map(|i| format!("x{i}")).collect();
        writeln!(out, "evaluation,y,best_y,status,{}", xs.join(","))?;
        out.flush()?;
        Ok(LogWriter { out })
    }

    pub fn row(&mut self, row: &LogRow) -> io::Result<()> {
        let xs: Vec<String> = row.x.iter().map(f64::to_string).collect();
        writeln!(
            self.out,
            "{},{},{},{},{}",
            row.evaluation,
            row.y,
            row.best_y,
            row.status,
            xs.join(",")
        )?;
        self.out.flush()
    }

    pub fn trailer(&mut self, entries: &[(String, String)]) -> io::Result<()> {
        for (k, v) in entries {
            writeln!(self.out, "# {k}={v}")?;
        }
        self.out.flush()
    }
}

/// Parsed run log: leading metadata plus the evaluation rows.
#[derive(Debug, Clone, PartialEq)]
pub struct RunLog {
    pub metadata: BTreeMap<String, String>,
    pub trailer: BTreeMap<String, String>,
    pub rows: Vec<LogRow>,
}

impl RunLog {
    pub fn parse(text: &str) -> Result<RunLog, String> {
        let mut metadata = BTreeMap::new();
        let mut trailer = BTreeMap::new();
        let mut rows = Vec::new();
        let mut seen_header = false;
        for (i, line) in text.lines().enumerate() {
            if let Some(kv) = line.strip_prefix("# ") {
                let (k, v) = kv
                    .split_once('=')
                    .ok_or_else(|| format!("line {}: expected `# key=value`", i + 1))?;
                let target = if seen_header { &mut trailer } else { &mut metadata };
                target.insert(k.to_string(), v.to_string());
                continue;
            }
            if !seen_header {
                if !line.starts_with("evaluation,y,best_y,status") {
                    return Err(format!("line {}: missing column header", i + 1));
                }
                seen_header = true;
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() < 4 {
                return Err(format!("line {}: too few fields", i + 1));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|_| format!("line {}: bad number `{s}`", i + 1));
            rows.push(LogRow {
                evaluation: fields[0]
                    .parse()
                    .map_err(|_| format!("line {}: bad evaluation index", i + 1))?,
                y: num(fields[1])?,
                best_y: num(fields[2])?,
                status: fields[3].to_string(),
                x: fields[4..].iter().map(|s| num(s)).collect::<Result<_, _>>()?,
            });
        }
        if !seen_header {
            return Err("missing column header".into());
        }
        Ok(RunLog {
            metadata,
            trailer,
            rows,
        })
    }
}
