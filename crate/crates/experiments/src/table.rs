//! Result tables, their CSV form and companion gnuplot scripts.
//!
//! A CSV file starts with `# key: value` metadata lines, followed by a
//! header row and one row per record. Values are written with 17
//! significant digits so that parsing them back is exact.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::{Model, Value};
use crate::error::{ExperimentError, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// One physicality or consistency check performed while producing a table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub subject: String,
    pub quantity: String,
    /// Measured value; `None` when the check only yields pass/fail.
    pub value: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    pub fn new(subject: impl Into<String>, quantity: &str, value: Option<f64>, tolerance: f64, passed: bool) -> Self {
        Self {
            subject: subject.into(),
            quantity: quantity.to_string(),
            value,
            tolerance,
            passed,
        }
    }

    /// Passes when `|value - target| ≤ tolerance`.
    pub fn near(subject: impl Into<String>, quantity: &str, value: f64, target: f64, tolerance: f64) -> Self {
        Self::new(subject, quantity, Some(value), tolerance, (value - target).abs() <= tolerance)
    }

    /// Passes when `value ≤ tolerance`.
    pub fn below(subject: impl Into<String>, quantity: &str, value: f64, tolerance: f64) -> Self {
        Self::new(subject, quantity, Some(value), tolerance, value <= tolerance)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Metadata {
    pub scenario: String,
    pub model: Model,
    /// What the table reproduces, in words.
    pub target: String,
    pub version: String,
    /// RFC 3339, UTC. Taken from `SOURCE_DATE_EPOCH` when set.
    pub timestamp: String,
    pub parameters: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
}

impl Metadata {
    pub fn new(scenario: &str, model: Model, target: &str, parameters: BTreeMap<String, Value>, checks: Vec<Check>) -> Self {
        Self {
            scenario: scenario.to_string(),
            model,
            target: target.to_string(),
            version: VERSION.to_string(),
            timestamp: timestamp(),
            parameters,
            checks,
        }
    }
}

fn timestamp() -> String {
    let secs = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .unwrap_or_else(|| chrono::Utc::now().timestamp());
    chrono::DateTime::from_timestamp(secs, 0)
        .unwrap_or_default()
        .to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
    pub metadata: Metadata,
}

impl ResultTable {
    pub fn new(columns: Vec<String>, metadata: Metadata) -> Self {
        Self {
            columns,
            rows: Vec::new(),
            metadata,
        }
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width differs from the header");
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn all_checks_passed(&self) -> bool {
        self.metadata.checks.iter().all(|c| c.passed)
    }

    fn metadata_lines(&self) -> Vec<(&'static str, String)> {
        let m = &self.metadata;
        vec![
            ("scenario", m.scenario.clone()),
            ("model", m.model.to_string()),
            ("target", m.target.clone()),
            ("version", m.version.clone()),
            ("timestamp", m.timestamp.clone()),
            ("parameters", to_json(&m.parameters)),
            ("checks", to_json(&m.checks)),
        ]
    }

    /// CSV text without the timestamp line; identical inputs give identical
    /// bytes.
    pub fn deterministic_body(&self) -> String {
        self.render(false)
    }

    pub fn to_csv_string(&self) -> String {
        self.render(true)
    }

    fn render(&self, with_timestamp: bool) -> String {
        let mut out = String::new();
        for (key, value) in self.metadata_lines() {
            if with_timestamp || key != "timestamp" {
                let _ = writeln!(out, "# {key}: {value}");
            }
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.columns).expect("writing to memory");
        for row in &self.rows {
            w.write_record(row.iter().map(|x| format!("{x:.16e}"))).expect("writing to memory");
        }
        let body = w.into_inner().expect("writing to memory");
        out.push_str(std::str::from_utf8(&body).expect("CSV output is UTF-8"));
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| ExperimentError::io(dir, e))?;
        }
        std::fs::write(path, self.to_csv_string()).map_err(|e| ExperimentError::io(path, e))
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| ExperimentError::io(path, e))?;
        Self::from_csv_str(&text, path)
    }

    /// Parses the output of [`to_csv_string`](Self::to_csv_string); `origin`
    /// only labels errors.
    pub fn from_csv_str(text: &str, origin: &Path) -> Result<Self> {
        let bad = |message: String| ExperimentError::Format {
            path: origin.to_path_buf(),
            message,
        };
        let mut meta: BTreeMap<&str, &str> = BTreeMap::new();
        for line in text.lines().take_while(|l| l.starts_with('#')) {
            let (key, value) = line[1..]
                .trim_start()
                .split_once(": ")
                .ok_or_else(|| bad(format!("malformed metadata line `{line}`")))?;
            meta.insert(key, value);
        }
        let field = |key: &str| -> Result<&str> {
            meta.get(key).copied().ok_or_else(|| bad(format!("metadata `{key}` missing")))
        };
        let metadata = Metadata {
            scenario: field("scenario")?.to_string(),
            model: field("model")?.parse().map_err(|e: ExperimentError| bad(e.to_string()))?,
            target: field("target")?.to_string(),
            version: field("version")?.to_string(),
            timestamp: field("timestamp")?.to_string(),
            parameters: serde_json::from_str(field("parameters")?).map_err(|e| bad(format!("parameters: {e}")))?,
            checks: serde_json::from_str(field("checks")?).map_err(|e| bad(format!("checks: {e}")))?,
        };

        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .has_headers(true)
            .from_reader(text.as_bytes());
        let columns: Vec<String> = reader
            .headers()
            .map_err(|e| bad(e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        let mut table = Self::new(columns, metadata);
        for (i, record) in reader.records().enumerate() {
            let record = record.map_err(|e| bad(e.to_string()))?;
            let row: Vec<f64> = record
                .iter()
                .map(|s| s.parse::<f64>().map_err(|e| bad(format!("row {}: `{s}`: {e}", i + 1))))
                .collect::<Result<_>>()?;
            if row.len() != table.columns.len() {
                return Err(bad(format!("row {} has {} fields, header has {}", i + 1, row.len(), table.columns.len())));
            }
            table.rows.push(row);
        }
        Ok(table)
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("metadata serialises")
}

/// How to draw a table: `y` against `x`, one curve per distinct value of the
/// `group_by` columns (long tables) or per `y` column (wide tables).
#[derive(Debug, Clone, PartialEq)]
pub struct PlotHint {
    pub x: &'static str,
    /// `None` plots every column except `x` and `group_by`.
    pub y: Option<&'static [&'static str]>,
    pub group_by: &'static [&'static str],
    pub magnitude: bool,
    pub ylabel: &'static str,
}

fn literal(x: f64) -> String {
    format!("{x:.16e}")
}

/// Gnuplot script that reads `csv_name`, taken relative to the script's own
/// directory, and draws into `<stem>.png`.
pub fn plot_script(table: &ResultTable, hint: &PlotHint, csv_name: &str) -> Result<String> {
    let missing = |c: &str| ExperimentError::Config(format!("plot column `{c}` not in table"));
    let x = table.column_index(hint.x).ok_or_else(|| missing(hint.x))? + 1;
    let groups: Vec<usize> = hint
        .group_by
        .iter()
        .map(|g| table.column_index(g).map(|i| i + 1).ok_or_else(|| missing(g)))
        .collect::<Result<_>>()?;
    let ys: Vec<(usize, &str)> = match hint.y {
        Some(names) => names
            .iter()
            .map(|n| table.column_index(n).map(|i| (i + 1, *n)).ok_or_else(|| missing(n)))
            .collect::<Result<_>>()?,
        None => table
            .columns()
            .iter()
            .enumerate()
            .filter(|(i, _)| *i + 1 != x && !groups.contains(&(i + 1)))
            .map(|(i, n)| (i + 1, n.as_str()))
            .collect(),
    };

    let mut keys: Vec<Vec<f64>> = Vec::new();
    for row in table.rows() {
        let key: Vec<f64> = groups.iter().map(|&g| row[g - 1]).collect();
        if !keys.contains(&key) {
            keys.push(key);
        }
    }

    let stem = Path::new(csv_name).file_stem().map_or("plot".into(), |s| s.to_string_lossy().into_owned());
    let mut curves = Vec::new();
    for key in &keys {
        let cond: Vec<String> = groups.iter().zip(key).map(|(g, v)| format!("${g}=={}", literal(*v))).collect();
        let label: Vec<String> = hint.group_by.iter().zip(key).map(|(n, v)| format!("{n}={v}")).collect();
        for (y, name) in &ys {
            let value = if hint.magnitude { format!("abs(${y})") } else { format!("${y}") };
            let expr = if cond.is_empty() {
                value
            } else {
                format!("(({}) ? {value} : 1/0)", cond.join(" && "))
            };
            let title = if label.is_empty() {
                name.to_string()
            } else {
                format!("{name} {}", label.join(" "))
            };
            curves.push(format!("'{csv_name}' using {x}:{expr} with linespoints title '{title}'"));
        }
    }

    let ylabel = if hint.magnitude { format!("|{}|", hint.ylabel) } else { hint.ylabel.to_string() };
    let mut s = String::new();
    let _ = writeln!(s, "# {} ({})", table.metadata.scenario, table.metadata.target);
    s.push_str("set datafile separator ','\n");
    s.push_str("set datafile commentschars '#'\n");
    s.push_str("set key autotitle columnhead\n");
    let _ = writeln!(s, "set xlabel '{}'", hint.x);
    let _ = writeln!(s, "set ylabel '{ylabel}'");
    s.push_str("set terminal pngcairo size 900,600\n");
    let _ = writeln!(s, "set output '{stem}.png'");
    let _ = writeln!(s, "plot {}", curves.join(", \\\n     "));
    Ok(s)
}

/// Writes `table` to `csv_path` and, when `hint` is given, a script with
/// the same stem and extension `.gp` next to it.
pub fn emit(table: &ResultTable, csv_path: &Path, hint: Option<&PlotHint>) -> Result<Vec<PathBuf>> {
    table.write_csv(csv_path)?;
    let mut written = vec![csv_path.to_path_buf()];
    if let Some(hint) = hint {
        let csv_name = csv_path
            .file_name()
            .ok_or_else(|| ExperimentError::Config(format!("{} has no file name", csv_path.display())))?
            .to_string_lossy()
            .into_owned();
        let script_path = csv_path.with_extension("gp");
        let script = plot_script(table, hint, &csv_name)?;
        std::fs::write(&script_path, script).map_err(|e| ExperimentError::io(&script_path, e))?;
        written.push(script_path);
    }
    Ok(written)
}
