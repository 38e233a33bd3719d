//! Machine-readable report output: versioned JSON and RFC-4180 CSV with a
//! frozen header. Byte-reproducible for a fixed seed and configuration.

use coleman::CheckReport;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;

pub const SCHEMA_VERSION: u32 = 1;

/// One serialized check row.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportRow {
    pub id: String,
    pub inputs: String,
    pub computed: Vec<f64>,
    pub reference: Vec<f64>,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tol: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

impl ReportRow {
    pub fn from_check(rep: &CheckReport, timings: bool) -> Self {
        Self {
            id: rep.id.clone(),
            inputs: rep.inputs.clone(),
            computed: rep.computed.clone(),
            reference: rep.reference.clone(),
            abs_err: rep.abs_err,
            rel_err: rep.rel_err,
            tol: rep.tol,
            pass: rep.pass,
            wall_ms: if timings { Some(rep.wall_ms) } else { None },
        }
    }
}

/// The whole report file.
#[derive(Debug, Serialize, Deserialize)]
pub struct ReportFile {
    pub schema: u32,
    pub command: String,
    pub seed: Option<u64>,
    pub tolerance: f64,
    pub pass: bool,
    pub rows: Vec<ReportRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format {other:?}, expected json or csv")),
        }
    }
}

pub const CSV_HEADER: [&str; 9] = [
    "schema", "id", "inputs", "computed", "reference", "abs_err", "rel_err", "tol", "pass",
];

/// Serializes the report; floats use shortest-roundtrip formatting so the
/// bytes depend only on the values.
pub fn render(report: &ReportFile, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut v = serde_json::to_vec_pretty(report).expect("report serialization");
            v.push(b'\n');
            v
        }
        Format::Csv => {
            let mut wtr = csv::WriterBuilder::new().from_writer(Vec::new());
            wtr.write_record(CSV_HEADER).expect("csv header");
            let join = |xs: &[f64]| {
                xs.iter()
                    .map(|x| format!("{x}"))
                    .collect::<Vec<_>>()
                    .join(";")
            };
            for row in &report.rows {
                wtr.write_record([
                    format!("{}", report.schema),
                    row.id.clone(),
                    row.inputs.clone(),
                    join(&row.computed),
                    join(&row.reference),
                    format!("{}", row.abs_err),
                    format!("{}", row.rel_err),
                    format!("{}", row.tol),
                    format!("{}", row.pass),
                ])
                .expect("csv row");
            }
            wtr.into_inner().expect("csv flush")
        }
    }
}

pub fn write_report(report: &ReportFile, format: Format, out: Option<&Path>) -> std::io::Result<()> {
    let bytes = render(report, format);
    match out {
        Some(path) => {
            if let Some(dir) = path.parent() {
                if !dir.as_os_str().is_empty() {
                    std::fs::create_dir_all(dir)?;
                }
            }
            std::fs::write(path, bytes)
        }
        None => std::io::stdout().write_all(&bytes),
    }
}
