use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::scenario::{Scenario, SweepVariable};
use crate::error::{Error, Result};

/// Aggregates for one (scheme, sweep value) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub scheme: String,
    pub sweep_variable: SweepVariable,
    pub sweep_value: f64,
    pub mean_rate_bpshz: f64,
    pub mean_eff_rate_bpshz: f64,
    pub mean_pilots: f64,
    pub accuracy_vs_oracle: Option<f64>,
    /// 95% confidence half-width of the mean achievable rate.
    pub ci95: f64,
    pub n_trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    /// The scenario that produced the rows.
    pub scenario: Scenario,
    pub rows: Vec<ReportRow>,
}

impl ExperimentReport {
    pub fn row(&self, scheme: &str, sweep_value: f64) -> Option<&ReportRow> {
        self.rows
            .iter()
            .find(|r| r.scheme == scheme && r.sweep_value == sweep_value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::Config(format!(
                "unknown output format `{other}` (expected csv or json)"
            ))),
        }
    }
}

pub const CSV_HEADER: &str =
    "scheme,sweep_variable,sweep_value,mean_rate_bpshz,mean_eff_rate_bpshz,mean_pilots,accuracy_vs_oracle,ci95";

pub fn to_csv(report: &ExperimentReport) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in &report.rows {
        let acc = r.accuracy_vs_oracle.map(|a| a.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.scheme,
            r.sweep_variable,
            r.sweep_value,
            r.mean_rate_bpshz,
            r.mean_eff_rate_bpshz,
            r.mean_pilots,
            acc,
            r.ci95
        );
    }
    out
}

pub fn to_json(report: &ExperimentReport) -> Result<String> {
    serde_json::to_string_pretty(report).map_err(|e| Error::Serialize(e.to_string()))
}

pub fn from_json(text: &str) -> Result<ExperimentReport> {
    serde_json::from_str(text).map_err(|e| Error::Serialize(e.to_string()))
}

pub fn render(report: &ExperimentReport, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Csv => Ok(to_csv(report)),
        OutputFormat::Json => to_json(report),
    }
}

/// Writes the report to `path` in the requested format.
pub fn emit(report: &ExperimentReport, format: OutputFormat, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = render(report, format)?;
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
