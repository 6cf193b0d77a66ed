use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use super::{OracleConfig, Row, Scenario, TimeSeries};
use crate::error::Result;

pub const CSV_COLUMNS: [&str; 8] = [
    "t",
    "n1",
    "n2",
    "var_q",
    "var_p",
    "suppression",
    "spectrum_q",
    "spectrum_p",
];

/// Appended after [`CSV_COLUMNS`] when the oracle is enabled.
pub const ORACLE_COLUMNS: [&str; 9] = [
    "oracle_n1",
    "oracle_n2",
    "oracle_var_q",
    "oracle_var_p",
    "oracle_dev_n1",
    "oracle_dev_n2",
    "oracle_dev_var_q",
    "oracle_dev_var_p",
    "oracle_delta",
];

/// Absolute engine/oracle deviation per compared column.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct ColumnDeviations {
    pub n1: f64,
    pub n2: f64,
    pub var_q: f64,
    pub var_p: f64,
}

impl ColumnDeviations {
    fn of(row: &Row) -> Option<Self> {
        row.oracle.as_ref().map(|o| Self {
            n1: (row.n1 - o.n1).abs(),
            n2: (row.n2 - o.n2).abs(),
            var_q: (row.var_q - o.var_q).abs(),
            var_p: (row.var_p - o.var_p).abs(),
        })
    }

    fn max_with(self, o: Self) -> Self {
        Self {
            n1: self.n1.max(o.n1),
            n2: self.n2.max(o.n2),
            var_q: self.var_q.max(o.var_q),
            var_p: self.var_p.max(o.var_p),
        }
    }

    pub fn max(&self) -> f64 {
        self.n1.max(self.n2).max(self.var_q).max(self.var_p)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeviationReport {
    pub max_deviation: ColumnDeviations,
    pub max_convergence_delta: f64,
    pub tolerance: f64,
    pub convergence_tol: f64,
    pub converged: bool,
    pub within_tolerance: bool,
}

impl DeviationReport {
    pub fn from_series(series: &TimeSeries, cfg: &OracleConfig) -> Self {
        let max_deviation = series
            .rows
            .iter()
            .filter_map(ColumnDeviations::of)
            .fold(ColumnDeviations::default(), ColumnDeviations::max_with);
        let max_convergence_delta = series
            .rows
            .iter()
            .filter_map(|r| r.oracle.as_ref().map(|o| o.delta))
            .fold(0.0, f64::max);
        Self {
            max_deviation,
            max_convergence_delta,
            tolerance: cfg.tolerance,
            convergence_tol: cfg.convergence_tol,
            converged: max_convergence_delta <= cfg.convergence_tol,
            within_tolerance: max_deviation.max() <= cfg.tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        self.converged && self.within_tolerance
    }
}

impl TimeSeries {
    pub fn has_oracle(&self) -> bool {
        self.rows.iter().any(|r| r.oracle.is_some())
    }

    /// CSV with full round-trip float precision.
    pub fn to_csv(&self) -> String {
        let mut out = CSV_COLUMNS.join(",");
        if self.has_oracle() {
            out.push(',');
            out.push_str(&ORACLE_COLUMNS.join(","));
        }
        out.push('\n');
        for row in &self.rows {
            let mut fields = vec![
                row.t,
                row.n1,
                row.n2,
                row.var_q,
                row.var_p,
                row.suppression,
                row.spectrum_q,
                row.spectrum_p,
            ];
            if let (Some(o), Some(d)) = (&row.oracle, ColumnDeviations::of(row)) {
                fields.extend([
                    o.n1, o.n2, o.var_q, o.var_p, d.n1, d.n2, d.var_q, d.var_p, o.delta,
                ]);
            }
            let line: Vec<String> = fields.iter().map(|v| format!("{v:?}")).collect();
            let _ = writeln!(out, "{}", line.join(","));
        }
        out
    }

    /// JSON summary: the scenario, final row, and oracle comparison if any.
    pub fn summary(&self, command: &str, scenario: &Scenario, report: Option<&DeviationReport>) -> Value {
        let last = self.rows.last();
        let final_row = last.map(|r| {
            json!({
                "t": r.t,
                "n1": r.n1,
                "n2": r.n2,
                "var_q": r.var_q,
                "var_p": r.var_p,
                "suppression": r.suppression,
                "spectrum_q": r.spectrum_q,
                "spectrum_p": r.spectrum_p,
            })
        });
        let computed;
        let report = match report {
            Some(r) => Some(r),
            None if self.has_oracle() => {
                computed = DeviationReport::from_series(self, &scenario.oracle);
                Some(&computed)
            }
            None => None,
        };
        json!({
            "command": command,
            "scenario": scenario,
            "epsilon": self.epsilon,
            "rows": self.rows.len(),
            "final": final_row,
            "oracle": report.map(|r| json!({
                "dim": scenario.oracle.dim,
                "refined_dim": scenario.oracle.dim + crate::fock::CONVERGENCE_STEP,
                "report": r,
                "passed": r.passed(),
            })),
        })
    }
}

/// `<dir>/<stem>.summary.json` next to the CSV at `csv`.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    let stem = csv
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "output".into());
    csv.with_file_name(format!("{stem}.summary.json"))
}

/// Writes the CSV and its JSON sidecar; returns the sidecar path.
pub fn write_outputs(csv: &Path, series: &TimeSeries, summary: &Value) -> Result<PathBuf> {
    if let Some(dir) = csv.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(csv, series.to_csv())?;
    let side = sidecar_path(csv);
    write_json(&side, summary)?;
    Ok(side)
}

pub fn write_json(path: &Path, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("summary values are finite");
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}
