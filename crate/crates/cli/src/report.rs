//! Machine-readable run reports and scan curves.

use std::io::Write;

use serde::{Deserialize, Serialize};

use onecorr_core::estimator::GapReport;
use onecorr_core::lhv::Postulates;

use crate::config::ExperimentConfig;
use crate::error::{CliError, Result};

/// The result of one experiment run; one JSON document per run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: ExperimentConfig,
    pub e_qm: f64,
    pub e_model_mean: f64,
    pub e_model_stderr: f64,
    pub avg_a_mean: f64,
    pub avg_b_mean: f64,
    pub gap_eq8: f64,
    pub lambda_dependence_score: f64,
    pub postulates: Postulates,
    pub wall_time_seconds: f64,
}

impl RunReport {
    pub fn new(
        config: ExperimentConfig,
        gap: &GapReport,
        postulates: Postulates,
        wall_time_seconds: f64,
    ) -> Self {
        Self {
            config,
            e_qm: gap.e_qm,
            e_model_mean: gap.e_model.mean,
            e_model_stderr: gap.e_model.stderr,
            avg_a_mean: gap.avg_a_model.mean,
            avg_b_mean: gap.avg_b_model.mean,
            gap_eq8: gap.gap_eq8,
            lambda_dependence_score: gap.lambda_dependence_score,
            postulates,
            wall_time_seconds,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| CliError::config(format!("invalid report document: {e}")))
    }

    /// Rejects reports containing non-finite numbers before they are
    /// persisted anywhere.
    pub fn check_finite(&self) -> Result<()> {
        let fields = [
            ("e_qm", self.e_qm),
            ("e_model_mean", self.e_model_mean),
            ("e_model_stderr", self.e_model_stderr),
            ("avg_a_mean", self.avg_a_mean),
            ("avg_b_mean", self.avg_b_mean),
            ("gap_eq8", self.gap_eq8),
            ("lambda_dependence_score", self.lambda_dependence_score),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(CliError::Numeric(format!("{name} is {value}")));
            }
        }
        Ok(())
    }
}

/// One row of an angle scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub theta: f64,
    pub e_qm: f64,
    pub e_model: f64,
    pub stderr: f64,
    pub gap: f64,
}

pub const SCAN_CSV_HEADER: &str = "theta,e_qm,e_model,stderr,gap";

/// Writes the curve as CSV with the fixed one-line header.
pub fn write_scan_csv<W: Write>(rows: &[ScanRow], mut out: W) -> Result<()> {
    writeln!(out, "{SCAN_CSV_HEADER}")?;
    for row in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            row.theta, row.e_qm, row.e_model, row.stderr, row.gap
        )?;
    }
    Ok(())
}

/// Parses a curve written by [`write_scan_csv`].
pub fn read_scan_csv(text: &str) -> Result<Vec<ScanRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header == SCAN_CSV_HEADER => {}
        other => {
            return Err(CliError::config(format!(
                "bad scan header: expected `{SCAN_CSV_HEADER}`, got {other:?}"
            )))
        }
    }
    let mut rows = Vec::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<f64> = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| CliError::config(format!("bad scan row `{line}`: {e}")))?;
        if fields.len() != 5 {
            return Err(CliError::config(format!(
                "scan rows need 5 fields, got {} in `{line}`",
                fields.len()
            )));
        }
        rows.push(ScanRow {
            theta: fields[0],
            e_qm: fields[1],
            e_model: fields[2],
            stderr: fields[3],
            gap: fields[4],
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scan_csv_round_trip_is_exact() {
        let rows = vec![
            ScanRow {
                theta: std::f64::consts::FRAC_PI_8,
                e_qm: -0.923_879_532_511_286_7,
                e_model: -0.748_912_331,
                stderr: 1.2e-4,
                gap: 0.174_967_2,
            },
            ScanRow { theta: 0.0, e_qm: -1.0, e_model: -1.0, stderr: 0.0, gap: 0.0 },
        ];
        let mut buffer = Vec::new();
        write_scan_csv(&rows, &mut buffer).unwrap();
        let parsed = read_scan_csv(std::str::from_utf8(&buffer).unwrap()).unwrap();
        assert_eq!(rows, parsed);
    }

    #[test]
    fn csv_rejects_wrong_header() {
        assert!(read_scan_csv("angle,e\n0,1\n").is_err());
    }
}
