//! Tabular output of power-grid results.
//!
//! One row per simulated condition. The CSV flavor carries a trailing
//! comment line counting conditions that failed outright; the JSON flavor
//! mirrors the same fields structurally.

use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::power::{PowerEstimate, SimCondition};

pub const CSV_HEADER: &str =
    "config,proportions,delta,N,algorithm,reduction,n_iter,power,ci_lo,ci_hi,p_correct_k,mean_accuracy,chance";

/// A finished condition: identity plus estimates.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionResult {
    pub config: String,
    pub proportions: String,
    pub delta: f64,
    pub n: usize,
    pub algorithm: String,
    pub reduction: String,
    #[serde(flatten)]
    pub estimate: PowerEstimate,
}

impl ConditionResult {
    pub fn new(cond: &SimCondition, estimate: PowerEstimate) -> Self {
        ConditionResult {
            config: cond.config.clone(),
            proportions: cond.proportions.clone(),
            delta: cond.delta,
            n: cond.n,
            algorithm: cond.pipeline.algorithm.name().to_string(),
            reduction: cond.pipeline.reduction_name(),
            estimate,
        }
    }

    fn csv_line(&self) -> String {
        let e = &self.estimate;
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.config,
            self.proportions,
            trim_float(self.delta),
            self.n,
            self.algorithm,
            self.reduction,
            e.n_used,
            trim_float(e.power),
            trim_float(e.ci_lo),
            trim_float(e.ci_hi),
            trim_float(e.p_correct_k),
            trim_float(e.mean_accuracy),
            trim_float(e.mean_chance),
        )
    }
}

/// Formats with four decimals, then strips trailing zeros ("0.25", "3", "1").
fn trim_float(v: f64) -> String {
    if v.is_nan() {
        return "nan".to_string();
    }
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() || s == "-" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

pub fn write_csv(rows: &[ConditionResult], rows_failed: usize, out: &mut impl Write) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.csv_line())?;
    }
    writeln!(out, "# rows_failed: {rows_failed}")?;
    Ok(())
}

#[derive(Serialize)]
struct JsonReport<'a> {
    rows: &'a [ConditionResult],
    rows_failed: usize,
}

pub fn write_json(rows: &[ConditionResult], rows_failed: usize, out: &mut impl Write) -> Result<()> {
    let report = JsonReport { rows, rows_failed };
    serde_json::to_writer_pretty(&mut *out, &report)
        .map_err(|e| crate::error::Error::Io(std::io::Error::other(e)))?;
    writeln!(out)?;
    Ok(())
}
