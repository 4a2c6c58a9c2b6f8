//! Bundled simulation grids and their reference results.
//!
//! Each preset names a grid of conditions together with a CSV of previously
//! observed power values (100 Monte-Carlo iterations per cell). Rerunning a
//! preset and diffing against its reference is the crate's built-in
//! regression check: estimates drift with the seed, so the diff uses a
//! tolerance in percentage points rather than exact equality.

use super::report::ConditionResult;
use super::{Algorithm, PipelineSpec, PopulationModel, SimCondition};
use crate::error::{Error, Result};

/// Default tolerance when diffing a rerun against bundled references, in
/// percentage points. Binomial noise at 100 iterations makes ±12 a roomy
/// but not vacuous band.
pub const DEFAULT_TOLERANCE_PCT: f64 = 12.0;

/// A bundled study: a condition grid plus reference power values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// k-means power across four layouts, N in {10..160}, separation 1..10.
    Table1,
    /// Density-based power across the same grid.
    Table2,
    /// Fuzzy c-means power at eight spot-checked cells.
    CmeansText,
    /// Paired fuzzy-vs-crisp comparison on identical datasets: an
    /// unclustered control plus 2-4 equal subgroups, N=120, candidate
    /// counts 2..7.
    Figure11,
}

impl Preset {
    pub const ALL: [Preset; 4] = [
        Preset::Table1,
        Preset::Table2,
        Preset::CmeansText,
        Preset::Figure11,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Table1 => "table1",
            Preset::Table2 => "table2",
            Preset::CmeansText => "cmeans_text",
            Preset::Figure11 => "figure11",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "table1" => Preset::Table1,
            "table2" => Preset::Table2,
            "cmeans_text" => Preset::CmeansText,
            "figure11" => Preset::Figure11,
            other => {
                return Err(Error::Config(format!(
                    "unknown preset '{other}' (expected table1, table2, cmeans_text or figure11)"
                )))
            }
        })
    }

    pub fn description(self) -> &'static str {
        match self {
            Preset::Table1 => {
                "k-means power grid: 4 layouts x N in {10,20,40,80,160} x separation 1..10 (200 cells)"
            }
            Preset::Table2 => {
                "density-based power grid: 4 layouts x N in {10,20,40,80,160} x separation 1..10 (200 cells)"
            }
            Preset::CmeansText => "fuzzy c-means power at 8 selected cells",
            Preset::Figure11 => {
                "fuzzy vs crisp detection on shared datasets: unclustered control plus 2-4 equal subgroups at N=120"
            }
        }
    }

    /// Reference results shipped with the crate, as CSV.
    pub fn reference_csv(self) -> &'static str {
        match self {
            Preset::Table1 => include_str!("reference/table1.csv"),
            Preset::Table2 => include_str!("reference/table2.csv"),
            Preset::CmeansText => include_str!("reference/cmeans_text.csv"),
            Preset::Figure11 => include_str!("reference/figure11.csv"),
        }
    }

    pub fn reference(self) -> Vec<ReferenceCell> {
        // embedded CSVs are validated by tests; a parse failure here is a bug
        parse_reference(self.reference_csv()).expect("bundled reference CSV is well-formed")
    }

    /// The grid of conditions to (re)run for this preset.
    pub fn conditions(self) -> Result<Vec<SimCondition>> {
        match self {
            // one condition per reference cell keeps runs and references 1:1
            Preset::Table1 | Preset::Table2 | Preset::CmeansText => self
                .reference()
                .iter()
                .map(|cell| condition_for_cell(self.name(), cell))
                .collect(),
            Preset::Figure11 => Ok(figure11_conditions()),
        }
    }
}

/// One row of a bundled reference table.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceCell {
    pub config: String,
    pub proportions: String,
    pub delta: f64,
    pub n: usize,
    pub algorithm: String,
    /// Detection rate in percent (0..100).
    pub power_pct: f64,
}

/// Parses a reference CSV (`config,proportions,delta,N,algorithm,power_pct`).
pub fn parse_reference(csv: &str) -> Result<Vec<ReferenceCell>> {
    let mut lines = csv.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == "config,proportions,delta,N,algorithm,power_pct" => {}
        _ => {
            return Err(Error::Parse(
                "reference CSV must start with 'config,proportions,delta,N,algorithm,power_pct'"
                    .into(),
            ))
        }
    }
    let mut cells = Vec::new();
    for (idx, line) in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(Error::Parse(format!(
                "reference CSV line {}: expected 6 fields, got {}",
                idx + 1,
                fields.len()
            )));
        }
        let bad = |what: &str| Error::Parse(format!("reference CSV line {}: bad {what}", idx + 1));
        cells.push(ReferenceCell {
            config: fields[0].to_string(),
            proportions: fields[1].to_string(),
            delta: fields[2].parse().map_err(|_| bad("delta"))?,
            n: fields[3].parse().map_err(|_| bad("N"))?,
            algorithm: fields[4].to_string(),
            power_pct: fields[5].parse().map_err(|_| bad("power_pct"))?,
        });
    }
    Ok(cells)
}

/// Cluster count and subgroup proportions behind a layout label.
pub fn layout(config: &str) -> Result<(usize, Vec<f64>, &'static str)> {
    Ok(match config {
        "two_10_90" => (2, vec![0.1, 0.9], "10/90"),
        "two_50_50" => (2, vec![0.5, 0.5], "50/50"),
        "three_equal" => (3, vec![0.33, 0.34, 0.33], "33/34/33"),
        "four_equal" => (4, vec![0.25, 0.25, 0.25, 0.25], "25/25/25/25"),
        other => {
            return Err(Error::Config(format!(
                "unknown layout '{other}' (expected two_10_90, two_50_50, three_equal or four_equal)"
            )))
        }
    })
}

fn condition_for_cell(preset_name: &str, cell: &ReferenceCell) -> Result<SimCondition> {
    let (k, proportions, label) = layout(&cell.config)?;
    let algorithm = Algorithm::parse(&cell.algorithm)?;
    Ok(SimCondition {
        config: cell.config.clone(),
        proportions: label.to_string(),
        delta: cell.delta,
        n: cell.n,
        model: PopulationModel::equidistant_plain(k, cell.delta, proportions),
        pipeline: PipelineSpec::new(algorithm),
        condition_id: format!(
            "{preset_name}/{}/{}/d{}/n{}",
            cell.config, cell.algorithm, cell.delta, cell.n
        ),
    })
}

/// Crisp and fuzzy pipelines interleaved, sharing a condition id so both see
/// identical datasets iteration for iteration: one unclustered layout (the
/// false-positive control) plus 2-4 equal subgroups swept over separations,
/// all at N=120 with candidate counts 2..7.
fn figure11_conditions() -> Vec<SimCondition> {
    let mut conditions = Vec::new();
    let mut push_pair = |config: &str, proportions: &str, k: usize, splits: Vec<f64>, delta: f64| {
        for algorithm in [Algorithm::KMeans, Algorithm::CMeans] {
            let mut pipeline = PipelineSpec::new(algorithm);
            pipeline.k_range = (2, 7);
            conditions.push(SimCondition {
                config: config.into(),
                proportions: proportions.into(),
                delta,
                n: 120,
                model: PopulationModel::equidistant_plain(k, delta, splits.clone()),
                pipeline,
                // no algorithm in the id: the pair shares its datasets
                condition_id: format!("figure11/{config}/d{delta}/n120"),
            });
        }
    };
    push_pair("one", "100", 1, vec![1.0], 0.0);
    for config in ["two_50_50", "three_equal", "four_equal"] {
        let (k, splits, proportions) = layout(config).expect("fixed layout labels");
        for delta in 1..=10 {
            push_pair(config, proportions, k, splits.clone(), delta as f64);
        }
    }
    conditions
}

/// A reference cell lined up with the matching rerun estimate.
#[derive(Debug, Clone)]
pub struct ComparisonRow {
    pub config: String,
    pub delta: f64,
    pub n: usize,
    pub algorithm: String,
    pub reference_pct: f64,
    /// `None` when the rerun produced no row for this cell.
    pub estimated_pct: Option<f64>,
}

impl ComparisonRow {
    /// Estimated minus reference, in percentage points.
    pub fn diff(&self) -> Option<f64> {
        self.estimated_pct.map(|e| e - self.reference_pct)
    }
}

/// Outcome of diffing a rerun against a reference table.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub rows: Vec<ComparisonRow>,
    pub tolerance_pct: f64,
}

impl Comparison {
    pub fn n_compared(&self) -> usize {
        self.rows.iter().filter(|r| r.estimated_pct.is_some()).count()
    }

    pub fn n_within(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.diff().is_some_and(|d| d.abs() <= self.tolerance_pct))
            .count()
    }

    pub fn n_missing(&self) -> usize {
        self.rows.len() - self.n_compared()
    }

    /// Rows outside the tolerance (missing rows excluded).
    pub fn outliers(&self) -> Vec<&ComparisonRow> {
        self.rows
            .iter()
            .filter(|r| r.diff().is_some_and(|d| d.abs() > self.tolerance_pct))
            .collect()
    }

    pub fn max_abs_diff(&self) -> Option<f64> {
        self.rows
            .iter()
            .filter_map(|r| r.diff())
            .map(f64::abs)
            .fold(None, |acc, d| Some(acc.map_or(d, |m: f64| m.max(d))))
    }

    pub fn all_within(&self) -> bool {
        self.n_missing() == 0 && self.n_within() == self.rows.len()
    }

    pub fn summary(&self) -> String {
        if self.rows.is_empty() {
            return "no reference cells".to_string();
        }
        let mut line = format!(
            "{}/{} reference cells within +/-{} points",
            self.n_within(),
            self.rows.len(),
            self.tolerance_pct
        );
        if let Some(max) = self.max_abs_diff() {
            line.push_str(&format!("; largest gap {max:.1} points"));
        }
        if self.n_missing() > 0 {
            line.push_str(&format!("; {} cells not rerun", self.n_missing()));
        }
        line
    }
}

/// Lines rerun results up against reference cells by
/// (config, algorithm, N, separation).
pub fn compare(
    results: &[ConditionResult],
    reference: &[ReferenceCell],
    tolerance_pct: f64,
) -> Comparison {
    let key = |config: &str, algorithm: &str, n: usize, delta: f64| {
        (
            config.to_string(),
            algorithm.to_string(),
            n,
            (delta * 1e6).round() as i64,
        )
    };
    let estimates: std::collections::HashMap<_, f64> = results
        .iter()
        .map(|r| {
            (
                key(&r.config, &r.algorithm, r.n, r.delta),
                r.estimate.power * 100.0,
            )
        })
        .collect();
    let rows = reference
        .iter()
        .map(|cell| ComparisonRow {
            config: cell.config.clone(),
            delta: cell.delta,
            n: cell.n,
            algorithm: cell.algorithm.clone(),
            reference_pct: cell.power_pct,
            estimated_pct: estimates
                .get(&key(&cell.config, &cell.algorithm, cell.n, cell.delta))
                .copied(),
        })
        .collect();
    Comparison {
        rows,
        tolerance_pct,
    }
}
