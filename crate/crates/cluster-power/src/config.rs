//! TOML run configuration.
//!
//! A config describes one study: a population family, one analysis
//! pipeline, the Monte-Carlo settings, and where results go. `power` runs
//! every combination of the `[simulation]` sample sizes and separations;
//! the single-dataset commands use the first entry of each list.
//!
//! ```toml
//! [population]
//! kind = "equidistant"
//! layout = "two_50_50"
//! delta = 4.0
//!
//! [pipeline]
//! algorithm = "kmeans"
//!
//! [simulation]
//! ns = [20, 40]
//! deltas = [1.0, 2.0, 3.0, 4.0]
//! iterations = 100
//! seed = 42
//!
//! [output]
//! format = "csv"
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::cluster::HdbscanConfig;
use crate::datagen::covariance::CovarianceSpec;
use crate::datagen::{CovConfig, GridConfig, GRID_FEATURES};
use crate::error::{Error, Result};
use crate::power::{Algorithm, PipelineSpec, PopulationModel, SimCondition};
use crate::reduce::MdsConfig;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub population: PopulationConfig,
    pub pipeline: PipelineConfig,
    #[serde(default)]
    pub simulation: SimulationConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: RunConfig =
            toml::from_str(text).map_err(|e| Error::Config(format!("bad config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    fn validate(&self) -> Result<()> {
        self.population.resolve(self.population.delta)?;
        self.pipeline.to_pipeline_spec()?;
        self.simulation.validate()?;
        self.output.validate()?;
        if self.population.kind == "grid" && self.simulation.deltas.is_some() {
            return Err(Error::Config(
                "grid populations are separated via population.d; simulation.deltas does not apply"
                    .into(),
            ));
        }
        Ok(())
    }

    /// Sample size used by the single-dataset commands.
    pub fn primary_n(&self) -> usize {
        self.simulation.ns[0]
    }

    /// Separation used by the single-dataset commands.
    pub fn primary_delta(&self) -> f64 {
        self.simulation
            .deltas
            .as_ref()
            .map_or(self.population.delta, |d| d[0])
    }

    /// The full grid of conditions: every (n, delta) combination.
    pub fn conditions(&self) -> Result<Vec<SimCondition>> {
        let pipeline = self.pipeline.to_pipeline_spec()?;
        let deltas = self
            .simulation
            .deltas
            .clone()
            .unwrap_or_else(|| vec![self.population.delta]);
        let mut conditions = Vec::new();
        for &delta in &deltas {
            for &n in &self.simulation.ns {
                let resolved = self.population.resolve(delta)?;
                // grid populations are parameterized by d, so report their
                // nominal center separation instead of the sweep value
                let nominal = match &resolved.model {
                    PopulationModel::Grid { d, n_diff, .. } => d * (*n_diff as f64).sqrt(),
                    _ => delta,
                };
                conditions.push(SimCondition {
                    condition_id: format!(
                        "config/{}/{}/d{nominal}/n{n}",
                        resolved.label,
                        pipeline.algorithm.name()
                    ),
                    config: resolved.label,
                    proportions: resolved.proportions_label,
                    delta: nominal,
                    n,
                    model: resolved.model,
                    pipeline: pipeline.clone(),
                });
            }
        }
        Ok(conditions)
    }
}

/// `[population]`: the data-generating family.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PopulationConfig {
    /// "equidistant" (default) or "grid".
    #[serde(default = "default_kind")]
    pub kind: String,
    /// Named layout: two_10_90, two_50_50, three_equal or four_equal
    /// (grid populations support the first three).
    pub layout: Option<String>,
    /// Explicit subgroup proportions; alternative to `layout` for
    /// equidistant populations.
    pub proportions: Option<Vec<f64>>,
    /// Distance between every pair of subgroup centers (equidistant).
    #[serde(default = "default_delta")]
    pub delta: f64,
    /// Per-feature standardized difference (grid).
    pub d: Option<f64>,
    /// How many features separate the subgroups (grid); defaults to all.
    pub n_diff: Option<usize>,
    /// none | random | factor | factor3 | factor4 | mixed_factor |
    /// mixed_random. Equidistant populations accept the first three;
    /// grid populations all but plain "factor".
    #[serde(default = "default_covariance")]
    pub covariance: String,
    /// Factor count when `covariance = "factor"`.
    pub factors: Option<usize>,
    /// Feature count; defaults to 2 (equidistant) or 15 (grid).
    pub features: Option<usize>,
}

fn default_kind() -> String {
    "equidistant".into()
}

fn default_delta() -> f64 {
    4.0
}

fn default_covariance() -> String {
    "none".into()
}

/// A population config turned into something runnable.
pub struct ResolvedPopulation {
    pub model: PopulationModel,
    pub label: String,
    pub proportions_label: String,
}

impl PopulationConfig {
    pub fn resolve(&self, delta: f64) -> Result<ResolvedPopulation> {
        match self.kind.as_str() {
            "equidistant" => self.resolve_equidistant(delta),
            "grid" => self.resolve_grid(),
            other => Err(Error::Config(format!(
                "population kind must be 'equidistant' or 'grid', got '{other}'"
            ))),
        }
    }

    fn resolve_equidistant(&self, delta: f64) -> Result<ResolvedPopulation> {
        for field in [
            ("d", self.d.is_some()),
            ("n_diff", self.n_diff.is_some()),
        ] {
            if field.1 {
                return Err(Error::Config(format!(
                    "population field '{}' only applies to kind = \"grid\"",
                    field.0
                )));
            }
        }
        let (proportions, label, proportions_label) = match (&self.layout, &self.proportions) {
            (Some(_), Some(_)) => {
                return Err(Error::Config(
                    "give either a population layout or explicit proportions, not both".into(),
                ))
            }
            (Some(layout), None) => {
                let (_, proportions, plabel) = crate::power::presets::layout(layout)?;
                (proportions, layout.clone(), plabel.to_string())
            }
            (None, Some(proportions)) => {
                let label = format!("custom_{}", proportions.len());
                let plabel = proportions
                    .iter()
                    .map(|p| format!("{:.0}", p * 100.0))
                    .collect::<Vec<_>>()
                    .join("/");
                (proportions.clone(), label, plabel)
            }
            (None, None) => {
                return Err(Error::Config(
                    "population needs a 'layout' or explicit 'proportions'".into(),
                ))
            }
        };
        let k = proportions.len();
        let p = self.features.unwrap_or(2);
        let cov = match self.covariance.as_str() {
            "none" | "identity" => CovarianceSpec::Identity,
            "random" => CovarianceSpec::random_uniform(),
            "factor" => CovarianceSpec::factor(self.factors.unwrap_or(3)),
            other => {
                return Err(Error::Config(format!(
                    "equidistant covariance must be none, random or factor, got '{other}'"
                )))
            }
        };
        Ok(ResolvedPopulation {
            model: PopulationModel::Equidistant {
                k,
                delta,
                proportions,
                p,
                cov,
            },
            label,
            proportions_label,
        })
    }

    fn resolve_grid(&self) -> Result<ResolvedPopulation> {
        if self.proportions.is_some() {
            return Err(Error::Config(
                "grid populations use a named layout, not explicit proportions".into(),
            ));
        }
        if self.factors.is_some() {
            return Err(Error::Config(
                "grid covariances carry their own factor counts; 'factors' does not apply".into(),
            ));
        }
        let layout = self.layout.as_deref().ok_or_else(|| {
            Error::Config("grid population needs a 'layout'".into())
        })?;
        let (config, proportions_label) = match layout {
            "two_10_90" => (GridConfig::TwoUnequal, "10/90"),
            "two_50_50" => (GridConfig::TwoEqual, "50/50"),
            "three_equal" => (GridConfig::ThreeEqual, "33/34/33"),
            other => {
                return Err(Error::Config(format!(
                    "grid layout must be two_10_90, two_50_50 or three_equal, got '{other}'"
                )))
            }
        };
        let cov = match self.covariance.as_str() {
            "none" | "identity" => CovConfig::None,
            "random" => CovConfig::Random,
            "factor3" => CovConfig::Factor3,
            "factor4" => CovConfig::Factor4,
            "mixed_factor" => CovConfig::MixedFactor,
            "mixed_random" => CovConfig::MixedRandom,
            other => {
                return Err(Error::Config(format!(
                    "grid covariance must be none, random, factor3, factor4, mixed_factor \
                     or mixed_random, got '{other}'"
                )))
            }
        };
        let p = self.features.unwrap_or(GRID_FEATURES);
        let d = self.d.unwrap_or(0.5);
        let n_diff = self.n_diff.unwrap_or(p);
        Ok(ResolvedPopulation {
            model: PopulationModel::Grid {
                config,
                d,
                n_diff,
                cov,
                p,
            },
            label: layout.to_string(),
            proportions_label: proportions_label.to_string(),
        })
    }
}

/// `[pipeline]`: reduction, algorithm and detection settings.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    /// kmeans | cmeans | ward | average_cosine | hdbscan.
    pub algorithm: String,
    /// "none" (default) or "mds".
    #[serde(default)]
    pub reduction: Option<String>,
    #[serde(default = "default_components")]
    pub mds_components: usize,
    #[serde(default = "default_k_min")]
    pub k_min: usize,
    #[serde(default = "default_k_max")]
    pub k_max: usize,
    #[serde(default = "default_threshold")]
    pub detection_threshold: f64,
    #[serde(default = "default_alpha")]
    pub fuzzy_alpha: f64,
    #[serde(default = "default_min_cluster_size")]
    pub min_cluster_size: usize,
    #[serde(default = "default_min_samples")]
    pub min_samples: usize,
}

fn default_components() -> usize {
    2
}

fn default_k_min() -> usize {
    2
}

fn default_k_max() -> usize {
    5
}

fn default_threshold() -> f64 {
    0.5
}

fn default_alpha() -> f64 {
    1.0
}

fn default_min_cluster_size() -> usize {
    5
}

fn default_min_samples() -> usize {
    5
}

impl PipelineConfig {
    pub fn to_pipeline_spec(&self) -> Result<PipelineSpec> {
        let mut spec = PipelineSpec::new(Algorithm::parse(&self.algorithm)?);
        spec.reduction = match self.reduction.as_deref() {
            None | Some("none") => None,
            Some("mds") => Some(MdsConfig {
                n_components: self.mds_components,
                ..MdsConfig::default()
            }),
            Some(other) => {
                return Err(Error::Config(format!(
                    "reduction must be 'none' or 'mds', got '{other}'"
                )))
            }
        };
        if self.k_min < 2 || self.k_max < self.k_min {
            return Err(Error::Config(format!(
                "candidate cluster counts {}..={} must start at 2 and be nondecreasing",
                self.k_min, self.k_max
            )));
        }
        spec.k_range = (self.k_min, self.k_max);
        if !(0.0..=1.0).contains(&self.detection_threshold) {
            return Err(Error::Config(
                "detection_threshold must lie in [0, 1]".into(),
            ));
        }
        spec.detection_threshold = self.detection_threshold;
        if self.fuzzy_alpha <= 0.0 {
            return Err(Error::Config("fuzzy_alpha must be positive".into()));
        }
        spec.fuzzy_alpha = self.fuzzy_alpha;
        spec.hdbscan = HdbscanConfig {
            min_cluster_size: self.min_cluster_size,
            min_samples: self.min_samples,
        };
        Ok(spec)
    }
}

/// `[simulation]`: Monte-Carlo grid and seeding.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    /// Sample sizes to run.
    #[serde(default = "default_ns")]
    pub ns: Vec<usize>,
    /// Separations to run; defaults to the population's `delta`.
    pub deltas: Option<Vec<f64>>,
    #[serde(default = "default_iterations")]
    pub iterations: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn default_ns() -> Vec<usize> {
    vec![100]
}

fn default_iterations() -> usize {
    100
}

fn default_seed() -> u64 {
    42
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            ns: default_ns(),
            deltas: None,
            iterations: default_iterations(),
            seed: default_seed(),
        }
    }
}

impl SimulationConfig {
    fn validate(&self) -> Result<()> {
        if self.ns.is_empty() {
            return Err(Error::Config("simulation.ns must not be empty".into()));
        }
        if self.deltas.as_ref().is_some_and(Vec::is_empty) {
            return Err(Error::Config("simulation.deltas must not be empty".into()));
        }
        if self.iterations == 0 {
            return Err(Error::Config("simulation.iterations must be positive".into()));
        }
        Ok(())
    }
}

/// `[output]`: destination and format.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// File to write; stdout when missing.
    pub path: Option<PathBuf>,
    /// "csv" (default) or "json".
    pub format: Option<String>,
}

impl OutputConfig {
    fn validate(&self) -> Result<()> {
        match self.format.as_deref() {
            None | Some("csv") | Some("json") => Ok(()),
            Some(other) => Err(Error::Config(format!(
                "output format must be 'csv' or 'json', got '{other}'"
            ))),
        }
    }
}
