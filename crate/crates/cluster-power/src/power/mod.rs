//! Monte-Carlo power estimation for clustering pipelines.
//!
//! One iteration: realize a population, draw a sample of size N, optionally
//! reduce it, fit the pipeline's algorithm (sweeping k where the algorithm
//! needs one), and score the solution. Power is the fraction of iterations
//! in which structure was detected; alongside it we track how often the true
//! cluster count was recovered and how well points were classified.
//!
//! Every iteration derives its randomness from
//! `iteration_seed(master_seed, condition_id, i)`, so results are
//! bit-for-bit reproducible and independent of thread scheduling.

pub mod presets;
pub mod report;

use rayon::prelude::*;

use crate::cluster::{
    agglomerative, cmeans, hdbscan, AgglomerativeConfig, CMeansConfig, HdbscanConfig, KMeansConfig,
};
use crate::datagen::covariance::CovarianceSpec;
use crate::datagen::{
    make_equidistant_population, make_grid_population, sample, CovConfig, Dataset, GridConfig,
    PopulationSpec,
};
use crate::error::{Error, Result};
use crate::reduce::{mds, MdsConfig};
use crate::seed::{derive_seed, iteration_seed, rng_from_seed};
use crate::validate::{
    adjusted_rand, chance_level, classification_accuracy, fuzzy_silhouette, silhouette,
};

/// z for a two-sided 95% interval.
const Z_95: f64 = 1.959963984540054;

/// Clustering algorithm run inside an iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    KMeans,
    CMeans,
    /// Agglomerative, Ward linkage on Euclidean distances.
    Ward,
    /// Agglomerative, average linkage on cosine distances.
    AverageCosine,
    Hdbscan,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::KMeans => "kmeans",
            Algorithm::CMeans => "cmeans",
            Algorithm::Ward => "ward",
            Algorithm::AverageCosine => "average_cosine",
            Algorithm::Hdbscan => "hdbscan",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "kmeans" => Algorithm::KMeans,
            "cmeans" => Algorithm::CMeans,
            "ward" => Algorithm::Ward,
            "average_cosine" => Algorithm::AverageCosine,
            "hdbscan" => Algorithm::Hdbscan,
            other => {
                return Err(Error::Config(format!(
                    "unknown algorithm '{other}' (expected kmeans, cmeans, ward, average_cosine or hdbscan)"
                )))
            }
        })
    }
}

/// A full analysis pipeline: optional reduction, one algorithm, and the
/// detection rule.
#[derive(Debug, Clone)]
pub struct PipelineSpec {
    pub algorithm: Algorithm,
    /// Reduce the sample with MDS before clustering.
    pub reduction: Option<MdsConfig>,
    /// Inclusive candidate range for the cluster-count sweep (ignored by the
    /// density algorithm, which chooses its own count).
    pub k_range: (usize, usize),
    /// A solution counts as "structure detected" when its (fuzzy) silhouette
    /// reaches this.
    pub detection_threshold: f64,
    /// Weighting exponent of the fuzzy silhouette.
    pub fuzzy_alpha: f64,
    pub hdbscan: HdbscanConfig,
}

impl PipelineSpec {
    pub fn new(algorithm: Algorithm) -> Self {
        PipelineSpec {
            algorithm,
            reduction: None,
            k_range: (2, 5),
            detection_threshold: 0.5,
            fuzzy_alpha: 1.0,
            hdbscan: HdbscanConfig::default(),
        }
    }

    pub fn reduction_name(&self) -> String {
        match &self.reduction {
            None => "none".to_string(),
            Some(config) => format!("mds{}", config.n_components),
        }
    }
}

/// How each iteration obtains its population. Grid and random-covariance
/// populations are re-realized per iteration, so covariance draws and
/// feature shuffles vary across the Monte-Carlo run.
#[derive(Debug, Clone)]
pub enum PopulationModel {
    Fixed(PopulationSpec),
    Grid {
        config: GridConfig,
        d: f64,
        n_diff: usize,
        cov: CovConfig,
        p: usize,
    },
    Equidistant {
        k: usize,
        delta: f64,
        proportions: Vec<f64>,
        p: usize,
        cov: CovarianceSpec,
    },
}

impl PopulationModel {
    /// Equidistant clusters with no correlation in 2 features: the layout
    /// used by the power grids.
    pub fn equidistant_plain(k: usize, delta: f64, proportions: Vec<f64>) -> Self {
        PopulationModel::Equidistant {
            k,
            delta,
            proportions,
            p: 2,
            cov: CovarianceSpec::Identity,
        }
    }

    pub fn k_true(&self) -> usize {
        match self {
            PopulationModel::Fixed(pop) => pop.k_true(),
            PopulationModel::Grid { config, .. } => config.k_true(),
            PopulationModel::Equidistant { k, .. } => *k,
        }
    }

    pub fn realize(&self, seed: u64) -> Result<PopulationSpec> {
        let mut rng = rng_from_seed(seed);
        match self {
            PopulationModel::Fixed(pop) => Ok(pop.clone()),
            PopulationModel::Grid {
                config,
                d,
                n_diff,
                cov,
                p,
            } => make_grid_population(*config, *d, *n_diff, *cov, *p, &mut rng),
            PopulationModel::Equidistant {
                k,
                delta,
                proportions,
                p,
                cov,
            } => make_equidistant_population(*k, *delta, proportions, *p, cov, &mut rng),
        }
    }
}

/// Realizes the population and draws the sample for one iteration. Only
/// `iter_seed` feeds the randomness, so two pipelines handed the same seed
/// see the same dataset.
pub fn realize_and_sample(model: &PopulationModel, n: usize, iter_seed: u64) -> Result<Dataset> {
    let pop = model.realize(derive_seed(iter_seed, "population"))?;
    let mut rng = rng_from_seed(derive_seed(iter_seed, "sample"));
    sample(&pop, n, &mut rng)
}

/// Outcome of the cluster-count sweep.
#[derive(Debug, Clone)]
pub struct ModelSelection {
    pub best_k: usize,
    pub score: f64,
    pub labels: Vec<i32>,
    /// Score per candidate k; `None` marks candidates that produced no
    /// scoreable solution.
    pub swept: Vec<(usize, Option<f64>)>,
}

/// Sweeps the candidate cluster counts and keeps the best-scoring solution:
/// silhouette for crisp algorithms, membership-weighted silhouette for the
/// fuzzy one. Ties go to the smallest k. `Ok(None)` means no candidate
/// produced a scoreable solution.
pub fn model_select(
    data: &[Vec<f64>],
    spec: &PipelineSpec,
    seed: u64,
) -> Result<Option<ModelSelection>> {
    let (k_lo, k_hi) = spec.k_range;
    if k_lo < 2 || k_hi < k_lo {
        return Err(Error::InvalidSpec(format!(
            "candidate range {k_lo}..={k_hi} must start at 2 and be nondecreasing"
        )));
    }
    if spec.algorithm == Algorithm::Hdbscan {
        return Err(Error::InvalidSpec(
            "the density algorithm selects its own cluster count".into(),
        ));
    }

    let mut swept = Vec::new();
    let mut best: Option<ModelSelection> = None;
    for k in k_lo..=k_hi {
        let fit = fit_at_k(data, spec, k, seed);
        let scored = match fit {
            Ok(Some((labels, score))) => Some((labels, score)),
            Ok(None) | Err(_) => None,
        };
        swept.push((k, scored.as_ref().map(|(_, s)| *s)));
        if let Some((labels, score)) = scored {
            // strict > keeps the smallest k on ties
            if best.as_ref().is_none_or(|b| score > b.score) {
                best = Some(ModelSelection {
                    best_k: k,
                    score,
                    labels,
                    swept: Vec::new(),
                });
            }
        }
    }
    Ok(best.map(|mut selection| {
        selection.swept = swept;
        selection
    }))
}

/// One fit at a fixed k; `Ok(None)` when the solution degenerated or cannot
/// be scored.
fn fit_at_k(
    data: &[Vec<f64>],
    spec: &PipelineSpec,
    k: usize,
    seed: u64,
) -> Result<Option<(Vec<i32>, f64)>> {
    if k > data.len() {
        return Ok(None);
    }
    let fit_seed = derive_seed(seed, &format!("fit/{}/{k}", spec.algorithm.name()));
    match spec.algorithm {
        Algorithm::KMeans => {
            let result = crate::cluster::kmeans(data, &KMeansConfig::new(k), fit_seed)?;
            if result.degenerate {
                return Ok(None);
            }
            score_crisp(data, result.labels)
        }
        Algorithm::Ward => {
            let result = agglomerative(data, &AgglomerativeConfig::ward(k))?;
            score_crisp(data, result.labels)
        }
        Algorithm::AverageCosine => {
            let result = agglomerative(data, &AgglomerativeConfig::average_cosine(k))?;
            score_crisp(data, result.labels)
        }
        Algorithm::CMeans => {
            let result = cmeans(data, &CMeansConfig::new(k), fit_seed)?;
            if result.degenerate {
                return Ok(None);
            }
            match fuzzy_silhouette(data, &result.memberships, spec.fuzzy_alpha) {
                Ok(score) => Ok(Some((result.labels, score))),
                Err(Error::UndefinedScore(_)) => Ok(None),
                Err(e) => Err(e),
            }
        }
        Algorithm::Hdbscan => unreachable!("handled before the sweep"),
    }
}

fn score_crisp(data: &[Vec<f64>], labels: Vec<i32>) -> Result<Option<(Vec<i32>, f64)>> {
    match silhouette(data, &labels) {
        Ok(score) => Ok(Some((labels, score))),
        Err(Error::UndefinedScore(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Everything recorded about a single Monte-Carlo iteration.
#[derive(Debug, Clone)]
pub struct IterationOutcome {
    /// Did the pipeline report structure?
    pub detected: bool,
    /// Cluster count of the chosen solution (None when nothing scoreable
    /// came out).
    pub best_k: Option<usize>,
    /// Score of the chosen solution.
    pub score: Option<f64>,
    /// Best-case classification accuracy of the chosen solution against the
    /// generating subgroups; falls back to the chance level when nothing was
    /// chosen.
    pub accuracy: f64,
    pub ari: f64,
    /// Accuracy of always guessing the largest subgroup.
    pub chance: f64,
}

/// Runs one full iteration of the pipeline on a fresh sample.
pub fn run_iteration(
    model: &PopulationModel,
    n: usize,
    spec: &PipelineSpec,
    iter_seed: u64,
) -> Result<IterationOutcome> {
    let dataset = realize_and_sample(model, n, iter_seed)?;
    let features = match &spec.reduction {
        None => dataset.data.clone(),
        Some(config) => mds(&dataset.data, config, derive_seed(iter_seed, "reduce"))?.coords,
    };
    let chance = chance_level(&dataset.truth)?;
    let truth_i32: Vec<i32> = dataset.truth.iter().map(|&t| t as i32).collect();

    if spec.algorithm == Algorithm::Hdbscan {
        let result = hdbscan(&features, &spec.hdbscan)?;
        // no sweep: the fit picks its own cluster count, but the decision
        // rule is the same silhouette threshold as everywhere else (scored
        // over the assigned points only — noise is excluded)
        let score = silhouette(&features, &result.labels).ok();
        return Ok(IterationOutcome {
            detected: score.is_some_and(|s| s >= spec.detection_threshold),
            best_k: (result.n_clusters > 0).then_some(result.n_clusters),
            score,
            accuracy: classification_accuracy(&dataset.truth, &result.labels)?,
            ari: adjusted_rand(&truth_i32, &result.labels)?,
            chance,
        });
    }

    match model_select(&features, spec, iter_seed)? {
        None => Ok(IterationOutcome {
            detected: false,
            best_k: None,
            score: None,
            accuracy: chance,
            ari: 0.0,
            chance,
        }),
        Some(selection) => Ok(IterationOutcome {
            detected: selection.score >= spec.detection_threshold,
            best_k: Some(selection.best_k),
            score: Some(selection.score),
            accuracy: classification_accuracy(&dataset.truth, &selection.labels)?,
            ari: adjusted_rand(&truth_i32, &selection.labels)?,
            chance,
        }),
    }
}

/// One cell of a power grid: a population model, a sample size, and a
/// pipeline, plus the labels that identify it in reports and seed streams.
#[derive(Debug, Clone)]
pub struct SimCondition {
    /// Population layout label (e.g. "two_50_50").
    pub config: String,
    /// Human-readable subgroup split (e.g. "50/50").
    pub proportions: String,
    /// Nominal separation of the population.
    pub delta: f64,
    pub n: usize,
    pub model: PopulationModel,
    pub pipeline: PipelineSpec,
    /// Seed-stream identity. Conditions sharing this string see identical
    /// datasets iteration for iteration.
    pub condition_id: String,
}

/// Aggregated Monte-Carlo estimates for one condition.
#[derive(Debug, Clone, serde::Serialize)]
pub struct PowerEstimate {
    /// Iterations that ran to completion.
    pub n_used: usize,
    /// Iterations that errored (excluded from every rate).
    pub n_failed: usize,
    /// Detection rate.
    pub power: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    /// Rate of recovering the generating cluster count.
    pub p_correct_k: f64,
    pub mean_accuracy: f64,
    pub mean_chance: f64,
}

/// Runs `iterations` Monte-Carlo iterations of a condition. Parallelized
/// over iterations; the estimate is identical whatever the thread count.
pub fn estimate_power(cond: &SimCondition, iterations: usize, master_seed: u64) -> PowerEstimate {
    let outcomes: Vec<Result<IterationOutcome>> = (0..iterations)
        .into_par_iter()
        .map(|i| {
            let iter_seed = iteration_seed(master_seed, &cond.condition_id, i);
            run_iteration(&cond.model, cond.n, &cond.pipeline, iter_seed)
        })
        .collect();
    aggregate(&outcomes, cond.model.k_true())
}

fn aggregate(outcomes: &[Result<IterationOutcome>], k_true: usize) -> PowerEstimate {
    let used: Vec<&IterationOutcome> = outcomes.iter().filter_map(|o| o.as_ref().ok()).collect();
    let n_failed = outcomes.len() - used.len();
    let n_used = used.len();
    if n_used == 0 {
        return PowerEstimate {
            n_used: 0,
            n_failed,
            power: f64::NAN,
            ci_lo: f64::NAN,
            ci_hi: f64::NAN,
            p_correct_k: f64::NAN,
            mean_accuracy: f64::NAN,
            mean_chance: f64::NAN,
        };
    }

    let detections = used.iter().filter(|o| o.detected).count();
    let correct_k = used.iter().filter(|o| o.best_k == Some(k_true)).count();
    let (ci_lo, ci_hi) = wilson_ci(detections, n_used);
    PowerEstimate {
        n_used,
        n_failed,
        power: detections as f64 / n_used as f64,
        ci_lo,
        ci_hi,
        p_correct_k: correct_k as f64 / n_used as f64,
        mean_accuracy: used.iter().map(|o| o.accuracy).sum::<f64>() / n_used as f64,
        mean_chance: used.iter().map(|o| o.chance).sum::<f64>() / n_used as f64,
    }
}

/// 95% Wilson score interval for a binomial proportion.
pub fn wilson_ci(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z_95 * Z_95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = (Z_95 / denom) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn strong_condition(algorithm: Algorithm, delta: f64, n: usize) -> SimCondition {
        let pipeline = PipelineSpec::new(algorithm);
        SimCondition {
            config: "two_50_50".into(),
            proportions: "50/50".into(),
            delta,
            n,
            model: PopulationModel::equidistant_plain(2, delta, vec![0.5, 0.5]),
            pipeline,
            condition_id: format!("test/{}/{delta}/{n}", algorithm.name()),
        }
    }

    #[test]
    fn model_select_recovers_the_true_cluster_count() {
        let model = PopulationModel::equidistant_plain(3, 8.0, vec![0.33, 0.34, 0.33]);
        let data = realize_and_sample(&model, 60, 41).unwrap();
        for algorithm in [Algorithm::KMeans, Algorithm::Ward, Algorithm::CMeans] {
            let spec = PipelineSpec::new(algorithm);
            let selection = model_select(&data.data, &spec, 7).unwrap().unwrap();
            assert_eq!(selection.best_k, 3, "{algorithm:?}");
            assert!(selection.score > 0.5);
            assert_eq!(selection.swept.len(), 4);
        }
    }

    #[test]
    fn sweep_scores_are_recorded_per_candidate() {
        let model = PopulationModel::equidistant_plain(2, 6.0, vec![0.5, 0.5]);
        let data = realize_and_sample(&model, 40, 43).unwrap();
        let spec = PipelineSpec::new(Algorithm::KMeans);
        let selection = model_select(&data.data, &spec, 3).unwrap().unwrap();
        let ks: Vec<usize> = selection.swept.iter().map(|(k, _)| *k).collect();
        assert_eq!(ks, vec![2, 3, 4, 5]);
        let best_score = selection.swept[0].1.unwrap();
        assert_abs_diff_eq!(best_score, selection.score, epsilon = 1e-12);
    }

    #[test]
    fn candidates_beyond_the_sample_size_are_skipped() {
        let model = PopulationModel::equidistant_plain(2, 6.0, vec![0.5, 0.5]);
        let data = realize_and_sample(&model, 4, 47).unwrap();
        let spec = PipelineSpec::new(Algorithm::KMeans);
        let selection = model_select(&data.data, &spec, 3).unwrap().unwrap();
        // k = 5 exceeds n = 4 and must be skipped, not an error
        assert_eq!(selection.swept.last().unwrap(), &(5, None));
    }

    #[test]
    fn strong_separation_is_always_detected() {
        let cond = strong_condition(Algorithm::KMeans, 8.0, 40);
        let estimate = estimate_power(&cond, 10, 12345);
        assert_eq!(estimate.n_failed, 0);
        assert_abs_diff_eq!(estimate.power, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(estimate.p_correct_k, 1.0, epsilon = 1e-12);
        assert!(estimate.mean_accuracy > 0.99);
        assert_abs_diff_eq!(estimate.mean_chance, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn overlapping_clusters_are_rarely_detected() {
        let cond = strong_condition(Algorithm::KMeans, 1.0, 40);
        let estimate = estimate_power(&cond, 10, 999);
        assert!(estimate.power < 0.5, "power={}", estimate.power);
    }

    #[test]
    fn estimates_are_deterministic_and_seed_sensitive() {
        let cond = strong_condition(Algorithm::KMeans, 3.0, 20);
        let a = estimate_power(&cond, 8, 7);
        let b = estimate_power(&cond, 8, 7);
        assert_eq!(a.power, b.power);
        assert_eq!(a.mean_accuracy, b.mean_accuracy);
        let c = estimate_power(&cond, 8, 8);
        // different master seed draws different samples
        assert!(a.mean_accuracy != c.mean_accuracy || a.power != c.power);
    }

    #[test]
    fn shared_condition_id_means_shared_datasets() {
        let model = PopulationModel::equidistant_plain(2, 4.0, vec![0.5, 0.5]);
        let seed = iteration_seed(99, "paired/demo", 3);
        let a = realize_and_sample(&model, 30, seed).unwrap();
        let b = realize_and_sample(&model, 30, seed).unwrap();
        assert_eq!(a.data, b.data);
        assert_eq!(a.truth, b.truth);
    }

    #[test]
    fn density_pipeline_reports_found_cluster_count() {
        let cond = SimCondition {
            pipeline: PipelineSpec::new(Algorithm::Hdbscan),
            ..strong_condition(Algorithm::Hdbscan, 10.0, 80)
        };
        let estimate = estimate_power(&cond, 6, 31);
        assert!(estimate.power > 0.9, "power={}", estimate.power);
        assert!(estimate.p_correct_k > 0.9);
    }

    #[test]
    fn wilson_interval_matches_hand_values() {
        let (lo, hi) = wilson_ci(50, 100);
        assert_abs_diff_eq!(lo, 0.40383, epsilon = 1e-4);
        assert_abs_diff_eq!(hi, 0.59617, epsilon = 1e-4);
        let (lo0, hi0) = wilson_ci(0, 100);
        assert_abs_diff_eq!(lo0, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(hi0, 0.03700, epsilon = 1e-4);
        let (lo1, hi1) = wilson_ci(100, 100);
        assert_abs_diff_eq!(lo1, 0.96300, epsilon = 1e-4);
        assert_abs_diff_eq!(hi1, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn failed_iterations_are_counted_not_fatal() {
        // n smaller than the subgroup count: every iteration fails
        let outcomes = vec![
            Err(Error::Sampling("bad".into())),
            Ok(IterationOutcome {
                detected: true,
                best_k: Some(2),
                score: Some(0.8),
                accuracy: 1.0,
                ari: 1.0,
                chance: 0.5,
            }),
        ];
        let estimate = aggregate(&outcomes, 2);
        assert_eq!(estimate.n_failed, 1);
        assert_eq!(estimate.n_used, 1);
        assert_abs_diff_eq!(estimate.power, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn algorithm_names_round_trip() {
        for algorithm in [
            Algorithm::KMeans,
            Algorithm::CMeans,
            Algorithm::Ward,
            Algorithm::AverageCosine,
            Algorithm::Hdbscan,
        ] {
            assert_eq!(Algorithm::parse(algorithm.name()).unwrap(), algorithm);
        }
        assert!(Algorithm::parse("dbscan").is_err());
    }
}
