//! Synthetic population specification and sampling.
//!
//! A population is a mixture of multivariate-normal subgroups in standardized
//! space: each feature has SD 1, so distances between subgroup means are
//! directly interpretable as effect sizes. Two families of populations are
//! provided:
//!
//! * grid populations — two or three clusters separated along a chosen number
//!   of differing features, each shifted by a per-feature effect size `d`;
//! * equidistant populations — one to four clusters placed so every pair of
//!   centroids sits exactly `delta` apart (segment, equilateral triangle,
//!   square).
//!
//! Sampling apportions a total N across subgroups by largest remainder (every
//! subgroup keeps at least one observation), draws from each subgroup's
//! Gaussian, and shuffles the rows. Everything is deterministic given the RNG.

pub mod covariance;

use nalgebra::{Cholesky, DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::numeric::euclidean;
use covariance::{build_covariance, CovarianceSpec};

/// Default feature count for grid populations.
pub const GRID_FEATURES: usize = 15;

/// One Gaussian subgroup of a mixture population.
#[derive(Debug, Clone)]
pub struct SubgroupSpec {
    /// Share of the population in this subgroup, in (0, 1].
    pub proportion: f64,
    pub mean: Vec<f64>,
    pub covariance: DMatrix<f64>,
}

/// A mixture of Gaussian subgroups over a common feature space.
#[derive(Debug, Clone)]
pub struct PopulationSpec {
    pub n_features: usize,
    pub subgroups: Vec<SubgroupSpec>,
}

impl PopulationSpec {
    pub fn k_true(&self) -> usize {
        self.subgroups.len()
    }

    pub fn proportions(&self) -> Vec<f64> {
        self.subgroups.iter().map(|s| s.proportion).collect()
    }

    /// Smallest distance between any pair of subgroup means (0 when there is
    /// only one subgroup).
    pub fn min_separation(&self) -> f64 {
        let k = self.subgroups.len();
        let mut min = f64::INFINITY;
        for i in 0..k {
            for j in (i + 1)..k {
                let d = euclidean(&self.subgroups[i].mean, &self.subgroups[j].mean);
                min = min.min(d);
            }
        }
        if min.is_finite() {
            min
        } else {
            0.0
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.subgroups.is_empty() {
            return Err(Error::InvalidSpec("population needs at least one subgroup".into()));
        }
        if self.n_features == 0 {
            return Err(Error::InvalidSpec("population needs at least one feature".into()));
        }
        let mut total = 0.0;
        for (idx, sub) in self.subgroups.iter().enumerate() {
            if !(sub.proportion > 0.0 && sub.proportion <= 1.0) {
                return Err(Error::InvalidSpec(format!(
                    "subgroup {idx}: proportion {} outside (0, 1]",
                    sub.proportion
                )));
            }
            if sub.mean.len() != self.n_features {
                return Err(Error::InvalidSpec(format!(
                    "subgroup {idx}: mean has {} entries, expected {}",
                    sub.mean.len(),
                    self.n_features
                )));
            }
            if sub.covariance.nrows() != self.n_features || sub.covariance.ncols() != self.n_features
            {
                return Err(Error::InvalidSpec(format!(
                    "subgroup {idx}: covariance is {}x{}, expected {2}x{2}",
                    sub.covariance.nrows(),
                    sub.covariance.ncols(),
                    self.n_features
                )));
            }
            total += sub.proportion;
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidSpec(format!(
                "subgroup proportions sum to {total}, expected 1"
            )));
        }
        Ok(())
    }
}

/// A sampled dataset: `data[i]` is one observation, `truth[i]` the index of
/// the subgroup it was drawn from.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub data: Vec<Vec<f64>>,
    pub truth: Vec<usize>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.data.first().map_or(0, Vec::len)
    }
}

/// Cluster layout of a grid population.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridConfig {
    /// Two clusters holding 10% and 90% of the population.
    TwoUnequal,
    /// Two clusters of 50% each.
    TwoEqual,
    /// Three clusters of 33% / 34% / 33%.
    ThreeEqual,
}

impl GridConfig {
    pub fn proportions(self) -> Vec<f64> {
        match self {
            GridConfig::TwoUnequal => vec![0.10, 0.90],
            GridConfig::TwoEqual => vec![0.50, 0.50],
            GridConfig::ThreeEqual => vec![0.33, 0.34, 0.33],
        }
    }

    pub fn k_true(self) -> usize {
        match self {
            GridConfig::TwoUnequal | GridConfig::TwoEqual => 2,
            GridConfig::ThreeEqual => 3,
        }
    }
}

/// Covariance assignment of a grid population.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CovConfig {
    /// All subgroups uncorrelated.
    None,
    /// One random-uniform correlation draw shared by all subgroups.
    Random,
    /// One 3-factor draw shared by all subgroups.
    Factor3,
    /// One 4-factor draw shared by all subgroups.
    Factor4,
    /// 3-factor and 4-factor draws for the first two subgroups; a third
    /// subgroup, when present, stays uncorrelated.
    MixedFactor,
    /// Independent random-uniform draws for the first two subgroups; a third
    /// subgroup, when present, stays uncorrelated.
    MixedRandom,
}

/// Builds a grid population: the first `n_diff` of `p` features separate the
/// clusters, each contributing a per-feature effect size `d`.
///
/// For two clusters the differing features sit at ±d/2 around zero; for three
/// clusters the middle cluster sits at zero and the outer two at ±d. Which
/// cluster takes the positive side is randomized independently per feature.
pub fn make_grid_population(
    config: GridConfig,
    d: f64,
    n_diff: usize,
    cov: CovConfig,
    p: usize,
    rng: &mut impl Rng,
) -> Result<PopulationSpec> {
    if !(d >= 0.0) {
        return Err(Error::InvalidSpec(format!("effect size d={d} must be nonnegative")));
    }
    if n_diff == 0 || n_diff > p {
        return Err(Error::InvalidSpec(format!(
            "n_diff={n_diff} must be in 1..={p}"
        )));
    }

    let k = config.k_true();
    let mut means = vec![vec![0.0; p]; k];
    for feature in 0..n_diff {
        let flip = rng.random::<bool>();
        match k {
            2 => {
                let (a, b) = if flip { (0.5, -0.5) } else { (-0.5, 0.5) };
                means[0][feature] = a * d;
                means[1][feature] = b * d;
            }
            3 => {
                let (a, b) = if flip { (1.0, -1.0) } else { (-1.0, 1.0) };
                means[0][feature] = a * d;
                // middle cluster stays at zero
                means[2][feature] = b * d;
            }
            _ => unreachable!(),
        }
    }

    let covariances = grid_covariances(cov, k, p, rng)?;
    let proportions = config.proportions();
    let subgroups = means
        .into_iter()
        .zip(covariances)
        .zip(proportions)
        .map(|((mean, covariance), proportion)| SubgroupSpec {
            proportion,
            mean,
            covariance,
        })
        .collect();

    let pop = PopulationSpec {
        n_features: p,
        subgroups,
    };
    pop.validate()?;
    Ok(pop)
}

fn grid_covariances(
    cov: CovConfig,
    k: usize,
    p: usize,
    rng: &mut impl Rng,
) -> Result<Vec<DMatrix<f64>>> {
    let identity = DMatrix::identity(p, p);
    Ok(match cov {
        CovConfig::None => vec![identity; k],
        CovConfig::Random => {
            let shared = build_covariance(&CovarianceSpec::random_uniform(), p, rng)?;
            vec![shared; k]
        }
        CovConfig::Factor3 => {
            let shared = build_covariance(&CovarianceSpec::factor(3), p, rng)?;
            vec![shared; k]
        }
        CovConfig::Factor4 => {
            let shared = build_covariance(&CovarianceSpec::factor(4), p, rng)?;
            vec![shared; k]
        }
        CovConfig::MixedFactor => {
            let mut out = vec![
                build_covariance(&CovarianceSpec::factor(3), p, rng)?,
                build_covariance(&CovarianceSpec::factor(4), p, rng)?,
            ];
            if k > 2 {
                out.push(identity);
            }
            out.truncate(k);
            out
        }
        CovConfig::MixedRandom => {
            let mut out = vec![
                build_covariance(&CovarianceSpec::random_uniform(), p, rng)?,
                build_covariance(&CovarianceSpec::random_uniform(), p, rng)?,
            ];
            if k > 2 {
                out.push(identity);
            }
            out.truncate(k);
            out
        }
    })
}

/// Builds a population of `k` (1..=4) clusters whose centroids are pairwise
/// `delta` apart, centered at the origin, all sharing one covariance
/// realization drawn from `cov`.
///
/// Geometry lives in the leading coordinates: a point, a segment, an
/// equilateral triangle, or a square (the square being the planar k=4 layout
/// where only nearest-neighbor pairs sit at `delta`).
pub fn make_equidistant_population(
    k: usize,
    delta: f64,
    proportions: &[f64],
    p: usize,
    cov: &CovarianceSpec,
    rng: &mut impl Rng,
) -> Result<PopulationSpec> {
    if !(1..=4).contains(&k) {
        return Err(Error::InvalidSpec(format!("k={k} must be in 1..=4")));
    }
    if proportions.len() != k {
        return Err(Error::InvalidSpec(format!(
            "{} proportions given for k={k}",
            proportions.len()
        )));
    }
    if !(delta >= 0.0) {
        return Err(Error::InvalidSpec(format!(
            "separation delta={delta} must be nonnegative"
        )));
    }
    if p == 0 || (k >= 3 && p < 2) {
        return Err(Error::InvalidSpec(format!(
            "k={k} clusters need at least {} features, got {p}",
            if k >= 3 { 2 } else { 1 }
        )));
    }

    let mut means = vec![vec![0.0; p]; k];
    match k {
        1 => {}
        2 => {
            means[0][0] = -delta / 2.0;
            means[1][0] = delta / 2.0;
        }
        3 => {
            // equilateral triangle with side delta, centered at the origin
            let r = delta / 3.0_f64.sqrt();
            for (idx, mean) in means.iter_mut().enumerate() {
                let angle = std::f64::consts::FRAC_PI_2 + idx as f64 * 2.0 * std::f64::consts::FRAC_PI_3;
                mean[0] = r * angle.cos();
                mean[1] = r * angle.sin();
            }
        }
        4 => {
            // square with side delta, centered at the origin
            let h = delta / 2.0;
            let corners = [(-h, -h), (h, -h), (h, h), (-h, h)];
            for (mean, (x, y)) in means.iter_mut().zip(corners) {
                mean[0] = x;
                mean[1] = y;
            }
        }
        _ => unreachable!(),
    }

    let shared = build_covariance(cov, p, rng)?;
    let subgroups = means
        .into_iter()
        .zip(proportions)
        .map(|(mean, &proportion)| SubgroupSpec {
            proportion,
            mean,
            covariance: shared.clone(),
        })
        .collect();

    let pop = PopulationSpec {
        n_features: p,
        subgroups,
    };
    pop.validate()?;
    Ok(pop)
}

/// Splits `n` observations across subgroups by largest remainder, guaranteeing
/// every subgroup at least one observation. Ties in the fractional remainders
/// favor the earlier subgroup.
pub fn apportion(proportions: &[f64], n: usize) -> Vec<usize> {
    assert!(!proportions.is_empty());
    assert!(n >= proportions.len(), "cannot seat {} subgroups in n={n}", proportions.len());

    let quotas: Vec<f64> = proportions.iter().map(|p| p * n as f64).collect();
    let mut sizes: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let assigned: usize = sizes.iter().sum();

    let mut order: Vec<usize> = (0..proportions.len()).collect();
    // stable sort by descending remainder keeps ties in index order
    order.sort_by(|&a, &b| {
        let ra = quotas[a] - quotas[a].floor();
        let rb = quotas[b] - quotas[b].floor();
        rb.partial_cmp(&ra).unwrap()
    });

    let mut leftover = n as i64 - assigned as i64;
    for &idx in &order {
        if leftover <= 0 {
            break;
        }
        sizes[idx] += 1;
        leftover -= 1;
    }
    // float edge case: floors overshot n, trim from smallest remainders
    for &idx in order.iter().rev() {
        if leftover >= 0 {
            break;
        }
        if sizes[idx] > 0 {
            sizes[idx] -= 1;
            leftover += 1;
        }
    }

    // enforce the floor of one observation per subgroup
    loop {
        let Some(empty) = sizes.iter().position(|&s| s == 0) else {
            break;
        };
        let donor = sizes
            .iter()
            .enumerate()
            .max_by(|(ai, a), (bi, b)| a.cmp(b).then(bi.cmp(ai)))
            .map(|(i, _)| i)
            .unwrap();
        sizes[donor] -= 1;
        sizes[empty] += 1;
    }
    debug_assert_eq!(sizes.iter().sum::<usize>(), n);
    sizes
}

/// Draws `n` observations from the population and shuffles them.
///
/// Deterministic given the RNG state: subgroup draws happen in subgroup order,
/// then one shuffle permutes the rows.
pub fn sample(pop: &PopulationSpec, n: usize, rng: &mut impl Rng) -> Result<Dataset> {
    pop.validate()?;
    if n < pop.subgroups.len() {
        return Err(Error::Sampling(format!(
            "n={n} cannot cover {} subgroups",
            pop.subgroups.len()
        )));
    }

    let sizes = apportion(&pop.proportions(), n);
    let p = pop.n_features;
    let mut rows: Vec<(Vec<f64>, usize)> = Vec::with_capacity(n);
    for (group, (sub, &size)) in pop.subgroups.iter().zip(&sizes).enumerate() {
        let factor = covariance_factor(&sub.covariance)?;
        let mean = DVector::from_column_slice(&sub.mean);
        for _ in 0..size {
            let z = DVector::from_iterator(p, (0..p).map(|_| StandardNormal.sample(rng)));
            let x = &mean + &factor * z;
            rows.push((x.iter().copied().collect(), group));
        }
    }
    rows.shuffle(rng);

    let (data, truth) = rows.into_iter().unzip();
    Ok(Dataset { data, truth })
}

/// Factor L with L Lᵀ = covariance, for transforming standard-normal draws.
/// Cholesky when the matrix is PD; eigendecomposition fallback for the
/// semi-definite boundary.
fn covariance_factor(cov: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if let Some(chol) = Cholesky::new(cov.clone()) {
        return Ok(chol.l());
    }
    let eigen = nalgebra::SymmetricEigen::new(cov.clone());
    let min_eig = eigen.eigenvalues.min();
    if min_eig < -1e-8 {
        return Err(Error::Sampling(format!(
            "covariance is not PSD (min eigenvalue {min_eig:.3e})"
        )));
    }
    let roots = eigen.eigenvalues.map(|v| v.max(0.0).sqrt());
    Ok(&eigen.eigenvectors * DMatrix::from_diagonal(&roots))
}

/// Aggregates per-feature effect sizes into a single centroid separation:
/// the Euclidean norm of the effect-size vector. Empty input gives 0.
pub fn expected_separation(ds: &[f64]) -> f64 {
    ds.iter().map(|d| d * d).sum::<f64>().sqrt()
}
