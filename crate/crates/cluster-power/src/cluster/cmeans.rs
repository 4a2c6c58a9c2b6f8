//! Fuzzy c-means: soft partitions via alternating membership/centroid
//! optimization.

use rand::Rng;

use crate::error::{Error, Result};
use crate::numeric::euclidean;
use crate::seed::{derive_seed, rng_from_seed};
use crate::validate::harden;

/// Distances below this count as "point sits on the centroid", giving it full
/// membership there.
const COINCIDENT: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct CMeansConfig {
    pub k: usize,
    /// Fuzziness exponent, > 1. Larger values smear memberships toward
    /// uniform; 2 is the conventional choice.
    pub m: f64,
    pub n_init: usize,
    pub max_iter: usize,
    /// Converged when no membership entry moves more than this between
    /// iterations.
    pub tol: f64,
}

impl CMeansConfig {
    pub fn new(k: usize) -> Self {
        CMeansConfig {
            k,
            m: 2.0,
            n_init: 1,
            max_iter: 300,
            tol: 1e-5,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CMeansResult {
    /// Row-stochastic membership matrix, one row per point.
    pub memberships: Vec<Vec<f64>>,
    pub centroids: Vec<Vec<f64>>,
    /// Weighted objective Σ uᵐ d².
    pub objective: f64,
    /// Hardened labels (argmax membership, ties to the lowest index).
    pub labels: Vec<i32>,
    pub n_iter: usize,
    /// True when the hardened labels cover fewer than k clusters.
    pub degenerate: bool,
}

/// Runs fuzzy c-means; deterministic given `seed`.
pub fn cmeans(data: &[Vec<f64>], config: &CMeansConfig, seed: u64) -> Result<CMeansResult> {
    if data.is_empty() {
        return Err(Error::InvalidSpec("empty dataset".into()));
    }
    if config.k == 0 || config.k > data.len() {
        return Err(Error::InvalidSpec(format!(
            "k={} must be in 1..={}",
            config.k,
            data.len()
        )));
    }
    if !(config.m > 1.0) {
        return Err(Error::InvalidSpec(format!(
            "fuzziness m={} must exceed 1",
            config.m
        )));
    }
    if config.n_init == 0 || config.max_iter == 0 {
        return Err(Error::InvalidSpec("n_init and max_iter must be positive".into()));
    }
    let p = data[0].len();
    if p == 0 || data.iter().any(|row| row.len() != p) {
        return Err(Error::ShapeMismatch("rows must share a positive width".into()));
    }

    let mut best: Option<CMeansResult> = None;
    for restart in 0..config.n_init {
        let mut rng = rng_from_seed(derive_seed(seed, &format!("cmeans/restart/{restart}")));
        let run = alternate(data, config, &mut rng);
        let better = match &best {
            None => true,
            Some(b) => run.objective < b.objective,
        };
        if better {
            best = Some(run);
        }
    }
    Ok(best.expect("at least one restart ran"))
}

fn alternate(data: &[Vec<f64>], config: &CMeansConfig, rng: &mut impl Rng) -> CMeansResult {
    let k = config.k;
    let mut memberships = random_memberships(data.len(), k, rng);
    let mut centroids;
    let mut last_objective = f64::INFINITY;
    let mut n_iter = 0;

    loop {
        n_iter += 1;
        centroids = update_centroids(data, &memberships, config.m);
        let new_memberships = update_memberships(data, &centroids, config.m);

        let objective = objective_of(data, &centroids, &new_memberships, config.m);
        debug_assert!(
            objective <= last_objective + 1e-9 * (1.0 + last_objective.abs()),
            "objective rose from {last_objective} to {objective}"
        );
        last_objective = objective;

        let max_shift = memberships
            .iter()
            .flatten()
            .zip(new_memberships.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        memberships = new_memberships;
        if max_shift <= config.tol || n_iter >= config.max_iter {
            break;
        }
    }

    let labels = harden(&memberships);
    let mut covered = labels.clone();
    covered.sort_unstable();
    covered.dedup();
    CMeansResult {
        degenerate: covered.len() < k,
        objective: last_objective,
        memberships,
        centroids,
        labels,
        n_iter,
    }
}

/// Uniform random row-stochastic matrix.
fn random_memberships(n: usize, k: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| {
            let mut row: Vec<f64> = (0..k).map(|_| rng.random_range(1e-3..1.0)).collect();
            let total: f64 = row.iter().sum();
            for u in row.iter_mut() {
                *u /= total;
            }
            row
        })
        .collect()
}

/// Weighted means with weights uᵐ.
fn update_centroids(data: &[Vec<f64>], memberships: &[Vec<f64>], m: f64) -> Vec<Vec<f64>> {
    let k = memberships[0].len();
    let p = data[0].len();
    let mut centroids = vec![vec![0.0; p]; k];
    let mut weights = vec![0.0; k];
    for (row, mem) in data.iter().zip(memberships) {
        for (j, &u) in mem.iter().enumerate() {
            let w = u.powf(m);
            weights[j] += w;
            for (c, x) in centroids[j].iter_mut().zip(row) {
                *c += w * x;
            }
        }
    }
    for (centroid, w) in centroids.iter_mut().zip(&weights) {
        if *w > 0.0 {
            for c in centroid.iter_mut() {
                *c /= w;
            }
        }
    }
    centroids
}

/// Standard membership update: uᵢⱼ ∝ dᵢⱼ^(−2/(m−1)), normalized per row; a
/// point coincident with a centroid gets full membership at the lowest such
/// centroid index.
fn update_memberships(data: &[Vec<f64>], centroids: &[Vec<f64>], m: f64) -> Vec<Vec<f64>> {
    let k = centroids.len();
    let exponent = -2.0 / (m - 1.0);
    data.iter()
        .map(|row| {
            let dists: Vec<f64> = centroids.iter().map(|c| euclidean(row, c)).collect();
            if let Some(hit) = dists.iter().position(|&d| d < COINCIDENT) {
                let mut mem = vec![0.0; k];
                mem[hit] = 1.0;
                return mem;
            }
            let raw: Vec<f64> = dists.iter().map(|&d| d.powf(exponent)).collect();
            let total: f64 = raw.iter().sum();
            raw.into_iter().map(|r| r / total).collect()
        })
        .collect()
}

fn objective_of(
    data: &[Vec<f64>],
    centroids: &[Vec<f64>],
    memberships: &[Vec<f64>],
    m: f64,
) -> f64 {
    let mut total = 0.0;
    for (row, mem) in data.iter().zip(memberships) {
        for (centroid, &u) in centroids.iter().zip(mem) {
            let d = euclidean(row, centroid);
            total += u.powf(m) * d * d;
        }
    }
    total
}
