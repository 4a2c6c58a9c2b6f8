//! Lloyd's k-means with k-means++ seeding and restarts.

use rand::Rng;

use crate::error::{Error, Result};
use crate::numeric::squared_euclidean;
use crate::seed::{derive_seed, rng_from_seed};

#[derive(Debug, Clone)]
pub struct KMeansConfig {
    pub k: usize,
    /// Independent seeded restarts; the best final inertia wins.
    pub n_init: usize,
    pub max_iter: usize,
    /// Converged when the Frobenius norm of the centroid update falls below
    /// this.
    pub tol: f64,
}

impl KMeansConfig {
    pub fn new(k: usize) -> Self {
        KMeansConfig {
            k,
            n_init: 10,
            max_iter: 300,
            tol: 1e-4,
        }
    }
}

#[derive(Debug, Clone)]
pub struct KMeansResult {
    /// Cluster index per point. Compacted to 0..m when clusters came out
    /// empty (see `degenerate`).
    pub labels: Vec<i32>,
    pub centroids: Vec<Vec<f64>>,
    /// Sum of squared distances of points to their assigned centroid.
    pub inertia: f64,
    /// Lloyd iterations of the winning restart.
    pub n_iter: usize,
    /// True when fewer than k clusters survived (duplicate-heavy data).
    pub degenerate: bool,
}

/// Runs k-means; deterministic given `seed` regardless of scheduling.
pub fn kmeans(data: &[Vec<f64>], config: &KMeansConfig, seed: u64) -> Result<KMeansResult> {
    check_input(data, config.k)?;
    if config.n_init == 0 || config.max_iter == 0 {
        return Err(Error::InvalidSpec("n_init and max_iter must be positive".into()));
    }

    let mut best: Option<KMeansResult> = None;
    for restart in 0..config.n_init {
        let mut rng = rng_from_seed(derive_seed(seed, &format!("kmeans/restart/{restart}")));
        let run = lloyd(data, config, &mut rng);
        let better = match &best {
            None => true,
            // strict comparison keeps the earliest restart on ties
            Some(b) => run.inertia < b.inertia,
        };
        if better {
            best = Some(run);
        }
    }
    let mut result = best.expect("at least one restart ran");
    compact_labels(&mut result);
    Ok(result)
}

fn check_input(data: &[Vec<f64>], k: usize) -> Result<()> {
    if data.is_empty() {
        return Err(Error::InvalidSpec("empty dataset".into()));
    }
    if k == 0 {
        return Err(Error::InvalidSpec("k must be at least 1".into()));
    }
    if k > data.len() {
        return Err(Error::InvalidSpec(format!(
            "k={k} exceeds {} points",
            data.len()
        )));
    }
    let p = data[0].len();
    if p == 0 || data.iter().any(|row| row.len() != p) {
        return Err(Error::ShapeMismatch("rows must share a positive width".into()));
    }
    Ok(())
}

fn lloyd(data: &[Vec<f64>], config: &KMeansConfig, rng: &mut impl Rng) -> KMeansResult {
    let mut centroids = plus_plus_init(data, config.k, rng);
    let mut labels = vec![0i32; data.len()];
    let mut last_inertia = f64::INFINITY;
    let mut n_iter = 0;

    for iter in 0..config.max_iter {
        n_iter = iter + 1;
        assign(data, &centroids, &mut labels);
        reseed_empty_clusters(data, &centroids, &mut labels);
        let new_centroids = update_centroids(data, &labels, &centroids);

        let inertia = inertia_of(data, &new_centroids, &labels);
        debug_assert!(
            inertia <= last_inertia + 1e-9 * (1.0 + last_inertia.abs()),
            "inertia rose from {last_inertia} to {inertia}"
        );
        last_inertia = inertia;

        let shift: f64 = centroids
            .iter()
            .zip(&new_centroids)
            .map(|(a, b)| squared_euclidean(a, b))
            .sum::<f64>()
            .sqrt();
        centroids = new_centroids;
        if shift <= config.tol {
            break;
        }
    }
    assign(data, &centroids, &mut labels);

    KMeansResult {
        inertia: inertia_of(data, &centroids, &labels),
        labels,
        centroids,
        n_iter,
        degenerate: false,
    }
}

/// k-means++: first centroid uniform, the rest sampled proportional to the
/// squared distance to the nearest centroid chosen so far.
fn plus_plus_init(data: &[Vec<f64>], k: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    let mut centroids = Vec::with_capacity(k);
    let first = rng.random_range(0..data.len());
    centroids.push(data[first].clone());

    let mut dist_sq: Vec<f64> = data
        .iter()
        .map(|row| squared_euclidean(row, &centroids[0]))
        .collect();
    while centroids.len() < k {
        let total: f64 = dist_sq.iter().sum();
        let chosen = if total > 0.0 {
            let mut target = rng.random_range(0.0..total);
            let mut idx = data.len() - 1;
            for (i, &w) in dist_sq.iter().enumerate() {
                if target < w {
                    idx = i;
                    break;
                }
                target -= w;
            }
            idx
        } else {
            // every remaining point coincides with a centroid
            rng.random_range(0..data.len())
        };
        centroids.push(data[chosen].clone());
        for (d, row) in dist_sq.iter_mut().zip(data) {
            let to_new = squared_euclidean(row, centroids.last().unwrap());
            if to_new < *d {
                *d = to_new;
            }
        }
    }
    centroids
}

/// Nearest-centroid assignment; ties go to the lowest centroid index.
fn assign(data: &[Vec<f64>], centroids: &[Vec<f64>], labels: &mut [i32]) {
    for (label, row) in labels.iter_mut().zip(data) {
        let mut best = 0usize;
        let mut best_d = f64::INFINITY;
        for (c, centroid) in centroids.iter().enumerate() {
            let d = squared_euclidean(row, centroid);
            if d < best_d {
                best_d = d;
                best = c;
            }
        }
        *label = best as i32;
    }
}

/// Gives each empty cluster the point currently farthest from its assigned
/// centroid, so no centroid is left undefined.
fn reseed_empty_clusters(data: &[Vec<f64>], centroids: &[Vec<f64>], labels: &mut [i32]) {
    let k = centroids.len();
    let mut sizes = vec![0usize; k];
    for &l in labels.iter() {
        sizes[l as usize] += 1;
    }
    for empty in 0..k {
        if sizes[empty] > 0 {
            continue;
        }
        let mut farthest = None;
        let mut max_d = -1.0;
        for (i, row) in data.iter().enumerate() {
            let owner = labels[i] as usize;
            if sizes[owner] <= 1 {
                continue; // stealing the only member would empty another cluster
            }
            let d = squared_euclidean(row, &centroids[owner]);
            if d > max_d {
                max_d = d;
                farthest = Some(i);
            }
        }
        if let Some(i) = farthest {
            sizes[labels[i] as usize] -= 1;
            labels[i] = empty as i32;
            sizes[empty] += 1;
        }
    }
}

fn update_centroids(data: &[Vec<f64>], labels: &[i32], previous: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let k = previous.len();
    let p = data[0].len();
    let mut sums = vec![vec![0.0; p]; k];
    let mut counts = vec![0usize; k];
    for (row, &l) in data.iter().zip(labels) {
        counts[l as usize] += 1;
        for (s, x) in sums[l as usize].iter_mut().zip(row) {
            *s += x;
        }
    }
    for c in 0..k {
        if counts[c] == 0 {
            // still empty after reseeding (more clusters than distinct
            // points): keep the previous centroid
            sums[c] = previous[c].clone();
        } else {
            for s in sums[c].iter_mut() {
                *s /= counts[c] as f64;
            }
        }
    }
    sums
}

fn inertia_of(data: &[Vec<f64>], centroids: &[Vec<f64>], labels: &[i32]) -> f64 {
    data.iter()
        .zip(labels)
        .map(|(row, &l)| squared_euclidean(row, &centroids[l as usize]))
        .sum()
}

/// Renumbers labels to 0..m if some clusters are empty, dropping their
/// centroids and setting the degenerate flag.
fn compact_labels(result: &mut KMeansResult) {
    let k = result.centroids.len();
    let mut seen = vec![false; k];
    for &l in &result.labels {
        seen[l as usize] = true;
    }
    if seen.iter().all(|&s| s) {
        return;
    }
    result.degenerate = true;
    let mut remap = vec![0i32; k];
    let mut kept = Vec::new();
    let mut next = 0;
    for c in 0..k {
        if seen[c] {
            remap[c] = next;
            next += 1;
            kept.push(result.centroids[c].clone());
        }
    }
    for l in result.labels.iter_mut() {
        *l = remap[*l as usize];
    }
    result.centroids = kept;
}
