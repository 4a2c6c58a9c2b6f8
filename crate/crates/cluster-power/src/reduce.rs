//! Dimensionality reduction by metric multidimensional scaling (SMACOF).
//!
//! Finds low-dimensional coordinates whose pairwise Euclidean distances
//! approximate those of the original data by iterative stress majorization
//! (Guttman transforms). Raw stress Σ (δᵢⱼ − dᵢⱼ)² is the quantity
//! minimized; it never increases across iterations.

use rand::Rng;

use crate::error::{Error, Result};
use crate::numeric::{centroid_of, euclidean, pairwise_euclidean};
use crate::seed::{derive_seed, rng_from_seed};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MdsInit {
    /// Uniform random coordinates, multiple restarts.
    Random,
    /// Classical (Torgerson) scaling: eigendecomposition of the
    /// double-centered squared distances. Deterministic, single start.
    Classical,
}

#[derive(Debug, Clone)]
pub struct MdsConfig {
    pub n_components: usize,
    pub init: MdsInit,
    /// Random restarts (ignored for classical init).
    pub n_init: usize,
    pub max_iter: usize,
    /// Converged when the relative stress improvement drops below this.
    pub tol: f64,
}

impl Default for MdsConfig {
    fn default() -> Self {
        MdsConfig {
            n_components: 2,
            init: MdsInit::Random,
            n_init: 4,
            max_iter: 300,
            tol: 1e-4,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MdsResult {
    /// Centered embedding, one row per input row.
    pub coords: Vec<Vec<f64>>,
    /// Raw stress of the embedding.
    pub stress: f64,
    /// Guttman iterations of the winning start.
    pub n_iter: usize,
    /// True when the input had no geometry to embed (all rows identical).
    pub degenerate: bool,
}

/// Embeds `data` into `config.n_components` dimensions; deterministic given
/// `seed`.
pub fn mds(data: &[Vec<f64>], config: &MdsConfig, seed: u64) -> Result<MdsResult> {
    if data.is_empty() {
        return Err(Error::InvalidSpec("empty dataset".into()));
    }
    if config.n_components == 0 {
        return Err(Error::InvalidSpec("n_components must be at least 1".into()));
    }
    if config.n_init == 0 || config.max_iter == 0 {
        return Err(Error::InvalidSpec("n_init and max_iter must be positive".into()));
    }
    let p = data[0].len();
    if p == 0 || data.iter().any(|row| row.len() != p) {
        return Err(Error::ShapeMismatch("rows must share a positive width".into()));
    }

    let n = data.len();
    let delta = pairwise_euclidean(data);
    let spread = delta
        .iter()
        .flat_map(|row| row.iter())
        .cloned()
        .fold(0.0, f64::max);
    if spread == 0.0 {
        // no distances to reproduce: park everything at the origin
        return Ok(MdsResult {
            coords: vec![vec![0.0; config.n_components]; n],
            stress: 0.0,
            n_iter: 0,
            degenerate: true,
        });
    }

    let starts: Vec<Vec<Vec<f64>>> = match config.init {
        MdsInit::Classical => vec![classical_init(&delta, config.n_components)],
        MdsInit::Random => (0..config.n_init)
            .map(|restart| {
                let mut rng = rng_from_seed(derive_seed(seed, &format!("mds/restart/{restart}")));
                (0..n)
                    .map(|_| {
                        (0..config.n_components)
                            .map(|_| rng.random_range(-spread..spread))
                            .collect()
                    })
                    .collect()
            })
            .collect(),
    };

    let mut best: Option<MdsResult> = None;
    for start in starts {
        let run = majorize(&delta, start, config);
        let better = match &best {
            None => true,
            Some(b) => run.stress < b.stress,
        };
        if better {
            best = Some(run);
        }
    }
    let mut result = best.expect("at least one start ran");
    center(&mut result.coords);
    Ok(result)
}

/// Iterates Guttman transforms until the stress stops improving.
fn majorize(delta: &[Vec<f64>], mut coords: Vec<Vec<f64>>, config: &MdsConfig) -> MdsResult {
    let mut stress = stress_of(delta, &coords);
    let mut n_iter = 0;

    for iter in 0..config.max_iter {
        n_iter = iter + 1;
        coords = guttman_step(delta, &coords);
        let new_stress = stress_of(delta, &coords);
        debug_assert!(
            new_stress <= stress + 1e-9 * (1.0 + stress),
            "stress rose from {stress} to {new_stress}"
        );
        let improvement = if stress > 0.0 {
            (stress - new_stress) / stress
        } else {
            0.0
        };
        stress = new_stress;
        if improvement < config.tol {
            break;
        }
    }
    MdsResult {
        coords,
        stress,
        n_iter,
        degenerate: false,
    }
}

/// X' = (1/n) B(X) X with bᵢⱼ = −δᵢⱼ/dᵢⱼ (0 when dᵢⱼ = 0) and rows of B
/// summing to zero.
fn guttman_step(delta: &[Vec<f64>], coords: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = delta.len();
    let m = coords[0].len();
    let d = pairwise_euclidean(coords);

    let mut next = vec![vec![0.0; m]; n];
    for i in 0..n {
        let mut diag = 0.0;
        for j in 0..n {
            if j == i {
                continue;
            }
            let b = if d[i][j] > 0.0 { -delta[i][j] / d[i][j] } else { 0.0 };
            diag -= b;
            for c in 0..m {
                next[i][c] += b * coords[j][c];
            }
        }
        for c in 0..m {
            next[i][c] += diag * coords[i][c];
            next[i][c] /= n as f64;
        }
    }
    next
}

/// Raw stress Σ_{i<j} (δᵢⱼ − dᵢⱼ)².
pub fn stress_of(delta: &[Vec<f64>], coords: &[Vec<f64>]) -> f64 {
    let n = delta.len();
    let mut total = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let diff = delta[i][j] - euclidean(&coords[i], &coords[j]);
            total += diff * diff;
        }
    }
    total
}

/// Torgerson scaling: eigendecomposition of −½ J D² J.
fn classical_init(delta: &[Vec<f64>], n_components: usize) -> Vec<Vec<f64>> {
    let n = delta.len();
    let sq = nalgebra::DMatrix::from_fn(n, n, |i, j| delta[i][j] * delta[i][j]);
    let row_means: Vec<f64> = (0..n).map(|i| sq.row(i).sum() / n as f64).collect();
    let grand = row_means.iter().sum::<f64>() / n as f64;
    let b = nalgebra::DMatrix::from_fn(n, n, |i, j| {
        -0.5 * (sq[(i, j)] - row_means[i] - row_means[j] + grand)
    });

    let eigen = nalgebra::SymmetricEigen::new(b);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eigen.eigenvalues[b].partial_cmp(&eigen.eigenvalues[a]).unwrap());

    (0..n)
        .map(|i| {
            (0..n_components)
                .map(|c| {
                    order
                        .get(c)
                        .map(|&idx| {
                            let scale = eigen.eigenvalues[idx].max(0.0).sqrt();
                            eigen.eigenvectors[(i, idx)] * scale
                        })
                        .unwrap_or(0.0)
                })
                .collect()
        })
        .collect()
}

fn center(coords: &mut [Vec<f64>]) {
    if coords.is_empty() {
        return;
    }
    let n = coords.len() as f64;
    let m = coords[0].len();
    for c in 0..m {
        let mean = coords.iter().map(|row| row[c]).sum::<f64>() / n;
        for row in coords.iter_mut() {
            row[c] -= mean;
        }
    }
}

/// Separation realized between true subgroups in an embedding: the distance
/// between the two subgroup centroids, or the smallest pairwise centroid
/// distance when there are three or more subgroups.
pub fn projected_separation(coords: &[Vec<f64>], truth: &[usize]) -> Result<f64> {
    if coords.len() != truth.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} rows vs {} labels",
            coords.len(),
            truth.len()
        )));
    }
    let mut groups: Vec<usize> = truth.to_vec();
    groups.sort_unstable();
    groups.dedup();
    if groups.len() < 2 {
        return Err(Error::UndefinedScore(format!(
            "separation needs at least 2 subgroups, found {}",
            groups.len()
        )));
    }

    let centroids: Vec<Vec<f64>> = groups
        .iter()
        .map(|&g| {
            let members: Vec<usize> = (0..truth.len()).filter(|&i| truth[i] == g).collect();
            centroid_of(coords, &members)
        })
        .collect();

    let mut min = f64::INFINITY;
    for i in 0..centroids.len() {
        for j in (i + 1)..centroids.len() {
            min = min.min(euclidean(&centroids[i], &centroids[j]));
        }
    }
    Ok(min)
}
