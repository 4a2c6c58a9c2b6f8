//! Agglomerative hierarchical clustering via Lance-Williams updates.
//!
//! Two linkage/metric pairings are supported: Ward on (squared) Euclidean
//! distances, and average linkage on cosine distances. Other pairings are
//! rejected rather than silently computed, since Ward is only meaningful for
//! Euclidean geometry.

use crate::error::{Error, Result};
use crate::numeric::{cosine_distance, squared_euclidean};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Linkage {
    Ward,
    Average,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Euclidean,
    Cosine,
}

#[derive(Debug, Clone)]
pub struct AgglomerativeConfig {
    pub k: usize,
    pub linkage: Linkage,
    pub metric: Metric,
}

impl AgglomerativeConfig {
    pub fn ward(k: usize) -> Self {
        AgglomerativeConfig {
            k,
            linkage: Linkage::Ward,
            metric: Metric::Euclidean,
        }
    }

    pub fn average_cosine(k: usize) -> Self {
        AgglomerativeConfig {
            k,
            linkage: Linkage::Average,
            metric: Metric::Cosine,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AgglomerativeResult {
    /// Cluster index per point, numbered by each cluster's smallest member
    /// index.
    pub labels: Vec<i32>,
}

/// Merges the two closest clusters until `k` remain. Deterministic: distance
/// ties are broken toward the lexicographically smallest slot pair.
pub fn agglomerative(data: &[Vec<f64>], config: &AgglomerativeConfig) -> Result<AgglomerativeResult> {
    let n = data.len();
    if n == 0 {
        return Err(Error::InvalidSpec("empty dataset".into()));
    }
    if config.k == 0 || config.k > n {
        return Err(Error::InvalidSpec(format!("k={} must be in 1..={n}", config.k)));
    }
    let p = data[0].len();
    if p == 0 || data.iter().any(|row| row.len() != p) {
        return Err(Error::ShapeMismatch("rows must share a positive width".into()));
    }
    match (config.linkage, config.metric) {
        (Linkage::Ward, Metric::Euclidean) | (Linkage::Average, Metric::Cosine) => {}
        (linkage, metric) => {
            return Err(Error::UnsupportedCombination(format!(
                "{linkage:?} linkage with {metric:?} metric"
            )));
        }
    }

    // pairwise dissimilarities: Ward maintains squared Euclidean
    let mut dist = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = match config.metric {
                Metric::Euclidean => squared_euclidean(&data[i], &data[j]),
                Metric::Cosine => cosine_distance(&data[i], &data[j])?,
            };
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }

    let mut active = vec![true; n];
    let mut sizes = vec![1.0f64; n];
    // members[slot] lists the original point indices in that cluster
    let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();

    for _ in 0..(n - config.k) {
        // closest active pair; strict < keeps the lexicographically first tie
        let (mut best_i, mut best_j, mut best_d) = (usize::MAX, usize::MAX, f64::INFINITY);
        for i in 0..n {
            if !active[i] {
                continue;
            }
            for j in (i + 1)..n {
                if active[j] && dist[i][j] < best_d {
                    best_d = dist[i][j];
                    best_i = i;
                    best_j = j;
                }
            }
        }

        let (ni, nj) = (sizes[best_i], sizes[best_j]);
        for k in 0..n {
            if !active[k] || k == best_i || k == best_j {
                continue;
            }
            let nk = sizes[k];
            let updated = match config.linkage {
                Linkage::Ward => {
                    ((ni + nk) * dist[k][best_i] + (nj + nk) * dist[k][best_j]
                        - nk * dist[best_i][best_j])
                        / (ni + nj + nk)
                }
                Linkage::Average => (ni * dist[k][best_i] + nj * dist[k][best_j]) / (ni + nj),
            };
            dist[best_i][k] = updated;
            dist[k][best_i] = updated;
        }

        // merged cluster lives on in the lower slot
        active[best_j] = false;
        sizes[best_i] += sizes[best_j];
        let absorbed = std::mem::take(&mut members[best_j]);
        members[best_i].extend(absorbed);
    }

    // number surviving clusters by their smallest member index
    let mut survivors: Vec<Vec<usize>> = members
        .into_iter()
        .zip(&active)
        .filter(|(_, &a)| a)
        .map(|(m, _)| m)
        .collect();
    for m in survivors.iter_mut() {
        m.sort_unstable();
    }
    survivors.sort_by_key(|m| m[0]);

    let mut labels = vec![0i32; n];
    for (cluster, m) in survivors.iter().enumerate() {
        for &point in m {
            labels[point] = cluster as i32;
        }
    }
    Ok(AgglomerativeResult { labels })
}
