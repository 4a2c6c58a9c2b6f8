//! Small shared numeric helpers used across clustering and evaluation.

use crate::error::{Error, Result};

/// Euclidean distance between two feature vectors.
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    squared_euclidean(a, b).sqrt()
}

/// Squared Euclidean distance.
pub fn squared_euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Cosine distance 1 - a.b / (|a||b|). Zero vectors have no direction.
pub fn cosine_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return Err(Error::UndefinedDistance(
            "cosine distance is undefined for a zero vector".into(),
        ));
    }
    Ok(1.0 - dot / (na * nb))
}

/// Dense symmetric matrix of pairwise Euclidean distances.
pub fn pairwise_euclidean(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = rows.len();
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let dist = euclidean(&rows[i], &rows[j]);
            d[i][j] = dist;
            d[j][i] = dist;
        }
    }
    d
}

/// Mean position of the selected rows.
pub fn centroid_of(rows: &[Vec<f64>], members: &[usize]) -> Vec<f64> {
    let p = rows[0].len();
    let mut c = vec![0.0; p];
    for &i in members {
        for (acc, v) in c.iter_mut().zip(&rows[i]) {
            *acc += v;
        }
    }
    for v in &mut c {
        *v /= members.len() as f64;
    }
    c
}
