//! Internal and external validation of clustering outcomes.
//!
//! Internal: silhouette width for crisp partitions and its fuzzy
//! generalization (membership-weighted). External: adjusted Rand index and
//! best-case classification accuracy against the generating labels, plus the
//! chance level that accuracy should be compared to.
//!
//! Noise points (label -1 from density-based clustering) are excluded from
//! silhouette averaging but kept — as their own label — in the external
//! measures, so spurious noise assignments count against the solution.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::numeric::pairwise_euclidean;

/// Noise marker used by density-based clustering.
pub const NOISE: i32 = -1;

/// Mean silhouette width of a crisp partition over non-noise points.
///
/// Each point's score is `(b - a) / max(a, b)` where `a` is its mean distance
/// to its own cluster and `b` the smallest mean distance to another cluster.
/// Singleton clusters score 0, as do points where both `a` and `b` vanish.
///
/// Errors when fewer than 2 distinct non-noise clusters exist or all points
/// are noise.
pub fn silhouette(data: &[Vec<f64>], labels: &[i32]) -> Result<f64> {
    let per_sample = silhouette_samples(data, labels)?;
    let kept = per_sample.iter().filter(|s| s.is_some()).count();
    let total: f64 = per_sample.iter().flatten().sum();
    Ok(total / kept as f64)
}

/// Per-point silhouette scores; `None` marks noise points.
pub fn silhouette_samples(data: &[Vec<f64>], labels: &[i32]) -> Result<Vec<Option<f64>>> {
    if data.len() != labels.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} rows vs {} labels",
            data.len(),
            labels.len()
        )));
    }
    let n = data.len();
    let mut cluster_sizes: BTreeMap<i32, usize> = BTreeMap::new();
    for &l in labels {
        if l != NOISE {
            *cluster_sizes.entry(l).or_insert(0) += 1;
        }
    }
    if cluster_sizes.len() < 2 {
        return Err(Error::UndefinedScore(format!(
            "silhouette needs at least 2 clusters, found {}",
            cluster_sizes.len()
        )));
    }

    let dist = pairwise_euclidean(data);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        if labels[i] == NOISE {
            out.push(None);
            continue;
        }
        let own_size = cluster_sizes[&labels[i]];
        if own_size == 1 {
            out.push(Some(0.0));
            continue;
        }
        // mean distance to every cluster, own cluster excluding self
        let mut sums: BTreeMap<i32, f64> = BTreeMap::new();
        for j in 0..n {
            if j == i || labels[j] == NOISE {
                continue;
            }
            *sums.entry(labels[j]).or_insert(0.0) += dist[i][j];
        }
        let a = sums[&labels[i]] / (own_size - 1) as f64;
        let b = sums
            .iter()
            .filter(|(&l, _)| l != labels[i])
            .map(|(l, s)| s / cluster_sizes[l] as f64)
            .fold(f64::INFINITY, f64::min);
        let denom = a.max(b);
        out.push(Some(if denom == 0.0 { 0.0 } else { (b - a) / denom }));
    }
    Ok(out)
}

/// Membership-weighted mean silhouette for a fuzzy partition.
///
/// `memberships` is row-stochastic (one row per point, one column per
/// cluster). Crisp silhouette scores are computed on the hardened labels
/// (argmax per row, ties to the lowest index), then averaged with weights
/// `(u_p - u_q)^alpha` where `u_p`, `u_q` are each point's largest and
/// second-largest memberships. `alpha` = 1 is the usual choice; points whose
/// top two memberships tie contribute nothing.
pub fn fuzzy_silhouette(data: &[Vec<f64>], memberships: &[Vec<f64>], alpha: f64) -> Result<f64> {
    if data.len() != memberships.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} rows vs {} membership rows",
            data.len(),
            memberships.len()
        )));
    }
    let k = memberships.first().map_or(0, Vec::len);
    if k < 2 {
        return Err(Error::UndefinedScore(format!(
            "fuzzy silhouette needs at least 2 clusters, found {k}"
        )));
    }

    let labels = harden(memberships);
    let scores = silhouette_samples(data, &labels)?;

    let mut num = 0.0;
    let mut den = 0.0;
    for (row, score) in memberships.iter().zip(&scores) {
        if row.len() != k {
            return Err(Error::ShapeMismatch("ragged membership matrix".into()));
        }
        let score = score.expect("hardened labels contain no noise");
        let (mut top, mut second) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for &u in row {
            if u > top {
                second = top;
                top = u;
            } else if u > second {
                second = u;
            }
        }
        let weight = (top - second).max(0.0).powf(alpha);
        num += weight * score;
        den += weight;
    }
    if den == 0.0 {
        return Err(Error::UndefinedScore(
            "all membership rows are exactly tied".into(),
        ));
    }
    Ok(num / den)
}

/// Hardens a membership matrix to crisp labels: argmax per row, ties to the
/// lowest cluster index.
pub fn harden(memberships: &[Vec<f64>]) -> Vec<i32> {
    memberships
        .iter()
        .map(|row| {
            let mut best = 0;
            for (j, &u) in row.iter().enumerate() {
                if u > row[best] {
                    best = j;
                }
            }
            best as i32
        })
        .collect()
}

/// Adjusted Rand index between two labelings of the same points.
///
/// 1 means identical partitions, 0 is the chance level, negative values are
/// worse than chance. Noise labels participate as a regular (extra) cluster.
pub fn adjusted_rand(a: &[i32], b: &[i32]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} vs {} labels",
            a.len(),
            b.len()
        )));
    }
    if a.is_empty() {
        return Err(Error::UndefinedScore("no points to compare".into()));
    }

    let mut contingency: BTreeMap<(i32, i32), f64> = BTreeMap::new();
    let mut rows: BTreeMap<i32, f64> = BTreeMap::new();
    let mut cols: BTreeMap<i32, f64> = BTreeMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *contingency.entry((x, y)).or_insert(0.0) += 1.0;
        *rows.entry(x).or_insert(0.0) += 1.0;
        *cols.entry(y).or_insert(0.0) += 1.0;
    }

    let choose2 = |v: f64| v * (v - 1.0) / 2.0;
    let index: f64 = contingency.values().map(|&v| choose2(v)).sum();
    let row_sum: f64 = rows.values().map(|&v| choose2(v)).sum();
    let col_sum: f64 = cols.values().map(|&v| choose2(v)).sum();
    let expected = row_sum * col_sum / choose2(a.len() as f64);
    let max_index = 0.5 * (row_sum + col_sum);
    if (max_index - expected).abs() < 1e-12 {
        // both partitions are trivial (all-one-cluster or all-singletons)
        return Ok(if (index - expected).abs() < 1e-12 { 1.0 } else { 0.0 });
    }
    Ok((index - expected) / (max_index - expected))
}

/// Best-case classification accuracy: the fraction of points whose predicted
/// cluster maps onto their true subgroup under the one-to-one cluster-to-truth
/// assignment that maximizes agreement. Unmatched clusters (when the counts
/// differ) contribute zero.
pub fn classification_accuracy(truth: &[usize], predicted: &[i32]) -> Result<f64> {
    if truth.len() != predicted.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} truth vs {} predicted labels",
            truth.len(),
            predicted.len()
        )));
    }
    if truth.is_empty() {
        return Err(Error::UndefinedScore("no points to score".into()));
    }

    // dense contingency: rows = true subgroups, cols = predicted clusters
    let mut true_ids: Vec<usize> = truth.to_vec();
    true_ids.sort_unstable();
    true_ids.dedup();
    let mut pred_ids: Vec<i32> = predicted.to_vec();
    pred_ids.sort_unstable();
    pred_ids.dedup();

    let t_index = |l: usize| true_ids.binary_search(&l).unwrap();
    let p_index = |l: i32| pred_ids.binary_search(&l).unwrap();
    let mut counts = vec![vec![0u64; pred_ids.len()]; true_ids.len()];
    for (&t, &p) in truth.iter().zip(predicted) {
        counts[t_index(t)][p_index(p)] += 1;
    }

    let matched = best_assignment_total(&counts);
    Ok(matched as f64 / truth.len() as f64)
}

/// Maximum total over one-to-one row/column assignments of a count matrix.
/// Exhaustive for small matrices, Hungarian beyond.
fn best_assignment_total(counts: &[Vec<u64>]) -> u64 {
    let n_rows = counts.len();
    let n_cols = counts.first().map_or(0, Vec::len);
    if n_rows == 0 || n_cols == 0 {
        return 0;
    }
    if n_rows.min(n_cols) <= 6 {
        exhaustive_assignment(counts)
    } else {
        hungarian_assignment(counts)
    }
}

fn exhaustive_assignment(counts: &[Vec<u64>]) -> u64 {
    // permute over the smaller side
    let (rows, cols, flipped) = if counts.len() <= counts[0].len() {
        (counts.len(), counts[0].len(), false)
    } else {
        (counts[0].len(), counts.len(), true)
    };
    let at = |r: usize, c: usize| if flipped { counts[c][r] } else { counts[r][c] };

    let mut cols_left: Vec<usize> = (0..cols).collect();
    let mut best = 0;
    permute_assign(&at, 0, rows, &mut cols_left, 0, &mut best);
    best
}

fn permute_assign(
    at: &impl Fn(usize, usize) -> u64,
    row: usize,
    rows: usize,
    cols_left: &mut Vec<usize>,
    acc: u64,
    best: &mut u64,
) {
    if row == rows {
        *best = (*best).max(acc);
        return;
    }
    for idx in 0..cols_left.len() {
        let col = cols_left.swap_remove(idx);
        permute_assign(at, row + 1, rows, cols_left, acc + at(row, col), best);
        cols_left.push(col);
        let last = cols_left.len() - 1;
        cols_left.swap(idx, last);
    }
}

/// O(n³) Hungarian algorithm (Jonker-style shortest augmenting paths) on the
/// negated counts, padded square.
fn hungarian_assignment(counts: &[Vec<u64>]) -> u64 {
    let n = counts.len().max(counts[0].len());
    let max_entry = counts
        .iter()
        .flat_map(|r| r.iter())
        .copied()
        .max()
        .unwrap_or(0) as i64;
    // minimize (max - count); padding cells cost max (i.e. count 0)
    let cost = |r: usize, c: usize| -> i64 {
        let v = if r < counts.len() && c < counts[0].len() {
            counts[r][c] as i64
        } else {
            0
        };
        max_entry - v
    };

    // potentials + matching over a (n+1)-indexed grid
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut match_col = vec![0usize; n + 1]; // match_col[c] = row matched to column c (1-based)
    for row in 1..=n {
        let mut min_v = vec![i64::MAX; n + 1];
        let mut used = vec![false; n + 1];
        let mut way = vec![0usize; n + 1];
        let mut col0 = 0usize;
        match_col[0] = row;
        loop {
            used[col0] = true;
            let row0 = match_col[col0];
            let mut delta = i64::MAX;
            let mut col1 = 0;
            for col in 1..=n {
                if used[col] {
                    continue;
                }
                let cur = cost(row0 - 1, col - 1) - u[row0] - v[col];
                if cur < min_v[col] {
                    min_v[col] = cur;
                    way[col] = col0;
                }
                if min_v[col] < delta {
                    delta = min_v[col];
                    col1 = col;
                }
            }
            for col in 0..=n {
                if used[col] {
                    u[match_col[col]] += delta;
                    v[col] -= delta;
                } else {
                    min_v[col] -= delta;
                }
            }
            col0 = col1;
            if match_col[col0] == 0 {
                break;
            }
        }
        // augment along the alternating path
        while col0 != 0 {
            let prev = way[col0];
            match_col[col0] = match_col[prev];
            col0 = prev;
        }
    }

    let mut total = 0;
    for col in 1..=n {
        let row = match_col[col];
        if row >= 1 && row - 1 < counts.len() && col - 1 < counts[0].len() {
            total += counts[row - 1][col - 1];
        }
    }
    total
}

/// Accuracy expected from assigning every point to the largest subgroup:
/// the count of the largest subgroup over N.
pub fn chance_level(truth: &[usize]) -> Result<f64> {
    if truth.is_empty() {
        return Err(Error::UndefinedScore("no points".into()));
    }
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &t in truth {
        *counts.entry(t).or_insert(0) += 1;
    }
    let largest = *counts.values().max().unwrap();
    Ok(largest as f64 / truth.len() as f64)
}

/// Whether a score clears the conventional "structure detected" bar of 0.5.
pub fn clustered(score: f64) -> bool {
    score >= 0.5
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    /// Naive silhouette with explicit nested loops, as an independent route.
    fn silhouette_naive(data: &[Vec<f64>], labels: &[i32]) -> f64 {
        let n = data.len();
        let d = |i: usize, j: usize| crate::numeric::euclidean(&data[i], &data[j]);
        let mut total = 0.0;
        let mut kept = 0usize;
        for i in 0..n {
            if labels[i] == NOISE {
                continue;
            }
            let own: Vec<usize> = (0..n)
                .filter(|&j| j != i && labels[j] == labels[i])
                .collect();
            if own.is_empty() {
                kept += 1;
                continue; // singleton scores 0
            }
            let a = own.iter().map(|&j| d(i, j)).sum::<f64>() / own.len() as f64;
            let mut b = f64::INFINITY;
            let mut others: Vec<i32> = labels
                .iter()
                .copied()
                .filter(|&l| l != NOISE && l != labels[i])
                .collect();
            others.sort_unstable();
            others.dedup();
            for l in others {
                let members: Vec<usize> = (0..n).filter(|&j| labels[j] == l).collect();
                let mean = members.iter().map(|&j| d(i, j)).sum::<f64>() / members.len() as f64;
                b = b.min(mean);
            }
            if a.max(b) > 0.0 {
                total += (b - a) / a.max(b);
            }
            kept += 1;
        }
        total / kept as f64
    }

    #[test]
    fn silhouette_of_two_tight_pairs() {
        let data = vec![vec![0.0], vec![1.0], vec![10.0], vec![11.0]];
        let labels = vec![0, 0, 1, 1];
        let per = silhouette_samples(&data, &labels).unwrap();
        let expected = [
            1.0 - 1.0 / 10.5, // 0.904762
            1.0 - 1.0 / 9.5,  // 0.894737
            1.0 - 1.0 / 9.5,
            1.0 - 1.0 / 10.5,
        ];
        for (got, want) in per.iter().zip(expected) {
            assert_abs_diff_eq!(got.unwrap(), want, epsilon = 1e-9);
        }
        assert_abs_diff_eq!(silhouette(&data, &labels).unwrap(), 0.89975, epsilon = 1e-4);
    }

    #[test]
    fn singletons_score_zero_and_noise_is_excluded() {
        let data = vec![vec![0.0], vec![0.1], vec![5.0], vec![100.0]];
        let labels = vec![0, 0, 1, NOISE];
        let per = silhouette_samples(&data, &labels).unwrap();
        assert_eq!(per[2], Some(0.0));
        assert_eq!(per[3], None);
        let mean = silhouette(&data, &labels).unwrap();
        // only the three non-noise points average in
        let manual = (per[0].unwrap() + per[1].unwrap() + 0.0) / 3.0;
        assert_abs_diff_eq!(mean, manual, epsilon = 1e-12);
    }

    #[test]
    fn silhouette_needs_two_clusters() {
        let data = vec![vec![0.0], vec![1.0]];
        assert!(silhouette(&data, &[0, 0]).is_err());
        assert!(silhouette(&data, &[NOISE, NOISE]).is_err());
    }

    #[test]
    fn coincident_points_score_zero() {
        let data = vec![vec![0.0], vec![0.0], vec![0.0], vec![0.0]];
        let labels = vec![0, 0, 1, 1];
        for s in silhouette_samples(&data, &labels).unwrap() {
            assert_eq!(s, Some(0.0));
        }
    }

    proptest! {
        #[test]
        fn silhouette_matches_naive_route(
            seed in 0u64..200,
            n in 6usize..24,
        ) {
            let mut rng = crate::seed::rng_from_seed(seed);
            use rand::Rng;
            let data: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..3).map(|_| rng.random_range(-5.0..5.0)).collect())
                .collect();
            let labels: Vec<i32> = (0..n).map(|_| rng.random_range(0..3)).collect();
            // need two distinct non-noise clusters
            let mut distinct = labels.clone();
            distinct.sort_unstable();
            distinct.dedup();
            prop_assume!(distinct.len() >= 2);
            let fast = silhouette(&data, &labels).unwrap();
            let slow = silhouette_naive(&data, &labels);
            prop_assert!((fast - slow).abs() < 1e-9);
        }

        #[test]
        fn silhouette_is_bounded(seed in 0u64..100) {
            let mut rng = crate::seed::rng_from_seed(seed);
            use rand::Rng;
            let data: Vec<Vec<f64>> = (0..12)
                .map(|_| vec![rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)])
                .collect();
            let labels: Vec<i32> = (0..12).map(|_| rng.random_range(0..2)).collect();
            let mut distinct = labels.clone();
            distinct.sort_unstable();
            distinct.dedup();
            prop_assume!(distinct.len() >= 2);
            let s = silhouette(&data, &labels).unwrap();
            prop_assert!((-1.0..=1.0).contains(&s));
        }
    }

    #[test]
    fn fuzzy_silhouette_weights_by_membership_margin() {
        let data = vec![vec![0.0], vec![1.0], vec![10.0], vec![11.0]];
        let memberships = vec![
            vec![0.9, 0.1],
            vec![0.8, 0.2],
            vec![0.2, 0.8],
            vec![0.1, 0.9],
        ];
        let crisp = silhouette_samples(&data, &harden(&memberships)).unwrap();
        let s: Vec<f64> = crisp.into_iter().flatten().collect();
        let weights = [0.8, 0.6, 0.6, 0.8];
        let manual: f64 = weights.iter().zip(&s).map(|(w, s)| w * s).sum::<f64>()
            / weights.iter().sum::<f64>();
        let fs = fuzzy_silhouette(&data, &memberships, 1.0).unwrap();
        assert_abs_diff_eq!(fs, manual, epsilon = 1e-12);
        assert_abs_diff_eq!(fs, 0.900465, epsilon = 1e-5);
    }

    #[test]
    fn crisp_memberships_reduce_fuzzy_to_plain_silhouette() {
        let data = vec![vec![0.0], vec![1.2], vec![9.0], vec![10.5], vec![4.0]];
        let labels = vec![0, 0, 1, 1, 0];
        let memberships: Vec<Vec<f64>> = labels
            .iter()
            .map(|&l| {
                let mut row = vec![0.0, 0.0];
                row[l as usize] = 1.0;
                row
            })
            .collect();
        let fs = fuzzy_silhouette(&data, &memberships, 1.0).unwrap();
        let s = silhouette(&data, &labels).unwrap();
        assert_abs_diff_eq!(fs, s, epsilon = 1e-12);
    }

    #[test]
    fn tied_membership_rows_carry_no_weight() {
        let data = vec![vec![0.0], vec![1.0], vec![10.0], vec![11.0]];
        let memberships = vec![
            vec![0.9, 0.1],
            vec![0.5, 0.5], // tied: zero weight
            vec![0.2, 0.8],
            vec![0.1, 0.9],
        ];
        let fs = fuzzy_silhouette(&data, &memberships, 1.0).unwrap();
        let crisp = silhouette_samples(&data, &harden(&memberships)).unwrap();
        let s: Vec<f64> = crisp.into_iter().flatten().collect();
        let weights = [0.8, 0.0, 0.6, 0.8];
        let manual: f64 = weights.iter().zip(&s).map(|(w, s)| w * s).sum::<f64>()
            / weights.iter().sum::<f64>();
        assert_abs_diff_eq!(fs, manual, epsilon = 1e-12);

        let all_tied = vec![vec![0.5, 0.5]; 4];
        assert!(fuzzy_silhouette(&data, &all_tied, 1.0).is_err());
    }

    /// ARI via pair counting over all point pairs, as an independent route.
    fn ari_pair_counting(a: &[i32], b: &[i32]) -> f64 {
        let n = a.len();
        let (mut n11, mut n00, mut n10, mut n01) = (0.0, 0.0, 0.0, 0.0);
        for i in 0..n {
            for j in (i + 1)..n {
                let same_a = a[i] == a[j];
                let same_b = b[i] == b[j];
                match (same_a, same_b) {
                    (true, true) => n11 += 1.0,
                    (false, false) => n00 += 1.0,
                    (true, false) => n10 += 1.0,
                    (false, true) => n01 += 1.0,
                }
            }
        }
        let num = 2.0 * (n00 * n11 - n01 * n10);
        let den = (n00 + n01) * (n01 + n11) + (n00 + n10) * (n10 + n11);
        if den == 0.0 {
            1.0
        } else {
            num / den
        }
    }

    #[test]
    fn ari_worked_example() {
        let a = vec![0, 0, 0, 1, 1, 1];
        let b = vec![0, 0, 1, 1, 1, 1];
        let ari = adjusted_rand(&a, &b).unwrap();
        assert_abs_diff_eq!(ari, 1.2 / 3.7, epsilon = 1e-9);
        assert_abs_diff_eq!(ari, ari_pair_counting(&a, &b), epsilon = 1e-12);
    }

    #[test]
    fn ari_extremes() {
        let a = vec![0, 0, 1, 1, 2, 2];
        assert_abs_diff_eq!(adjusted_rand(&a, &a).unwrap(), 1.0, epsilon = 1e-12);
        // relabeled copy still matches perfectly
        let relabeled = vec![5, 5, 3, 3, 7, 7];
        assert_abs_diff_eq!(adjusted_rand(&a, &relabeled).unwrap(), 1.0, epsilon = 1e-12);
    }

    proptest! {
        #[test]
        fn ari_matches_pair_counting(
            a in proptest::collection::vec(0i32..4, 4..20),
            seed in 0u64..50,
        ) {
            let mut rng = crate::seed::rng_from_seed(seed);
            use rand::Rng;
            let b: Vec<i32> = a.iter().map(|_| rng.random_range(-1..3)).collect();
            let formula = adjusted_rand(&a, &b).unwrap();
            let pairs = ari_pair_counting(&a, &b);
            prop_assert!((formula - pairs).abs() < 1e-9);
        }

        #[test]
        fn ari_is_symmetric(
            a in proptest::collection::vec(0i32..3, 4..16),
            b_seed in 0u64..50,
        ) {
            let mut rng = crate::seed::rng_from_seed(b_seed);
            use rand::Rng;
            let b: Vec<i32> = a.iter().map(|_| rng.random_range(0..3)).collect();
            let ab = adjusted_rand(&a, &b).unwrap();
            let ba = adjusted_rand(&b, &a).unwrap();
            prop_assert!((ab - ba).abs() < 1e-12);
        }
    }

    #[test]
    fn accuracy_finds_the_best_relabeling() {
        let truth = vec![0, 0, 0, 1, 1, 1];
        // predicted labels are swapped relative to truth: still perfect
        let predicted = vec![1, 1, 1, 0, 0, 0];
        assert_abs_diff_eq!(
            classification_accuracy(&truth, &predicted).unwrap(),
            1.0,
            epsilon = 1e-12
        );

        let one_off = vec![1, 1, 0, 0, 0, 0];
        assert_abs_diff_eq!(
            classification_accuracy(&truth, &one_off).unwrap(),
            5.0 / 6.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn accuracy_handles_unequal_cluster_counts() {
        // three predicted clusters for two true subgroups: the surplus
        // cluster goes unmatched
        let truth = vec![0, 0, 0, 0, 1, 1];
        let predicted = vec![0, 0, 2, 2, 1, 1];
        assert_abs_diff_eq!(
            classification_accuracy(&truth, &predicted).unwrap(),
            4.0 / 6.0,
            epsilon = 1e-12
        );
        // all-noise prediction: one cluster matched to the larger subgroup
        let noise = vec![NOISE; 6];
        assert_abs_diff_eq!(
            classification_accuracy(&truth, &noise).unwrap(),
            4.0 / 6.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn hungarian_agrees_with_exhaustive() {
        let mut rng = crate::seed::rng_from_seed(77);
        use rand::Rng;
        for _ in 0..200 {
            let rows = rng.random_range(1..=5);
            let cols = rng.random_range(1..=5);
            let counts: Vec<Vec<u64>> = (0..rows)
                .map(|_| (0..cols).map(|_| rng.random_range(0..20)).collect())
                .collect();
            assert_eq!(
                exhaustive_assignment(&counts),
                hungarian_assignment(&counts),
                "mismatch on {counts:?}"
            );
        }
    }

    proptest! {
        #[test]
        fn accuracy_is_at_least_chance_for_constant_predictions(
            truth in proptest::collection::vec(0usize..3, 2..30),
        ) {
            let predicted = vec![0i32; truth.len()];
            let acc = classification_accuracy(&truth, &predicted).unwrap();
            let chance = chance_level(&truth).unwrap();
            prop_assert!((acc - chance).abs() < 1e-12);
        }

        #[test]
        fn accuracy_is_permutation_invariant_in_labels(
            truth in proptest::collection::vec(0usize..3, 4..20),
            seed in 0u64..30,
        ) {
            let mut rng = crate::seed::rng_from_seed(seed);
            use rand::Rng;
            let predicted: Vec<i32> = truth.iter().map(|_| rng.random_range(0..3)).collect();
            let acc = classification_accuracy(&truth, &predicted).unwrap();
            // relabel predicted clusters by a fixed permutation
            let perm = [2, 0, 1];
            let relabeled: Vec<i32> = predicted.iter().map(|&l| perm[l as usize]).collect();
            let acc2 = classification_accuracy(&truth, &relabeled).unwrap();
            prop_assert!((acc - acc2).abs() < 1e-12);
        }
    }

    #[test]
    fn chance_level_is_the_largest_share() {
        assert_abs_diff_eq!(chance_level(&[0, 1, 1, 1, 1, 1, 1, 1, 1, 1]).unwrap(), 0.9, epsilon = 1e-12);
        assert_abs_diff_eq!(chance_level(&[0, 0, 1, 1]).unwrap(), 0.5, epsilon = 1e-12);
        assert!(chance_level(&[]).is_err());
    }

    #[test]
    fn clustered_threshold_is_inclusive() {
        assert!(clustered(0.5));
        assert!(clustered(0.7));
        assert!(!clustered(0.499999));
    }
}
