//! Density-based clustering via mutual-reachability single linkage with
//! excess-of-mass cluster extraction.
//!
//! The pipeline: core distances -> mutual reachability graph -> minimum
//! spanning tree (Prim) -> single-linkage hierarchy -> condensed tree
//! (clusters smaller than `min_cluster_size` dissolve into fall-out points)
//! -> stability-based cluster selection. The root is not selectable, so a
//! sample with no internal split that clears `min_cluster_size` on both
//! sides comes back as all noise rather than one big cluster.

use crate::error::{Error, Result};
use crate::numeric::euclidean;

#[derive(Debug, Clone)]
pub struct HdbscanConfig {
    /// Smallest subtree that can survive condensation as a cluster.
    pub min_cluster_size: usize,
    /// Neighbor rank defining the core distance (self excluded).
    pub min_samples: usize,
}

impl Default for HdbscanConfig {
    fn default() -> Self {
        HdbscanConfig {
            min_cluster_size: 5,
            min_samples: 5,
        }
    }
}

#[derive(Debug, Clone)]
pub struct HdbscanResult {
    /// Cluster index per point, -1 for noise. Clusters are numbered by their
    /// smallest member index.
    pub labels: Vec<i32>,
    pub n_clusters: usize,
}

impl HdbscanResult {
    fn all_noise(n: usize) -> Self {
        HdbscanResult {
            labels: vec![-1; n],
            n_clusters: 0,
        }
    }
}

/// Runs the density pipeline. Datasets too small to hold even one cluster
/// come back as all noise rather than an error.
pub fn hdbscan(data: &[Vec<f64>], config: &HdbscanConfig) -> Result<HdbscanResult> {
    if config.min_cluster_size < 2 {
        return Err(Error::InvalidSpec("min_cluster_size must be at least 2".into()));
    }
    if config.min_samples < 1 {
        return Err(Error::InvalidSpec("min_samples must be at least 1".into()));
    }
    let n = data.len();
    if n == 0 {
        return Ok(HdbscanResult::all_noise(0));
    }
    let p = data[0].len();
    if p == 0 || data.iter().any(|row| row.len() != p) {
        return Err(Error::ShapeMismatch("rows must share a positive width".into()));
    }
    // not enough points for a core distance or a single cluster
    if n <= config.min_samples || n < config.min_cluster_size {
        return Ok(HdbscanResult::all_noise(n));
    }

    let cores = core_distances(data, config.min_samples);
    let mst = prim_mst(data, &cores);
    let hierarchy = single_linkage(&mst, n);
    let condensed = condense(&hierarchy, n, config.min_cluster_size);
    let selected = excess_of_mass(&condensed);
    Ok(label_points(&condensed, &selected, n))
}

/// Total weight of the mutual-reachability spanning tree, for diagnostics and
/// cross-checking against other MST routes. Needs at least two points and
/// more points than `min_samples`.
pub fn mst_weight(data: &[Vec<f64>], min_samples: usize) -> Result<f64> {
    if min_samples < 1 {
        return Err(Error::InvalidSpec("min_samples must be at least 1".into()));
    }
    if data.len() <= min_samples.max(1) {
        return Err(Error::InvalidSpec(format!(
            "{} points cannot support core distances at min_samples={min_samples}",
            data.len()
        )));
    }
    let cores = core_distances(data, min_samples);
    Ok(prim_mst(data, &cores).iter().map(|e| e.weight).sum())
}

/// Distance from each point to its `min_samples`-th nearest other point.
fn core_distances(data: &[Vec<f64>], min_samples: usize) -> Vec<f64> {
    let n = data.len();
    let mut cores = Vec::with_capacity(n);
    for i in 0..n {
        let mut dists: Vec<f64> = (0..n)
            .filter(|&j| j != i)
            .map(|j| euclidean(&data[i], &data[j]))
            .collect();
        dists.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cores.push(dists[min_samples - 1]);
    }
    cores
}

fn mutual_reachability(data: &[Vec<f64>], cores: &[f64], a: usize, b: usize) -> f64 {
    euclidean(&data[a], &data[b]).max(cores[a]).max(cores[b])
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Edge {
    a: usize,
    b: usize,
    weight: f64,
}

/// Dense Prim over the implicit mutual-reachability graph, tracking the true
/// source vertex of every attachment.
fn prim_mst(data: &[Vec<f64>], cores: &[f64]) -> Vec<Edge> {
    let n = data.len();
    let mut in_tree = vec![false; n];
    let mut best_dist = vec![f64::INFINITY; n];
    let mut best_source = vec![0usize; n];
    let mut edges = Vec::with_capacity(n - 1);

    let mut current = 0usize;
    in_tree[0] = true;
    for _ in 1..n {
        let mut next = usize::MAX;
        let mut next_dist = f64::INFINITY;
        for j in 0..n {
            if in_tree[j] {
                continue;
            }
            let w = mutual_reachability(data, cores, current, j);
            if w < best_dist[j] {
                best_dist[j] = w;
                best_source[j] = current;
            }
            if best_dist[j] < next_dist {
                next_dist = best_dist[j];
                next = j;
            }
        }
        edges.push(Edge {
            a: best_source[next],
            b: next,
            weight: next_dist,
        });
        in_tree[next] = true;
        current = next;
    }
    // ascending weights; index tie-break keeps the order deterministic
    edges.sort_by(|x, y| {
        x.weight
            .partial_cmp(&y.weight)
            .unwrap()
            .then(x.a.cmp(&y.a))
            .then(x.b.cmp(&y.b))
    });
    edges
}

/// One internal node of the single-linkage dendrogram. Node ids: points are
/// 0..n, internal node i is n+i.
#[derive(Debug, Clone)]
struct SlNode {
    left: usize,
    right: usize,
    distance: f64,
    size: usize,
}

fn single_linkage(sorted_edges: &[Edge], n: usize) -> Vec<SlNode> {
    // union-find where each component remembers its current top node id
    let mut parent: Vec<usize> = (0..2 * n - 1).collect();
    let mut top: Vec<usize> = (0..2 * n - 1).collect();
    let mut size = vec![1usize; 2 * n - 1];
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        let mut root = x;
        while parent[root] != root {
            root = parent[root];
        }
        let mut walk = x;
        while parent[walk] != root {
            let next = parent[walk];
            parent[walk] = root;
            walk = next;
        }
        root
    }

    let mut nodes = Vec::with_capacity(n - 1);
    for (step, edge) in sorted_edges.iter().enumerate() {
        let ra = find(&mut parent, edge.a);
        let rb = find(&mut parent, edge.b);
        let node_id = n + step;
        nodes.push(SlNode {
            left: top[ra],
            right: top[rb],
            distance: edge.weight,
            size: size[ra] + size[rb],
        });
        parent[ra] = node_id;
        parent[rb] = node_id;
        size[node_id] = size[ra] + size[rb];
        top[node_id] = node_id;
    }
    nodes
}

/// Condensed hierarchy: only subtrees of at least `min_cluster_size` points
/// count as clusters; everything else becomes per-point fall-out records.
#[derive(Debug)]
struct CondensedTree {
    /// Index 0 is the root. `parent` is an index into this vec.
    clusters: Vec<CondensedCluster>,
    points: Vec<PointRecord>,
}

#[derive(Debug)]
struct CondensedCluster {
    parent: usize,
    lambda_birth: f64,
    size: usize,
    children: Vec<usize>,
}

#[derive(Debug)]
struct PointRecord {
    parent: usize,
    point: usize,
    lambda: f64,
}

fn lambda_of(distance: f64) -> f64 {
    if distance > 0.0 {
        1.0 / distance
    } else {
        f64::INFINITY
    }
}

fn condense(hierarchy: &[SlNode], n: usize, min_cluster_size: usize) -> CondensedTree {
    let mut tree = CondensedTree {
        clusters: vec![CondensedCluster {
            parent: 0,
            lambda_birth: 0.0,
            size: n,
            children: Vec::new(),
        }],
        points: Vec::new(),
    };
    if hierarchy.is_empty() {
        return tree;
    }

    let node_size = |id: usize| if id < n { 1 } else { hierarchy[id - n].size };
    // collect every leaf point under a dendrogram node
    let leaves_under = |id: usize| -> Vec<usize> {
        let mut stack = vec![id];
        let mut out = Vec::new();
        while let Some(cur) = stack.pop() {
            if cur < n {
                out.push(cur);
            } else {
                stack.push(hierarchy[cur - n].left);
                stack.push(hierarchy[cur - n].right);
            }
        }
        out
    };

    let root_id = n + hierarchy.len() - 1;
    let mut queue = std::collections::VecDeque::from([(root_id, 0usize)]);
    while let Some((node_id, cluster_idx)) = queue.pop_front() {
        let node = &hierarchy[node_id - n];
        let lambda = lambda_of(node.distance);
        let left_big = node_size(node.left) >= min_cluster_size;
        let right_big = node_size(node.right) >= min_cluster_size;

        match (left_big, right_big) {
            (true, true) => {
                // genuine split: both sides become new clusters
                for child_id in [node.left, node.right] {
                    let new_idx = tree.clusters.len();
                    tree.clusters.push(CondensedCluster {
                        parent: cluster_idx,
                        lambda_birth: lambda,
                        size: node_size(child_id),
                        children: Vec::new(),
                    });
                    tree.clusters[cluster_idx].children.push(new_idx);
                    queue.push_back((child_id, new_idx));
                }
            }
            (true, false) | (false, true) => {
                // the big side carries the cluster on; the small side's
                // points fall out here
                let (big, small) = if left_big {
                    (node.left, node.right)
                } else {
                    (node.right, node.left)
                };
                for point in leaves_under(small) {
                    tree.points.push(PointRecord {
                        parent: cluster_idx,
                        point,
                        lambda,
                    });
                }
                queue.push_back((big, cluster_idx));
            }
            (false, false) => {
                // the cluster dissolves entirely at this level
                for point in leaves_under(node_id) {
                    tree.points.push(PointRecord {
                        parent: cluster_idx,
                        point,
                        lambda,
                    });
                }
            }
        }
        // a queued id can be a bare point only when min_cluster_size == 1,
        // which the config guard excludes
        debug_assert!(node_id >= n);
        // drain queued leaf-point ids defensively (unreachable in practice)
        while queue.front().is_some_and(|&(id, _)| id < n) {
            let (point, cluster_idx) = queue.pop_front().unwrap();
            tree.points.push(PointRecord {
                parent: cluster_idx,
                point,
                lambda: f64::INFINITY,
            });
        }
    }
    tree
}

/// Stability of each condensed cluster: sum over child records of
/// (λ_child − λ_birth) · size. Infinite λ from zero-distance merges is
/// clamped so coincident points cannot poison the sums with inf − inf.
fn stabilities(tree: &CondensedTree) -> Vec<f64> {
    let finite = |lambda: f64| lambda.min(1e308);
    let mut stability = vec![0.0; tree.clusters.len()];
    for record in &tree.points {
        let birth = finite(tree.clusters[record.parent].lambda_birth);
        stability[record.parent] += finite(record.lambda) - birth;
    }
    for cluster in tree.clusters.iter().skip(1) {
        let birth = finite(tree.clusters[cluster.parent].lambda_birth);
        stability[cluster.parent] += (finite(cluster.lambda_birth) - birth) * cluster.size as f64;
    }
    stability
}

/// Excess-of-mass selection: a cluster wins over its descendants when its own
/// stability strictly exceeds their combined stability. The root (index 0)
/// never competes.
fn excess_of_mass(tree: &CondensedTree) -> Vec<usize> {
    let stability = stabilities(tree);
    let m = tree.clusters.len();
    let mut selected = vec![false; m];
    let mut score = stability.clone();

    // children always have higher indices, so reverse order is bottom-up
    for idx in (1..m).rev() {
        let combined: f64 = tree.clusters[idx].children.iter().map(|&c| score[c]).sum();
        if stability[idx] > combined {
            selected[idx] = true;
            // deselect the whole subtree below
            let mut stack = tree.clusters[idx].children.clone();
            while let Some(c) = stack.pop() {
                selected[c] = false;
                stack.extend(&tree.clusters[c].children);
            }
        } else {
            score[idx] = combined;
        }
    }
    (1..m).filter(|&idx| selected[idx]).collect()
}

fn label_points(tree: &CondensedTree, selected: &[usize], n: usize) -> HdbscanResult {
    // every point record under a selected cluster (including records of
    // dissolved descendants) belongs to it
    let mut records_of: Vec<Vec<usize>> = vec![Vec::new(); tree.clusters.len()];
    for record in &tree.points {
        records_of[record.parent].push(record.point);
    }

    let mut members: Vec<Vec<usize>> = Vec::with_capacity(selected.len());
    for &cluster in selected {
        let mut points = Vec::new();
        let mut stack = vec![cluster];
        while let Some(idx) = stack.pop() {
            points.extend(&records_of[idx]);
            stack.extend(&tree.clusters[idx].children);
        }
        points.sort_unstable();
        members.push(points);
    }
    members.sort_by_key(|m| m.first().copied().unwrap_or(usize::MAX));

    let mut labels = vec![-1i32; n];
    for (label, points) in members.iter().enumerate() {
        for &point in points {
            labels[point] = label as i32;
        }
    }
    HdbscanResult {
        labels,
        n_clusters: members.len(),
    }
}
