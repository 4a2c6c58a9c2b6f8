//! Clustering algorithms used by the power simulations.
//!
//! Centroid-based (k-means, fuzzy c-means), hierarchical (Ward / average
//! linkage via Lance-Williams), and density-based (mutual-reachability single
//! linkage with stability extraction). All are deterministic given their
//! inputs; the stochastic ones take an explicit seed.

pub mod agglomerative;
pub mod cmeans;
pub mod hdbscan;
pub mod kmeans;

pub use agglomerative::{agglomerative, AgglomerativeConfig, AgglomerativeResult, Linkage, Metric};
pub use cmeans::{cmeans, CMeansConfig, CMeansResult};
pub use hdbscan::{hdbscan, mst_weight, HdbscanConfig, HdbscanResult};
pub use kmeans::{kmeans, KMeansConfig, KMeansResult};
