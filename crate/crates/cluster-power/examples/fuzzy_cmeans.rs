//! Fuzzy c-means keeps graded memberships instead of hard labels. Points
//! near a center are decisive; points between centers hedge — and the fuzzy
//! silhouette weights each point by how decisive it is.

use cluster_power::cluster::{cmeans, CMeansConfig};
use cluster_power::power::{realize_and_sample, PopulationModel};
use cluster_power::validate::{fuzzy_silhouette, silhouette};

fn main() -> cluster_power::Result<()> {
    let model = PopulationModel::equidistant_plain(2, 3.0, vec![0.5, 0.5]);
    let dataset = realize_and_sample(&model, 30, 23)?;

    let result = cmeans(&dataset.data, &CMeansConfig::new(2), 23)?;

    println!("membership rows (cluster 0, cluster 1):");
    let mut rows: Vec<usize> = (0..dataset.data.len()).collect();
    // most decisive first
    rows.sort_by(|&a, &b| {
        let margin = |i: usize| (result.memberships[i][0] - result.memberships[i][1]).abs();
        margin(b).partial_cmp(&margin(a)).unwrap()
    });
    for &i in rows.iter().take(3) {
        println!(
            "  decisive: ({:+.2}, {:+.2}) -> [{:.3}, {:.3}]",
            dataset.data[i][0], dataset.data[i][1], result.memberships[i][0], result.memberships[i][1]
        );
    }
    for &i in rows.iter().rev().take(3) {
        println!(
            "  hedging:  ({:+.2}, {:+.2}) -> [{:.3}, {:.3}]",
            dataset.data[i][0], dataset.data[i][1], result.memberships[i][0], result.memberships[i][1]
        );
    }

    let crisp = silhouette(&dataset.data, &result.labels)?;
    let fuzzy = fuzzy_silhouette(&dataset.data, &result.memberships, 1.0)?;
    println!("\ncrisp silhouette of the hardened labels: {crisp:.4}");
    println!("fuzzy silhouette (decisive points upweighted): {fuzzy:.4}");
    Ok(())
}
