//! The two supported agglomerative pipelines care about different things:
//! Ward on Euclidean distances groups by location, average linkage on
//! cosine distances groups by direction from the origin.

use cluster_power::cluster::{agglomerative, AgglomerativeConfig};
use cluster_power::validate::classification_accuracy;

fn main() -> cluster_power::Result<()> {
    // Two rays from the origin: same directions, very different magnitudes.
    let mut data = Vec::new();
    let mut by_direction = Vec::new();
    for i in 0..10 {
        let r = 1.0 + i as f64;
        data.push(vec![r, 0.1 * r]); // along x
        by_direction.push(0);
        data.push(vec![0.1 * r, r]); // along y
        by_direction.push(1);
    }

    let ward = agglomerative(&data, &AgglomerativeConfig::ward(2))?;
    let cosine = agglomerative(&data, &AgglomerativeConfig::average_cosine(2))?;

    println!(
        "agreement with the direction split: ward {:.2}, average/cosine {:.2}",
        classification_accuracy(&by_direction, &ward.labels)?,
        classification_accuracy(&by_direction, &cosine.labels)?,
    );
    println!("ward labels:    {:?}", ward.labels);
    println!("cosine labels:  {:?}", cosine.labels);
    println!();
    println!("Ward slices by distance, so near-origin points of both rays");
    println!("end up together; the cosine pipeline recovers the rays.");
    Ok(())
}
