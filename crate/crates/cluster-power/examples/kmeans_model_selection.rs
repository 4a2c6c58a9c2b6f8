//! Chooses the cluster count for k-means by silhouette: fit every candidate,
//! keep the best-scoring solution, and call it a detection only when the
//! winner clears 0.5.

use cluster_power::power::{model_select, realize_and_sample, Algorithm, PipelineSpec, PopulationModel};
use cluster_power::validate::classification_accuracy;

fn main() -> cluster_power::Result<()> {
    let model = PopulationModel::equidistant_plain(3, 5.0, vec![0.33, 0.34, 0.33]);
    let dataset = realize_and_sample(&model, 60, 17)?;

    let spec = PipelineSpec::new(Algorithm::KMeans);
    let selection = model_select(&dataset.data, &spec, 17)?.expect("scoreable");

    println!("silhouette per candidate cluster count:");
    for (k, score) in &selection.swept {
        let marker = if *k == selection.best_k { "  <- chosen" } else { "" };
        match score {
            Some(s) => println!("  k={k}: {s:.4}{marker}"),
            None => println!("  k={k}: (no scoreable solution)"),
        }
    }

    println!(
        "\ndetected: {} (threshold {})",
        selection.score >= spec.detection_threshold,
        spec.detection_threshold
    );
    let accuracy = classification_accuracy(&dataset.truth, &selection.labels)?;
    println!("accuracy against the generating subgroups: {accuracy:.3}");
    Ok(())
}
