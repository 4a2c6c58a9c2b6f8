//! The outcome measures, on a sample small enough to eyeball: silhouette
//! for "is there structure", adjusted Rand and best-case accuracy for "is
//! it the right structure", and the chance level both are judged against.

use cluster_power::power::{realize_and_sample, PopulationModel};
use cluster_power::cluster::{kmeans, KMeansConfig};
use cluster_power::validate::{
    adjusted_rand, chance_level, classification_accuracy, silhouette,
};

fn main() -> cluster_power::Result<()> {
    let model = PopulationModel::equidistant_plain(2, 4.0, vec![0.1, 0.9]);
    let dataset = realize_and_sample(&model, 20, 5)?;
    let truth: Vec<i32> = dataset.truth.iter().map(|&t| t as i32).collect();

    let fit = kmeans(&dataset.data, &KMeansConfig::new(2), 5)?;

    println!("truth:  {:?}", dataset.truth);
    println!("labels: {:?}", fit.labels);
    println!();
    println!("silhouette          {:.4}", silhouette(&dataset.data, &fit.labels)?);
    println!("adjusted Rand       {:.4}", adjusted_rand(&truth, &fit.labels)?);
    println!(
        "accuracy            {:.4}",
        classification_accuracy(&dataset.truth, &fit.labels)?
    );
    println!("chance level        {:.4}", chance_level(&dataset.truth)?);
    println!();
    println!("With a 10/90 split, guessing the big subgroup is right 90% of");
    println!("the time, so accuracy only counts when it beats that.");
    Ok(())
}
