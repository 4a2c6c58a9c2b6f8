//! Density-based detection needs no candidate cluster counts: the fit
//! either finds density structure or declares everything noise. Finding
//! clusters is not yet a detection, though — the power pipeline also asks
//! the found clusters to score well. Sample size matters a lot, which is
//! easy to see here.

use cluster_power::cluster::{hdbscan, HdbscanConfig};
use cluster_power::power::{realize_and_sample, PopulationModel};
use cluster_power::validate::silhouette;

fn main() -> cluster_power::Result<()> {
    let config = HdbscanConfig::default();

    for (label, delta, n) in [
        ("well separated, n=80", 6.0, 80),
        ("well separated, n=10", 6.0, 10),
        ("overlapping, n=80", 1.0, 80),
    ] {
        let model = PopulationModel::equidistant_plain(2, delta, vec![0.5, 0.5]);
        let dataset = realize_and_sample(&model, n, 3)?;
        let result = hdbscan(&dataset.data, &config)?;
        let noise = result.labels.iter().filter(|&&l| l == -1).count();
        // the pipeline's decision rule: silhouette over the assigned
        // points (noise excluded) has to clear 0.5
        let score = silhouette(&dataset.data, &result.labels).ok();
        println!(
            "{label:<22} clusters: {}  noise: {noise:>2}/{n}  score: {}  detected: {}",
            result.n_clusters,
            score.map_or("    -".into(), |s| format!("{s:+.2}")),
            score.is_some_and(|s| s >= 0.5),
        );
    }

    println!();
    println!("With 10 points nothing reaches the minimum cluster size of 5,");
    println!("so small samples report no structure no matter how separated");
    println!("the subgroups are. Overlapping subgroups can still shatter");
    println!("into local density bumps, but those score too poorly to pass.");
    Ok(())
}
