//! Estimates a small power curve: detection probability as a function of
//! center separation, at a fixed sample size. The full grids run through
//! the CLI (`cluster-power power` / `cluster-power reproduce`); this keeps
//! iteration counts small so it finishes in seconds.

use cluster_power::power::{estimate_power, Algorithm, PipelineSpec, PopulationModel, SimCondition};

fn main() {
    let iterations = 40;
    let n = 20;
    println!("k-means, two equal subgroups, n={n}, {iterations} iterations per point:");
    println!("{:>10} {:>8} {:>16} {:>10}", "separation", "power", "95% interval", "accuracy");

    for delta in [1.0, 2.0, 3.0, 4.0, 5.0, 6.0] {
        let condition = SimCondition {
            config: "two_50_50".into(),
            proportions: "50/50".into(),
            delta,
            n,
            model: PopulationModel::equidistant_plain(2, delta, vec![0.5, 0.5]),
            pipeline: PipelineSpec::new(Algorithm::KMeans),
            condition_id: format!("example/power_curve/d{delta}"),
        };
        let estimate = estimate_power(&condition, iterations, 42);
        println!(
            "{delta:>10} {:>8.2} {:>7.2} - {:<6.2} {:>10.2}",
            estimate.power, estimate.ci_lo, estimate.ci_hi, estimate.mean_accuracy
        );
    }

    println!("\nPower rises steeply between separations 2 and 4; past 5 the");
    println!("subgroups are found essentially every time.");
}
