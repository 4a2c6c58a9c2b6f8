//! Head-to-head power of the fuzzy and crisp pipelines on identical data.
//!
//! Conditions that share a condition id draw the same datasets iteration
//! for iteration, so the comparison below is paired: any gap comes from
//! the algorithms, not from sampling luck.

use cluster_power::power::{estimate_power, Algorithm, PipelineSpec, PopulationModel, SimCondition};

fn condition(algorithm: Algorithm, delta: f64) -> SimCondition {
    let mut pipeline = PipelineSpec::new(algorithm);
    pipeline.k_range = (2, 7);
    SimCondition {
        config: "two_50_50".into(),
        proportions: "50/50".into(),
        delta,
        n: 20,
        model: PopulationModel::equidistant_plain(2, delta, vec![0.5, 0.5]),
        pipeline,
        // no algorithm in the id: both pipelines see the same datasets
        condition_id: format!("example/fuzzy_vs_crisp/d{delta}"),
    }
}

fn main() {
    let iterations = 40;
    println!("n=20, {iterations} paired iterations per separation:");
    println!("{:>10} {:>8} {:>8} {:>8}", "separation", "crisp", "fuzzy", "gap");

    for delta in [2.0, 3.0, 4.0, 6.0, 8.0] {
        let crisp = estimate_power(&condition(Algorithm::KMeans, delta), iterations, 42);
        let fuzzy = estimate_power(&condition(Algorithm::CMeans, delta), iterations, 42);
        println!(
            "{delta:>10} {:>8.2} {:>8.2} {:>+8.2}",
            crisp.power,
            fuzzy.power,
            fuzzy.power - crisp.power
        );
    }

    println!("\nThe fuzzy pipeline detects borderline structure more often at");
    println!("small separations; once separation is large both sit at 1.0.");
}
