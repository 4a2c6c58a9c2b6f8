//! Builds the two population families and draws samples from them.

use cluster_power::datagen::covariance::CovarianceSpec;
use cluster_power::datagen::{
    make_equidistant_population, make_grid_population, sample, CovConfig, GridConfig,
};
use cluster_power::seed::rng_from_seed;

fn main() -> cluster_power::Result<()> {
    let mut rng = rng_from_seed(7);

    // Equidistant family: k centers pairwise at distance delta, few features.
    let pop = make_equidistant_population(
        3,
        4.0,
        &[0.33, 0.34, 0.33],
        2,
        &CovarianceSpec::Identity,
        &mut rng,
    )?;
    println!("equidistant population: k={}, min separation {:.3}", pop.k_true(), pop.min_separation());
    for (i, sub) in pop.subgroups.iter().enumerate() {
        println!(
            "  subgroup {i}: {:.0}% at ({:+.3}, {:+.3})",
            sub.proportion * 100.0,
            sub.mean[0],
            sub.mean[1]
        );
    }

    let dataset = sample(&pop, 12, &mut rng)?;
    println!("a sample of 12:");
    for (row, truth) in dataset.data.iter().zip(&dataset.truth) {
        println!("  ({:+.2}, {:+.2})  subgroup {truth}", row[0], row[1]);
    }

    // Grid family: 15 features, per-feature difference d on a subset of them.
    let mut rng = rng_from_seed(11);
    let grid = make_grid_population(GridConfig::TwoUnequal, 0.5, 15, CovConfig::Random, 15, &mut rng)?;
    println!();
    println!(
        "grid population: {} features, proportions {:?}, min separation {:.3}",
        grid.n_features,
        grid.proportions(),
        grid.min_separation()
    );
    let dataset = sample(&grid, 40, &mut rng)?;
    let n_small = dataset.truth.iter().filter(|&&t| t == 0).count();
    println!("a sample of 40 holds {n_small} points from the 10% subgroup");
    Ok(())
}
