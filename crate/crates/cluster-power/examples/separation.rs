//! How far apart do cluster centers end up when many small per-feature
//! differences accumulate? Run with `cargo run --example separation`.

use cluster_power::datagen::expected_separation;

fn main() {
    // (label, per-feature standardized differences)
    let scenarios: [(&str, Vec<f64>); 4] = [
        ("one large feature", vec![0.8]),
        ("five medium features", vec![0.5; 5]),
        ("twenty small features", vec![0.3; 20]),
        (
            "mixed profile (20 small, 12 medium, 4 large)",
            [vec![0.3; 20], vec![0.5; 12], vec![0.8; 4]].concat(),
        ),
    ];

    println!("{:<45} {:>10} {:>12}", "scenario", "features", "separation");
    for (label, ds) in &scenarios {
        println!(
            "{:<45} {:>10} {:>12.4}",
            label,
            ds.len(),
            expected_separation(ds)
        );
    }

    println!();
    println!("A separation around 4 is usually comfortable to detect;");
    println!("below 2 the subgroups overlap heavily in feature space.");
}
