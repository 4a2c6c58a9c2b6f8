//! Command-line front end. The library does the work; this binary parses
//! arguments, wires files to it, and reports progress on stderr so stdout
//! stays clean for data.
//!
//! Exit codes: 0 success, 1 a `reproduce --check` found cells outside the
//! tolerance, 2 usage or configuration problems, 3 I/O failures.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cluster_power::config::RunConfig;
use cluster_power::datagen::{expected_separation, Dataset};
use cluster_power::error::{Error, Result};
use cluster_power::io::{read_dataset_csv, write_dataset_csv, write_projection_csv};
use cluster_power::power::presets::{compare, Preset, DEFAULT_TOLERANCE_PCT};
use cluster_power::power::report::{write_csv, write_json, ConditionResult};
use cluster_power::power::{estimate_power, realize_and_sample};
use cluster_power::reduce::{mds, projected_separation, MdsConfig};
use cluster_power::seed::derive_seed;

#[derive(Parser)]
#[command(
    name = "cluster-power",
    version,
    about = "A-priori power analysis for cluster detection",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Combine per-feature standardized differences into a center distance
    Separation {
        /// Differences, comma-separated, each D or DxCOUNT (e.g. 0.3x20,0.5x12,0.8x4)
        #[arg(short = 'd', long = "differences", value_name = "LIST")]
        differences: String,
    },
    /// Draw one synthetic dataset from a config and write it as CSV
    Simulate {
        #[arg(long, value_name = "TOML")]
        config: PathBuf,
        /// Overrides the config's seed
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the config's output path (stdout otherwise)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate detection power over the configured condition grid
    Power {
        #[arg(long, value_name = "TOML")]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Monte-Carlo iterations per condition
        #[arg(long)]
        iterations: Option<usize>,
        /// Worker threads (results do not depend on this)
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Rerun a bundled study and diff it against its reference results
    Reproduce {
        /// table1 | table2 | cmeans_text | figure11
        preset: Option<String>,
        /// List the bundled studies and exit
        #[arg(long)]
        list: bool,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        iterations: usize,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Allowed gap to the reference, in percentage points
        #[arg(long, default_value_t = DEFAULT_TOLERANCE_PCT)]
        tolerance: f64,
        /// Exit with status 1 when any cell falls outside the tolerance
        #[arg(long)]
        check: bool,
    },
    /// Project a dataset to low dimension and write the coordinates
    Mds {
        /// Generate the dataset from this config
        #[arg(long, value_name = "TOML", conflicts_with = "input")]
        config: Option<PathBuf>,
        /// ... or read it from a dataset CSV
        #[arg(long, value_name = "CSV")]
        input: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Embedding dimension
        #[arg(long, default_value_t = 2)]
        components: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(error) => {
            eprintln!("error: {error}");
            match error {
                Error::Io(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Separation { differences } => {
            let ds = parse_differences(&differences)?;
            println!("{:.4}", expected_separation(&ds));
            Ok(ExitCode::SUCCESS)
        }
        Command::Simulate { config, seed, out } => simulate(&config, seed, out.as_deref()),
        Command::Power {
            config,
            seed,
            iterations,
            threads,
            out,
            format,
        } => power(&config, seed, iterations, threads, out.as_deref(), format),
        Command::Reproduce {
            preset,
            list,
            seed,
            iterations,
            threads,
            out,
            format,
            tolerance,
            check,
        } => reproduce(
            preset.as_deref(),
            list,
            seed,
            iterations,
            threads,
            out.as_deref(),
            format,
            tolerance,
            check,
        ),
        Command::Mds {
            config,
            input,
            seed,
            components,
            out,
        } => project(
            config.as_deref(),
            input.as_deref(),
            seed,
            components,
            out.as_deref(),
        ),
    }
}

/// Parses "0.3x20,0.5x12,0.8x4" into a flat list of per-feature differences.
fn parse_differences(text: &str) -> Result<Vec<f64>> {
    let mut ds = Vec::new();
    for token in text.split(',') {
        let token = token.trim();
        if token.is_empty() {
            return Err(Error::Parse(format!("empty difference in '{text}'")));
        }
        let (d, count) = match token.split_once(['x', 'X']) {
            Some((d, count)) => {
                let count: usize = count.trim().parse().map_err(|_| {
                    Error::Parse(format!("bad feature count in '{token}'"))
                })?;
                (d.trim(), count)
            }
            None => (token, 1),
        };
        let d: f64 = d
            .parse()
            .map_err(|_| Error::Parse(format!("bad difference in '{token}'")))?;
        ds.extend(std::iter::repeat(d).take(count));
    }
    if ds.is_empty() {
        return Err(Error::Parse("no differences given".into()));
    }
    Ok(ds)
}

fn simulate(config_path: &Path, seed: Option<u64>, out: Option<&Path>) -> Result<ExitCode> {
    let config = RunConfig::load(config_path)?;
    let seed = seed.unwrap_or(config.simulation.seed);
    let resolved = config.population.resolve(config.primary_delta())?;
    let dataset = realize_and_sample(&resolved.model, config.primary_n(), seed)?;
    let out = out.or(config.output.path.as_deref());
    with_output(out, |mut w| write_dataset_csv(&dataset, &mut w))?;
    eprintln!(
        "wrote {} points x {} features, {} subgroups ({})",
        dataset.data.len(),
        dataset.data.first().map_or(0, Vec::len),
        resolved.model.k_true(),
        resolved.label,
    );
    Ok(ExitCode::SUCCESS)
}

fn power(
    config_path: &Path,
    seed: Option<u64>,
    iterations: Option<usize>,
    threads: Option<usize>,
    out: Option<&Path>,
    format: Option<Format>,
) -> Result<ExitCode> {
    let config = RunConfig::load(config_path)?;
    let seed = seed.unwrap_or(config.simulation.seed);
    let iterations = iterations.unwrap_or(config.simulation.iterations);
    configure_threads(threads)?;
    let conditions = config.conditions()?;
    let rows = run_conditions(&conditions, iterations, seed);
    let out = out.or(config.output.path.as_deref());
    let format = format.unwrap_or(match config.output.format.as_deref() {
        Some("json") => Format::Json,
        _ => Format::Csv,
    });
    write_report(&rows, format, out)?;
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn reproduce(
    preset: Option<&str>,
    list: bool,
    seed: u64,
    iterations: usize,
    threads: Option<usize>,
    out: Option<&Path>,
    format: Option<Format>,
    tolerance: f64,
    check: bool,
) -> Result<ExitCode> {
    if list {
        for preset in Preset::ALL {
            println!("{:<12} {}", preset.name(), preset.description());
        }
        return Ok(ExitCode::SUCCESS);
    }
    let preset = Preset::parse(preset.ok_or_else(|| {
        Error::Config("name a bundled study to rerun, or pass --list to see them".into())
    })?)?;
    configure_threads(threads)?;
    let conditions = preset.conditions()?;
    eprintln!(
        "rerunning {} ({} cells, {iterations} iterations each)",
        preset.name(),
        conditions.len()
    );
    let rows = run_conditions(&conditions, iterations, seed);
    write_report(&rows, format.unwrap_or(Format::Csv), out)?;

    let comparison = compare(&rows, &preset.reference(), tolerance);
    for row in comparison.outliers() {
        eprintln!(
            "outside tolerance: {} {} d{} n{}: reference {:.0}%, this run {:.0}%",
            row.config,
            row.algorithm,
            row.delta,
            row.n,
            row.reference_pct,
            row.estimated_pct.unwrap_or(f64::NAN),
        );
    }
    eprintln!("{}", comparison.summary());
    if check && !comparison.all_within() {
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn project(
    config_path: Option<&Path>,
    input: Option<&Path>,
    seed: Option<u64>,
    components: usize,
    out: Option<&Path>,
) -> Result<ExitCode> {
    let mut mds_config = MdsConfig {
        n_components: components,
        ..MdsConfig::default()
    };
    let (dataset, config_out) = match (config_path, input) {
        (Some(path), None) => {
            let config = RunConfig::load(path)?;
            let seed = seed.unwrap_or(config.simulation.seed);
            let resolved = config.population.resolve(config.primary_delta())?;
            // apply the config's embedding dimension unless the flag overrode it
            if components == 2 {
                mds_config.n_components = config.pipeline.mds_components;
            }
            let dataset = realize_and_sample(&resolved.model, config.primary_n(), seed)?;
            (dataset, config.output.path.clone())
        }
        (None, Some(path)) => {
            let file = File::open(path)?;
            (read_dataset_csv(BufReader::new(file))?, None)
        }
        _ => {
            return Err(Error::Config(
                "give exactly one input: --config TOML or --input CSV".into(),
            ))
        }
    };

    let reduce_seed = derive_seed(seed.unwrap_or(42), "reduce");
    let result = mds(&dataset.data, &mds_config, reduce_seed)?;
    let out = out.or(config_out.as_deref());
    with_output(out, |mut w| {
        write_projection_csv(&result.coords, Some(&dataset.truth), &mut w)
    })?;
    describe_projection(&result.coords, &dataset, result.stress);
    Ok(ExitCode::SUCCESS)
}

fn describe_projection(coords: &[Vec<f64>], dataset: &Dataset, stress: f64) {
    match projected_separation(coords, &dataset.truth) {
        Ok(sep) => eprintln!("stress {stress:.6}, projected center separation {sep:.4}"),
        Err(_) => eprintln!("stress {stress:.6}"),
    }
}

fn run_conditions(
    conditions: &[cluster_power::power::SimCondition],
    iterations: usize,
    seed: u64,
) -> Vec<ConditionResult> {
    let total = conditions.len();
    conditions
        .iter()
        .enumerate()
        .map(|(i, cond)| {
            let estimate = estimate_power(cond, iterations, seed);
            eprintln!(
                "[{}/{total}] {} {} d{} n{}: power {:.2}",
                i + 1,
                cond.config,
                cond.pipeline.algorithm.name(),
                cond.delta,
                cond.n,
                estimate.power,
            );
            ConditionResult::new(cond, estimate)
        })
        .collect()
}

fn write_report(rows: &[ConditionResult], format: Format, out: Option<&Path>) -> Result<()> {
    let rows_failed = rows.iter().filter(|r| r.estimate.n_used == 0).count();
    with_output(out, |mut w| match format {
        Format::Csv => write_csv(rows, rows_failed, &mut w),
        Format::Json => write_json(rows, rows_failed, &mut w),
    })
}

/// Runs `write` against the file at `path`, or stdout when there is none.
fn with_output(
    path: Option<&Path>,
    write: impl FnOnce(&mut dyn Write) -> Result<()>,
) -> Result<()> {
    match path {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path)?);
            write(&mut file)?;
            file.flush()?;
            Ok(())
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)?;
            lock.flush()?;
            Ok(())
        }
    }
}

fn configure_threads(threads: Option<usize>) -> Result<()> {
    if let Some(n) = threads {
        if n == 0 {
            return Err(Error::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn differences_expand_counts() {
        let ds = parse_differences("0.3x20,0.5x12,0.8x4").unwrap();
        assert_eq!(ds.len(), 36);
        let separation = expected_separation(&ds);
        assert!((separation - 2.7129).abs() < 1e-3);
        assert_eq!(parse_differences("1.5").unwrap(), vec![1.5]);
        assert_eq!(parse_differences("2X3").unwrap(), vec![2.0, 2.0, 2.0]);
    }

    #[test]
    fn bad_difference_lists_are_rejected() {
        for text in ["", "0.3x", "x4", "0.3,,0.5", "axb", "0.3x-1"] {
            assert!(parse_differences(text).is_err(), "{text:?} accepted");
        }
    }

    #[test]
    fn cli_declaration_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
