use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use tace::aggregate::{aggregate_paths, write_table};
use tace::config::{apply_overrides, Algorithm, Presets};
use tace::heatmap::Heatmap;
use tace::runner::{self, parse_seeds, RunSpec};
use tace::verify::{self, VerifyConfig};
use tace::Threaded;

#[derive(Parser)]
#[command(name = "tace", version, about = "Trajectory-constrained exploration experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train one algorithm on one environment for a list of seeds.
    Run {
        #[arg(long)]
        algo: Algorithm,
        /// Preset name (see `tace presets`).
        #[arg(long)]
        env: String,
        /// `1`, `1,2,7` or `1..5`.
        #[arg(long, default_value = "1")]
        seeds: String,
        /// Output directory; defaults to `runs/<algo>_<env>`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Extra preset file; its tables replace built-in presets of the same name.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override a preset key, e.g. `--set train.sigma.init=0.42`. Repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        /// Shorthand for `--set train.iterations=N`.
        #[arg(long)]
        iterations: Option<usize>,
    },
    /// Mean, standard deviation and standard error per iteration across runs.
    Aggregate {
        /// Run directories or metrics CSV files.
        #[arg(required = true)]
        runs: Vec<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check the performance bounds on random tabular instances.
    Verify {
        #[arg(long, default_value_t = 200)]
        instances: usize,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.5, 0.9, 0.99])]
        gammas: Vec<f64>,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Improvement threshold used for the σ lower bound column.
        #[arg(long, default_value_t = 0.01)]
        delta: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Sum visitation heatmaps and optionally draw them as text.
    Heatmap {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        ascii: bool,
    },
    /// List presets, or print one as TOML.
    Presets {
        #[arg(long)]
        config: Option<PathBuf>,
        name: Option<String>,
    },
}

fn output_writer(path: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(io::stdout().lock()),
    })
}

enum Failure {
    /// The request itself is wrong; exit status 2.
    Usage(anyhow::Error),
    /// The work failed; exit status 1.
    Run(anyhow::Error),
}

fn usage(e: anyhow::Error) -> Failure {
    Failure::Usage(e)
}

fn failed(e: anyhow::Error) -> Failure {
    Failure::Run(e)
}

fn run_command(
    algo: Algorithm,
    env: String,
    seeds: &str,
    out: Option<PathBuf>,
    config: Option<PathBuf>,
    mut overrides: Vec<String>,
    iterations: Option<usize>,
) -> std::result::Result<(), Failure> {
    let spec = (|| -> Result<RunSpec> {
        let presets = Presets::with_file(config.as_deref())?;
        if let Some(n) = iterations {
            overrides.push(format!("train.iterations={n}"));
        }
        let preset = apply_overrides(presets.get(&env)?, &overrides)?;
        let spec = RunSpec {
            algorithm: algo,
            out_dir: out.unwrap_or_else(|| PathBuf::from("runs").join(format!("{algo}_{env}"))),
            env_name: env,
            preset,
            seeds: parse_seeds(seeds)?,
        };
        spec.validate()?;
        Ok(spec)
    })()
    .map_err(usage)?;

    let exec = Threaded::from_env();
    let results = runner::run(&spec, &exec).map_err(failed)?;
    for r in &results {
        let o = &r.outcome;
        println!(
            "seed {}: {} iterations, {} phase(s), success {:.2}, return {:.2}, {:.1}s -> {}",
            r.seed,
            o.iterations,
            o.phases,
            o.final_success_rate,
            o.final_mean_return,
            o.wall_seconds,
            r.dir.display()
        );
    }
    Ok(())
}

fn real_main() -> std::result::Result<(), Failure> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { algo, env, seeds, out, config, overrides, iterations } => {
            run_command(algo, env, &seeds, out, config, overrides, iterations)
        }
        Command::Aggregate { runs, output } => (|| {
            let t = aggregate_paths(&runs)?;
            write_table(output_writer(output.as_ref())?, &t)
        })()
        .map_err(failed),
        Command::Verify { instances, gammas, seed, delta, output } => {
            let cfg = VerifyConfig { instances, gammas, seed, delta };
            let rows = verify::verify(&cfg).map_err(failed)?;
            verify::write_csv(output_writer(output.as_ref()).map_err(failed)?, &rows).map_err(failed)?;
            let s = verify::summarize(&rows);
            eprintln!(
                "{} rows: {} theorem, {} corollary, {} lemma failures",
                s.rows, s.theorem_failures, s.corollary_failures, s.lemma_failures
            );
            if s.all_hold() {
                Ok(())
            } else {
                Err(failed(anyhow::anyhow!("bound violations found")))
            }
        }
        Command::Heatmap { inputs, output, ascii } => (|| {
            let mut total: Option<Heatmap> = None;
            for p in &inputs {
                let f = File::open(p).with_context(|| format!("opening {}", p.display()))?;
                let h = Heatmap::read_csv(BufReader::new(f)).with_context(|| format!("reading {}", p.display()))?;
                match &mut total {
                    Some(t) => t.add(&h).with_context(|| format!("adding {}", p.display()))?,
                    None => total = Some(h),
                }
            }
            let total = total.expect("at least one input");
            if ascii {
                print!("{}", total.render_ascii());
            }
            if output.is_some() || !ascii {
                total.write_csv(output_writer(output.as_ref())?)?;
            }
            Ok(())
        })()
        .map_err(failed),
        Command::Presets { config, name } => (|| {
            let presets = Presets::with_file(config.as_deref())?;
            match name {
                Some(n) => print!("{}", toml::to_string_pretty(presets.get(&n)?)?),
                None => presets.names().for_each(|n| println!("{n}")),
            }
            Ok(())
        })()
        .map_err(usage),
    }
}

fn main() -> ExitCode {
    match real_main() {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
